#include "lagsim/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "lagsim/errors.hpp"

namespace lagsim {
namespace {

// Gauss-Kronrod 15-point nodes/weights on [-1,1]; the embedded 7-point
// Gauss rule reuses the odd-index nodes. All nodes are interior.
constexpr double kNodes[15] = {
    -0.991455371120813, -0.949107912342759, -0.864864423359769,
    -0.741531185599394, -0.586087235467691, -0.405845151377397,
    -0.207784955007898, 0.0,                0.207784955007898,
    0.405845151377397,  0.586087235467691,  0.741531185599394,
    0.864864423359769,  0.949107912342759,  0.991455371120813};
constexpr double kWeightsK[15] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728, 0.204432940075298,
    0.190350578064785, 0.169004726639267, 0.140653259715525,
    0.104790010322250, 0.063092092629979, 0.022935322010529};
constexpr double kWeightsG[7] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469, 0.381830050505119, 0.279705391489277,
    0.129484966168870};

struct PanelEstimate {
  double value;
  double error;
};

PanelEstimate gk15(const Integrand& f, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double sum_k = 0.0;
  double sum_g = 0.0;
  for (int i = 0; i < 15; ++i) {
    const double x = mid + half * kNodes[i];
    const double y = f(x);
    if (std::isnan(y)) {
      throw NonConvergentError("integrand returned NaN at x=" +
                               std::to_string(x));
    }
    if (std::isinf(y)) {
      throw DivergentError("integrand is infinite at x=" + std::to_string(x));
    }
    sum_k += kWeightsK[i] * y;
    if (i % 2 == 1) sum_g += kWeightsG[i / 2] * y;
  }
  const double vk = sum_k * half;
  const double vg = sum_g * half;
  // Standard QUADPACK-style sharpened error estimate.
  const double diff = std::abs(vk - vg);
  const double err = diff > 0 ? std::pow(200.0 * diff, 1.5) : 0.0;
  return {vk, std::min(err, diff * 200.0 + 1e-300)};
}

// Adaptive bisection within one panel. Accumulates value and achieved
// error bound; respects a local tolerance. Two guards keep singular or
// huge-magnitude panels (typical on the way to a divergence verdict)
// from recursing unboundedly: acceptance at machine-relative accuracy,
// and a hard node budget per panel tree. For self-similar singular
// integrands bisection only redistributes the error estimate, so depth
// alone is not a sufficient cap.
void refine(const Integrand& f, double a, double b, double tol, int depth,
            int max_depth, long* budget, double* value, double* error) {
  const PanelEstimate e = gk15(f, a, b);
  --*budget;
  if (e.error <= tol || e.error <= 1e-11 * std::abs(e.value) ||
      depth >= max_depth || *budget <= 0 || (b - a) < 1e-15 * std::abs(b)) {
    *value += e.value;
    *error += e.error;
    return;
  }
  const double mid = 0.5 * (a + b);
  refine(f, a, mid, 0.5 * tol, depth + 1, max_depth, budget, value, error);
  refine(f, mid, b, 0.5 * tol, depth + 1, max_depth, budget, value, error);
}

void refine_root(const Integrand& f, double a, double b, double tol,
                 int max_depth, double* value, double* error) {
  long budget = 4000;
  refine(f, a, b, tol, 0, max_depth, &budget, value, error);
}

// Behaviour of the final shells once the width floor is reached.
// Shells may grow for a while as they enter the integrand's support, so
// growth only counts as divergence at the floor itself.
struct TailFit {
  enum Kind { negligible, divergent, geometric, stuck } kind = stuck;
  double remainder = 0.0;
  double remainder_err = 0.0;
};

TailFit fit_shell_tail(const std::vector<double>& shells, double need) {
  TailFit fit;
  const int n = static_cast<int>(shells.size());
  const int window = std::min(n, 8);
  if (window < 3) {
    fit.kind = TailFit::negligible;
    return fit;
  }
  bool tiny = true;
  for (int i = n - window; i < n; ++i) tiny &= std::abs(shells[i]) < need / 64.0;
  if (tiny) {
    fit.kind = TailFit::negligible;
    return fit;
  }

  double rmin = std::numeric_limits<double>::infinity();
  double rmax = 0.0;
  bool valid = true;
  for (int i = n - window + 1; i < n; ++i) {
    const double a = std::abs(shells[i - 1]);
    const double b = std::abs(shells[i]);
    if (a == 0.0) {
      valid = false;
      break;
    }
    const double r = b / a;
    rmin = std::min(rmin, r);
    rmax = std::max(rmax, r);
  }
  if (!valid) {
    fit.kind = TailFit::stuck;
    return fit;
  }
  if (rmin >= 0.98) {
    fit.kind = TailFit::divergent;
    return fit;
  }
  if (rmax < 0.995) {
    // geometric decay: the remaining sum extrapolates in closed form,
    // with the ratio spread as its uncertainty
    const double r = 0.5 * (rmin + rmax);
    const double s = std::abs(shells[n - 1]);
    fit.kind = TailFit::geometric;
    fit.remainder = s * r / (1.0 - r);
    fit.remainder_err =
        fit.remainder * ((rmax - rmin) / (1.0 - rmax) + 1e-8);
    return fit;
  }
  fit.kind = TailFit::stuck;
  return fit;
}

}  // namespace

double integrate_adaptive(const Integrand& f, double a, double b,
                          const QuadratureOptions& opts) {
  if (!(a < b)) return 0.0;
  double value = 0.0;
  double error = 0.0;
  refine_root(f, a, b, opts.abs_tol, opts.max_depth, &value, &error);
  if (error > std::max(opts.abs_tol, opts.rel_tol * std::abs(value))) {
    throw NonConvergentError("adaptive quadrature did not reach tolerance");
  }
  return value;
}

double integrate_semi(const Integrand& f, double a, double b,
                      const QuadratureOptions& opts) {
  if (a < 0) throw NonConvergentError("integrate_semi requires a >= 0");
  if (!(a < b)) return 0.0;

  const bool unbounded = std::isinf(b);
  double total = 0.0;
  double total_err = 0.0;
  const double panel_tol = opts.abs_tol / 64.0;

  // One dyadic sweep toward a target endpoint. `lo..hi` is the covered
  // range; shells halve toward `target`.
  auto sweep = [&](double lo, double hi, bool toward_lo) {
    std::vector<double> shells;
    double width = hi - lo;
    double sum = 0.0;
    for (int k = 0; k < opts.max_shells; ++k) {
      const double w2 = width * 0.5;
      double pa, pb;
      if (toward_lo) {
        pa = lo + w2;
        pb = lo + width;
      } else {
        pa = hi - width;
        pb = hi - w2;
      }
      if (pb <= pa) break;
      double v = 0.0, e = 0.0;
      refine_root(f, pa, pb, panel_tol, opts.max_depth, &v, &e);
      shells.push_back(v);
      sum += v;
      total_err += e;
      width = w2;
      // Early stop once shells are negligible and narrower than any
      // feature the caller warned about; without a hint, refine all the
      // way down so interior boundary layers cannot be skipped over.
      const double scale = std::max(std::abs(sum), std::abs(total));
      const double stop_width = opts.min_feature_scale > 0.0
                                    ? opts.min_feature_scale
                                    : 1e-14 * (hi - lo);
      if (k >= 2 && width <= stop_width &&
          std::abs(shells[shells.size() - 1]) <
              std::max(opts.abs_tol, opts.rel_tol * scale) / 64.0 &&
          std::abs(shells[shells.size() - 2]) <
              std::max(opts.abs_tol, opts.rel_tol * scale) / 64.0) {
        return sum;
      }
    }
    // At the width floor: classify the remaining sliver.
    const double scale = std::max(std::abs(sum), std::abs(total));
    const double need = std::max(opts.abs_tol, opts.rel_tol * scale);
    const TailFit fit = fit_shell_tail(shells, need);
    switch (fit.kind) {
      case TailFit::negligible:
        return sum;
      case TailFit::divergent:
        throw DivergentError("non-integrable singularity near x=" +
                             std::to_string(toward_lo ? lo : hi));
      case TailFit::geometric: {
        const double sign = shells.back() >= 0.0 ? 1.0 : -1.0;
        sum += sign * fit.remainder;
        total_err += fit.remainder_err;
        return sum;
      }
      case TailFit::stuck:
        break;
    }
    throw NonConvergentError("shell refinement exhausted near x=" +
                             std::to_string(toward_lo ? lo : hi));
  };

  // Growing dyadic panels toward an infinite upper limit.
  auto sweep_up = [&](double lo) {
    std::vector<double> shells;
    double pa = lo;
    double pw = std::max(lo, 1.0);
    double sum = 0.0;
    for (int k = 0; k < opts.max_shells; ++k) {
      const double pb = pa + pw;
      double v = 0.0, e = 0.0;
      refine_root(f, pa, pb, panel_tol, opts.max_depth, &v, &e);
      shells.push_back(v);
      sum += v;
      total_err += e;
      pa = pb;
      pw *= 2.0;
      if (shells.size() >= 3) {
        const double s1 = std::abs(shells[shells.size() - 1]);
        const double s0 = std::abs(shells[shells.size() - 2]);
        const double scale = std::max(std::abs(sum), std::abs(total));
        const double need = std::max(opts.abs_tol, opts.rel_tol * scale);
        if (s1 < need / 64.0 && s0 < need / 64.0) return sum;
        if (s0 > 0 && s1 < 0.75 * s0) {
          const double r = s1 / s0;
          const double rem = s1 * r / (1.0 - r);
          if (rem < need / 8.0) {
            total_err += rem;
            return sum + (shells.back() > 0 ? rem : -rem);
          }
        }
      }
    }
    const double scale = std::max(std::abs(sum), std::abs(total));
    const double need = std::max(opts.abs_tol, opts.rel_tol * scale);
    const TailFit fit = fit_shell_tail(shells, need);
    switch (fit.kind) {
      case TailFit::negligible:
        return sum;
      case TailFit::divergent:
        throw DivergentError("integral diverges toward infinity");
      case TailFit::geometric: {
        const double sign = shells.back() >= 0.0 ? 1.0 : -1.0;
        sum += sign * fit.remainder;
        total_err += fit.remainder_err;
        return sum;
      }
      case TailFit::stuck:
        break;
    }
    throw NonConvergentError("tail refinement exhausted");
  };

  if (unbounded) {
    const double split = std::max(a * 2.0, a + 1.0);
    total += sweep(a, split, /*toward_lo=*/true);
    total += sweep_up(split);
  } else {
    const double mid = 0.5 * (a + b);
    total += sweep(a, mid, /*toward_lo=*/true);
    total += sweep(mid, b, /*toward_lo=*/false);
  }

  if (total_err > std::max(opts.abs_tol, opts.rel_tol * std::abs(total)) &&
      total_err > opts.abs_tol) {
    throw NonConvergentError("semi-infinite quadrature did not converge");
  }
  return total;
}

}  // namespace lagsim
