#include "lagsim/fixation.hpp"

#include <algorithm>
#include <cmath>

#include "lagsim/errors.hpp"

namespace lagsim {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Width of the Kimura acceptance boundary layer at lag x: the scale on
// which g(x, .) turns over near the edges of its support.
double feature_scale(double sigma, double x) {
  const double ax = std::abs(x);
  if (ax <= 0.0) return 0.0;
  return std::min(1.0, 1.0 / (4.0 * sigma * ax)) * 0.25;
}

}  // namespace

FixationModel FixationModel::kimura(double sigma) {
  if (!(sigma > 0.0)) throw ConfigError("fixation sigma must be > 0");
  return FixationModel{FixationKind::kimura_exp, sigma};
}

FixationModel FixationModel::haldane(double sigma) {
  if (!(sigma > 0.0)) throw ConfigError("fixation sigma must be > 0");
  return FixationModel{FixationKind::haldane_linear, sigma};
}

FixationModel FixationModel::step_limit() {
  return FixationModel{FixationKind::step_limit, 1.0};
}

FixationModel FixationModel::constant_for_test(double accept_prob) {
  if (accept_prob < 0.0 || accept_prob > 1.0) {
    throw ConfigError("constant_for_test acceptance must be in [0,1]");
  }
  return FixationModel{FixationKind::constant_test, accept_prob};
}

double selection_coefficient(double x, double alpha, double sigma) {
  if (x * alpha >= 0.0) return 0.0;
  const double a = std::abs(alpha);
  const double w = a * (2.0 * std::abs(x) - a);
  return w > 0.0 ? sigma * w : 0.0;
}

double fixation_prob(const FixationModel& model, double x, double alpha) {
  switch (model.kind) {
    case FixationKind::kimura_exp: {
      const double s = selection_coefficient(x, alpha, model.sigma);
      return s > 0.0 ? -std::expm1(-2.0 * s) : 0.0;
    }
    case FixationKind::haldane_linear: {
      const double s = selection_coefficient(x, alpha, model.sigma);
      return std::min(2.0 * s, 1.0);
    }
    case FixationKind::step_limit:
      return (x * alpha < 0.0 && std::abs(alpha) <= 2.0 * std::abs(x)) ? 1.0 : 0.0;
    case FixationKind::constant_test:
      return model.sigma;
  }
  return 0.0;
}

MomentFunctionals::MomentFunctionals(MutationMeasure measure, FixationModel model)
    : measure_(std::move(measure)), model_(model) {
  m_limit_ = measure_.positive_moment(1);
  v_limit_ = measure_.positive_moment(2);
}

double MomentFunctionals::moment_integral(int k, double x) const {
  if (x == 0.0) return 0.0;
  if (model_.kind == FixationKind::constant_test) {
    throw Error("moment functionals are undefined for the test-only model");
  }

  if (measure_.is_atomic()) {
    double s = 0.0;
    for (const Atom& a : measure_.atoms()) {
      const double g = fixation_prob(model_, x, a.location);
      if (g > 0.0) s += a.weight * std::pow(a.location, static_cast<double>(k)) * g;
    }
    return s;
  }

  const double ax = std::abs(x);
  const double lo = x < 0.0 ? 0.0 : -2.0 * ax;
  const double hi = x < 0.0 ? 2.0 * ax : 0.0;

  if (model_.kind == FixationKind::step_limit) {
    // Exact: g is the indicator of the support window.
    const double pos = measure_.positive_moment_between(k, 0.0, 2.0 * ax);
    if (x < 0.0) return pos;
    if (measure_.support_sign() != SupportSign::two_sided) return 0.0;
    // mirrored side: integral of alpha^k over [-2|x|, 0)
    return (k % 2 == 0) ? pos : -pos;
  }

  QuadratureOptions opts;
  opts.min_feature_scale = feature_scale(model_.sigma, x);
  auto f = [&](double alpha) {
    return std::pow(alpha, static_cast<double>(k)) * fixation_prob(model_, x, alpha);
  };

  // Haldane has interior kinks where 2 s crosses 1.
  std::vector<double> cuts{lo, hi};
  if (model_.kind == FixationKind::haldane_linear) {
    const double disc = ax * ax - 0.5 / model_.sigma;
    if (disc > 0.0) {
      const double r1 = ax - std::sqrt(disc);
      const double r2 = ax + std::sqrt(disc);
      for (double r : {r1, r2}) {
        const double cut = x < 0.0 ? r : -r;
        if (cut > lo && cut < hi) cuts.push_back(cut);
      }
    }
  }
  std::sort(cuts.begin(), cuts.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    total += measure_.integrate(f, cuts[i], cuts[i + 1], opts);
  }
  return total;
}

double MomentFunctionals::m_of_x(double x) const { return moment_integral(1, x); }

double MomentFunctionals::v_of_x(double x) const { return moment_integral(2, x); }

double MomentFunctionals::psi(double v, double x) const { return m_of_x(x) - v; }

std::pair<double, double> MomentFunctionals::limits() const {
  return {m_limit_, v_limit_};
}

double MomentFunctionals::m_deficit(double x) const {
  if (x >= 0.0) return m_limit_ - m_of_x(x);
  const double ax = std::abs(x);
  const double tail = measure_.positive_moment_between(1, 2.0 * ax, kInf);

  switch (model_.kind) {
    case FixationKind::step_limit:
      return tail;
    case FixationKind::kimura_exp: {
      if (measure_.is_atomic()) {
        // atoms at or beyond 2|x| are covered by the tail term
        double s = 0.0;
        for (const Atom& a : measure_.atoms()) {
          if (a.location > 0.0 && a.location < 2.0 * ax) {
            s += a.weight * a.location *
                 (1.0 - fixation_prob(model_, x, a.location));
          }
        }
        return s + tail;
      }
      QuadratureOptions opts;
      opts.min_feature_scale = feature_scale(model_.sigma, x);
      auto f = [&](double alpha) {
        const double s = selection_coefficient(x, alpha, model_.sigma);
        return alpha * std::exp(-2.0 * s);
      };
      return measure_.integrate(f, 0.0, 2.0 * ax, opts) + tail;
    }
    case FixationKind::haldane_linear: {
      if (measure_.is_atomic()) {
        double s = 0.0;
        for (const Atom& a : measure_.atoms()) {
          if (a.location > 0.0 && a.location < 2.0 * ax) {
            s += a.weight * a.location *
                 (1.0 - fixation_prob(model_, x, a.location));
          }
        }
        return s + tail;
      }
      // 1 - g vanishes between the kink roots; integrate the two flanks.
      const double disc = ax * ax - 0.5 / model_.sigma;
      QuadratureOptions opts;
      opts.min_feature_scale = feature_scale(model_.sigma, x);
      auto f = [&](double alpha) {
        return alpha * (1.0 - fixation_prob(model_, x, alpha));
      };
      if (disc <= 0.0) {
        return measure_.integrate(f, 0.0, 2.0 * ax, opts) + tail;
      }
      const double r1 = ax - std::sqrt(disc);
      const double r2 = ax + std::sqrt(disc);
      return measure_.integrate(f, 0.0, r1, opts) +
             measure_.integrate(f, r2, 2.0 * ax, opts) + tail;
    }
    case FixationKind::constant_test:
      throw Error("moment functionals are undefined for the test-only model");
  }
  return tail;
}

double MomentFunctionals::m_converged_at(double tol) const {
  if (std::isinf(m_limit_)) return kInf;
  double prev = m_of_x(-1.0);
  for (int k = 1; k <= 40; ++k) {
    const double x = -std::ldexp(1.0, k);
    const double cur = m_of_x(x);
    if (std::abs(cur - prev) <= tol * std::max(1.0, cur)) {
      return std::ldexp(1.0, k - 1);
    }
    prev = cur;
  }
  return kInf;
}

LipschitzReport MomentFunctionals::lipschitz_check(double k_lo, double k_hi,
                                                   int n_pairs,
                                                   RandomStream& rng) const {
  if (model_.kind != FixationKind::kimura_exp) {
    throw Error("lipschitz_check applies to the kimura_exp model only");
  }
  LipschitzReport rep;
  // c_K = 4 sigma * int_K alpha^2 nu(dalpha), closed form per family.
  double second = measure_.positive_moment_between(2, std::max(0.0, k_lo),
                                                   std::max(0.0, k_hi));
  if (measure_.is_atomic()) {
    second = 0.0;
    for (const Atom& a : measure_.atoms()) {
      if (a.location >= k_lo && a.location <= k_hi) {
        second += a.weight * a.location * a.location;
      }
    }
  } else if (measure_.support_sign() == SupportSign::two_sided && k_lo < 0.0) {
    second += measure_.positive_moment_between(2, std::max(0.0, -k_hi), -k_lo);
  }
  rep.c_k = 4.0 * model_.sigma * second;

  const double radius = std::max(std::abs(k_lo), std::abs(k_hi)) / 2.0;
  QuadratureOptions opts;
  opts.abs_tol = 1e-11;
  opts.rel_tol = 1e-9;

  for (int i = 0; i < n_pairs; ++i) {
    const double u = -radius + 2.0 * radius * rng.uniform01();
    const double w = -radius + 2.0 * radius * rng.uniform01();
    if (std::abs(u - w) < 1e-12) continue;

    double integral = 0.0;
    if (measure_.is_atomic()) {
      for (const Atom& a : measure_.atoms()) {
        if (a.location < k_lo || a.location > k_hi) continue;
        integral += a.weight * std::abs(a.location) *
                    std::abs(fixation_prob(model_, u, a.location) -
                             fixation_prob(model_, w, a.location));
      }
    } else {
      auto f = [&](double alpha) {
        return std::abs(alpha) * std::abs(fixation_prob(model_, u, alpha) -
                                          fixation_prob(model_, w, alpha));
      };
      // split at the support-edge kinks of both lags
      std::vector<double> cuts{k_lo, k_hi};
      for (double c : {0.0, 2.0 * std::abs(u), -2.0 * std::abs(u),
                       2.0 * std::abs(w), -2.0 * std::abs(w)}) {
        if (c > k_lo && c < k_hi) cuts.push_back(c);
      }
      std::sort(cuts.begin(), cuts.end());
      for (std::size_t j = 0; j + 1 < cuts.size(); ++j) {
        integral += measure_.integrate(f, cuts[j], cuts[j + 1], opts);
      }
    }

    const double ratio = integral / std::abs(u - w);
    if (ratio > rep.max_ratio) {
      rep.max_ratio = ratio;
      rep.worst_u = u;
      rep.worst_w = w;
    }
  }
  rep.pass = rep.max_ratio <= rep.c_k * (1.0 + 1e-6);
  return rep;
}

}  // namespace lagsim
