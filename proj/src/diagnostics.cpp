#include "lagsim/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "lagsim/errors.hpp"

namespace lagsim {
namespace {

// Gauss-Legendre 7 on [0,1]; enough for the smooth m(X_s) along one
// linear segment.
constexpr double kGlNodes[7] = {0.025446043828620812, 0.12923440720030277,
                                0.2970774243113014,  0.5,
                                0.7029225756886985,  0.8707655927996972,
                                0.9745539561713792};
constexpr double kGlWeights[7] = {0.06474248308443485, 0.13985269574463833,
                                  0.19091502525255946, 0.20897959183673470,
                                  0.19091502525255946, 0.13985269574463833,
                                  0.06474248308443485};

struct Kahan {
  double sum = 0.0;
  double c = 0.0;
  void add(double v) {
    const double y = v - c;
    const double t = sum + y;
    c = (t - sum) - y;
    sum = t;
  }
};

double phi_value(const PhiSpec& phi, double x) {
  if (phi.kind == PhiSpec::Kind::log_abs) return std::log(std::abs(x));
  const double p = phi.p;
  if (x <= -1.0) return std::pow(-x, -p);
  return 1.0 + p * (x + 1.0) + 0.5 * p * (p + 1.0) * (x + 1.0) * (x + 1.0);
}

double phi_deriv(const PhiSpec& phi, double x) {
  if (phi.kind == PhiSpec::Kind::log_abs) return 1.0 / x;
  const double p = phi.p;
  if (x <= -1.0) return p * std::pow(-x, -p - 1.0);
  return p + p * (p + 1.0) * (x + 1.0);
}

double phi_second(const PhiSpec& phi, double x) {
  if (phi.kind == PhiSpec::Kind::log_abs) return -1.0 / (x * x);
  const double p = phi.p;
  if (x <= -1.0) return p * (p + 1.0) * std::pow(-x, -p - 2.0);
  return p * (p + 1.0);
}

}  // namespace

MeanDriftEvaluator::MeanDriftEvaluator(const MomentFunctionals& funcs,
                                       double x_min, double x_max, double tol)
    : funcs_(&funcs) {
  const auto& measure = funcs.measure();
  direct_ = measure.is_atomic() ||
            funcs.model().kind == FixationKind::step_limit;
  odd_symmetric_ = !measure.is_atomic() &&
                   measure.support_sign() == SupportSign::two_sided;
  if (direct_) return;

  // Table covers the negative side; positive lags are either zero
  // (positive-only support) or the odd reflection (symmetric two-sided).
  lo_ = std::min(x_min, -1e-3);
  hi_ = 0.0;
  if (!(lo_ < hi_)) lo_ = -1.0;

  // Bisect intervals whose midpoint disagrees with linear interpolation;
  // every evaluated midpoint joins the table, but only failing intervals
  // spawn further work, so flat stretches stay coarse. The evaluator is
  // cubic, whose error scales like the square of the linear midpoint
  // error, so the bisection criterion is the square root of the target.
  const double lin_tol = std::sqrt(tol) / 8.0;
  const double max_width = (hi_ - lo_) / 64.0;  // keeps cubic stencils local
  std::map<double, double> table;
  auto eval_at = [&](double x) {
    const double y = funcs.m_of_x(x);
    table.emplace(x, y);
    return y;
  };
  struct Span {
    double a, fa, b, fb;
    int depth;
  };
  std::vector<Span> work;
  const double quarters[5] = {lo_, 0.75 * lo_, 0.5 * lo_, 0.25 * lo_, 0.0};
  for (int i = 0; i + 1 < 5; ++i) {
    const double fa = i == 0 ? eval_at(quarters[0]) : table[quarters[i]];
    const double fb = eval_at(quarters[i + 1]);
    work.push_back({quarters[i], fa, quarters[i + 1], fb, 0});
  }
  while (!work.empty() && table.size() < 4000) {
    const Span s = work.back();
    work.pop_back();
    const double mid = 0.5 * (s.a + s.b);
    if (mid <= s.a || mid >= s.b) continue;
    const double actual = eval_at(mid);
    const double interp = 0.5 * (s.fa + s.fb);
    const bool too_wide = (s.b - s.a) > max_width;
    if ((too_wide ||
         std::abs(actual - interp) > lin_tol * std::max(1.0, std::abs(actual))) &&
        s.depth < 22) {
      work.push_back({s.a, s.fa, mid, actual, s.depth + 1});
      work.push_back({mid, actual, s.b, s.fb, s.depth + 1});
    }
  }
  xs_.clear();
  ys_.clear();
  for (const auto& [x, y] : table) {
    xs_.push_back(x);
    ys_.push_back(y);
  }
  (void)x_max;
}

double MeanDriftEvaluator::table_eval(double x) const {
  if (x >= hi_) return ys_.back();
  if (x <= lo_) return funcs_->m_of_x(x);
  const auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
  std::size_t i = static_cast<std::size_t>(it - xs_.begin());
  if (i == 0) i = 1;
  // cubic through the 4 nearest nodes (clamped at the ends)
  std::size_t j0 = i >= 2 ? i - 2 : 0;
  if (j0 + 3 >= xs_.size()) j0 = xs_.size() - 4;
  double result = 0.0;
  for (std::size_t a = 0; a < 4; ++a) {
    double term = ys_[j0 + a];
    for (std::size_t b = 0; b < 4; ++b) {
      if (a == b) continue;
      term *= (x - xs_[j0 + b]) / (xs_[j0 + a] - xs_[j0 + b]);
    }
    result += term;
  }
  return result;
}

double MeanDriftEvaluator::operator()(double x) const {
  if (direct_) return funcs_->m_of_x(x);
  if (x < 0.0) return table_eval(x);
  if (x == 0.0) return 0.0;
  if (!odd_symmetric_) return 0.0;   // no adverse mutations to fix
  return -table_eval(-x);
}

namespace {

std::vector<Sample> residual_impl(const Trajectory& traj,
                                  const MeanDriftEvaluator& drift) {
  std::vector<Sample> out;
  out.reserve(traj.samples.size());
  const std::vector<PathPoint> path = merged_path(traj);
  if (path.empty()) return out;

  Kahan jump_sum;
  Kahan drift_int;
  out.push_back({path.front().t, 0.0});
  for (std::size_t i = 1; i < path.size(); ++i) {
    const PathPoint& a = path[i - 1];
    const PathPoint& b = path[i];
    const double dt = b.t - a.t;
    if (dt > 0.0) {
      const double xa = a.x_right;
      const double xb = b.x_left;
      double seg = 0.0;
      for (int k = 0; k < 7; ++k) {
        seg += kGlWeights[k] * drift(xa + (xb - xa) * kGlNodes[k]);
      }
      drift_int.add(seg * dt);
    }
    if (b.is_jump) jump_sum.add(b.alpha);
    if (!b.is_jump) {
      out.push_back({b.t, jump_sum.sum - drift_int.sum});
    }
  }
  return out;
}

}  // namespace

std::vector<Sample> martingale_residual(const Trajectory& traj,
                                        const MeanDriftEvaluator& drift) {
  return residual_impl(traj, drift);
}

std::vector<Sample> martingale_residual(const Trajectory& traj,
                                        const Scenario& sc) {
  double x_min = traj.x0;
  for (const Sample& s : traj.samples) x_min = std::min(x_min, s.x);
  for (const JumpEvent& e : traj.events) x_min = std::min(x_min, e.x_before);
  MomentFunctionals funcs(sc.measure, sc.model);
  MeanDriftEvaluator drift(funcs, x_min, 0.0);
  return residual_impl(traj, drift);
}

QvCheck quadratic_variation_check(const Trajectory& traj) {
  QvCheck check;
  const std::vector<PathPoint> path = merged_path(traj);
  if (path.empty()) return check;
  const double x0 = path.front().x_left;
  Kahan rhs;  // running 2 int X dX + sum (dX)^2
  check.x2_max = x0 * x0;
  for (std::size_t i = 1; i < path.size(); ++i) {
    const PathPoint& a = path[i - 1];
    const PathPoint& b = path[i];
    // chain rule over the continuous stretch
    rhs.add(b.x_left * b.x_left - a.x_right * a.x_right);
    if (b.is_jump) {
      rhs.add(2.0 * b.x_left * b.alpha + b.alpha * b.alpha);
      check.x2_max = std::max(check.x2_max, b.x_right * b.x_right);
    } else {
      const double lhs = b.x_left * b.x_left - x0 * x0;
      check.max_residual =
          std::max(check.max_residual, std::abs(lhs - rhs.sum));
      check.x2_max = std::max(check.x2_max, b.x_left * b.x_left);
    }
  }
  return check;
}

ItoCheck ito_inequality_check(const Trajectory& traj, const PhiSpec& phi,
                              double t_end) {
  ItoCheck check;
  if (phi.kind == PhiSpec::Kind::log_abs) {
    for (const Sample& s : traj.samples) {
      if (s.t <= t_end && s.x >= 0.0) {
        throw WindowViolationError("path reaches zero inside the log window");
      }
    }
    for (const JumpEvent& e : traj.events) {
      if (e.t <= t_end && (e.x_before >= 0.0 || e.x_after >= 0.0)) {
        throw WindowViolationError("path reaches zero inside the log window");
      }
    }
  }

  Kahan lhs, rhs;
  for (const JumpEvent& e : traj.events) {
    if (e.t > t_end || e.kind != EventKind::fixed) continue;
    ++check.n_jumps;
    double jump_term;
    if (phi.kind == PhiSpec::Kind::log_abs) {
      // log|x + a| - log|x| computed as log1p for accuracy on small jumps
      jump_term = std::log1p(e.alpha / e.x_before) -
                  phi_deriv(phi, e.x_before) * e.alpha;
    } else {
      jump_term = phi_value(phi, e.x_after) - phi_value(phi, e.x_before) -
                  phi_deriv(phi, e.x_before) * e.alpha;
    }
    lhs.add(jump_term);
    // Taylor sandwich at the pre-jump state: a monotone second
    // derivative bounds Phi''(x + beta dx) by Phi''(x) from above
    // (decreasing) or below (increasing).
    rhs.add(0.5 * phi_second(phi, e.x_before) * e.alpha * e.alpha);
  }
  check.lhs = lhs.sum;
  check.rhs = rhs.sum;
  const double slack =
      1e-12 * std::max({1.0, std::abs(check.lhs), std::abs(check.rhs)});
  check.holds = phi.kind == PhiSpec::Kind::log_abs
                    ? check.lhs <= check.rhs + slack
                    : check.lhs >= check.rhs - slack;
  return check;
}

}  // namespace lagsim
