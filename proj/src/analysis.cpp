#include "lagsim/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "lagsim/errors.hpp"

namespace lagsim {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Trend {
  enum Kind { decreasing, increasing, flat, mixed } kind = flat;
  double aitken = 0.0;
};

const char* trend_name(Trend::Kind k) {
  switch (k) {
    case Trend::decreasing: return "decreasing";
    case Trend::increasing: return "increasing";
    case Trend::flat: return "flat";
    case Trend::mixed: return "mixed";
  }
  return "?";
}

// Direction of the last `window` values, with an Aitken delta-squared
// limit estimate from the final three. Non-finite values make the
// trend unusable (mixed).
Trend tail_trend(const std::vector<double>& v, int window = 5) {
  Trend t;
  const int n = static_cast<int>(v.size());
  if (n < 2) return t;
  const int start = std::max(0, n - window);
  for (int i = start; i < n; ++i) {
    if (!std::isfinite(v[i])) {
      t.kind = Trend::mixed;
      t.aitken = v[n - 1];
      return t;
    }
  }
  double vmax = 0.0;
  for (int i = start; i < n; ++i) vmax = std::max(vmax, std::abs(v[i]));
  const double tol = 1e-6 * std::max(1e-300, vmax);
  bool any_up = false, any_down = false;
  for (int i = start + 1; i < n; ++i) {
    const double d = v[i] - v[i - 1];
    if (d > tol) any_up = true;
    if (d < -tol) any_down = true;
  }
  if (any_up && any_down) t.kind = Trend::mixed;
  else if (any_up) t.kind = Trend::increasing;
  else if (any_down) t.kind = Trend::decreasing;
  else t.kind = Trend::flat;

  t.aitken = v[n - 1];
  if (n >= 3) {
    const double a = v[n - 3], b = v[n - 2], c = v[n - 1];
    const double den = (c - b) - (b - a);
    if (std::abs(den) > 1e-14 * std::max(1.0, std::abs(c))) {
      const double est = c - (c - b) * (c - b) / den;
      if (std::isfinite(est)) t.aitken = est;
    }
  }
  return t;
}

// Decision ratios value/reference with 0/0 -> 0 and x/0 -> inf.
std::vector<double> ratios_of(const std::vector<double>& val,
                              const std::vector<double>& ref) {
  std::vector<double> r(val.size());
  for (std::size_t i = 0; i < val.size(); ++i) {
    if (ref[i] > 0.0) r[i] = val[i] / ref[i];
    else r[i] = val[i] > 0.0 ? kInf : 0.0;
  }
  return r;
}

// |x psi(x)| evaluated without cancellation: psi = (m - v) - deficit.
double abs_xpsi(const MomentFunctionals& funcs, double gap, double x) {
  const double deficit = funcs.m_deficit(x);
  return std::abs(x) * std::abs(gap - deficit);
}

}  // namespace

double prop6_quantity(const MomentFunctionals& funcs, double x, double beta,
                      double p) {
  const double ax = std::abs(x);
  const double lo = beta * ax;
  const double hi = 2.0 * ax;
  if (lo >= hi) return 0.0;
  double integral;
  if (funcs.model().kind == FixationKind::step_limit) {
    integral = funcs.measure().positive_moment_between(2, lo, hi);
  } else {
    QuadratureOptions opts;
    opts.min_feature_scale =
        std::min(1.0, 1.0 / (4.0 * funcs.model().sigma * ax)) * 0.25;
    auto f = [&](double a) {
      return a * a * fixation_prob(funcs.model(), x, a);
    };
    integral = funcs.measure().integrate(f, lo, hi, opts);
  }
  return std::pow(ax, p + 2.0) * integral;
}

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::transient: return "Transient";
    case Verdict::positive_recurrent: return "PositiveRecurrent";
    case Verdict::boundary_null_recurrent: return "BoundaryNullRecurrent";
    case Verdict::boundary_transient_zero_speed:
      return "BoundaryTransientZeroSpeed";
    case Verdict::boundary_undetermined: return "BoundaryUndetermined";
  }
  return "?";
}

std::vector<double> geometric_grid(int k_lo, int k_hi) {
  std::vector<double> g;
  for (int k = k_lo; k <= k_hi; ++k) g.push_back(-std::ldexp(1.0, k));
  return g;
}

ConditionVerdict check_cond1(const MomentFunctionals& funcs, double v,
                             const std::vector<double>& grid) {
  ConditionVerdict out;
  out.id = "cond1";
  out.grid = grid;
  const auto [m, V] = funcs.limits();
  // Within the boundary tolerance the drift gap is treated as exactly
  // zero; a residual gap would otherwise dominate |x psi(x)| at large
  // lags and poison the trend.
  double gap = m - v;
  if (std::abs(gap) <= 1e-9 * std::max({1.0, std::abs(m), std::abs(v)})) gap = 0.0;

  for (double x : grid) {
    out.values.push_back(abs_xpsi(funcs, gap, x));
    out.reference.push_back(0.5 * funcs.v_of_x(x));
  }
  const std::vector<double> r = ratios_of(out.values, out.reference);
  const Trend tr = tail_trend(r);
  out.trend = trend_name(tr.kind);
  out.limit_estimate = tr.aitken;

  const int n = static_cast<int>(r.size());
  const int start = std::max(0, n - 5);
  double rmax = 0.0, rmin = kInf;
  for (int i = start; i < n; ++i) {
    rmax = std::max(rmax, r[i]);
    rmin = std::min(rmin, r[i]);
  }

  if (tr.kind == Trend::mixed) {
    out.satisfied = Satisfied::inconclusive;
  } else if (rmax < 0.98 &&
             (tr.kind != Trend::increasing || tr.aitken < 0.98)) {
    out.satisfied = Satisfied::yes;
  } else if (rmin > 1.02 &&
             (tr.kind != Trend::decreasing || tr.aitken > 1.02)) {
    out.satisfied = Satisfied::no;
  } else if (std::isinf(V)) {
    // Secondary route: infinite variance limit with |x psi| staying
    // bounded keeps the drift term dominated.
    const Trend lt = tail_trend(out.values);
    out.satisfied = (lt.kind == Trend::decreasing || lt.kind == Trend::flat)
                        ? Satisfied::yes
                        : Satisfied::inconclusive;
  } else {
    out.satisfied = Satisfied::inconclusive;
  }
  return out;
}

ConditionVerdict check_cond2_prop6(const MomentFunctionals& funcs, double v,
                                   const std::vector<double>& grid, double p0,
                                   double beta0) {
  ConditionVerdict out;
  out.id = "cond2";
  out.grid = grid;
  const auto [m, V] = funcs.limits();
  double gap = m - v;
  if (std::abs(gap) <= 1e-9 * std::max({1.0, std::abs(m), std::abs(v)})) gap = 0.0;

  for (double x : grid) {
    out.values.push_back(abs_xpsi(funcs, gap, x));
    out.reference.push_back(0.5 * funcs.v_of_x(x));
  }
  const std::vector<double> r = ratios_of(out.values, out.reference);
  const Trend tr = tail_trend(r);
  out.trend = trend_name(tr.kind);
  out.limit_estimate = tr.aitken;

  if (std::isinf(V)) {
    out.satisfied = Satisfied::no;  // finite variance limit is required
    return out;
  }

  const int n = static_cast<int>(r.size());
  const int start = std::max(0, n - 5);

  auto prop6_ok = [&](double p, double beta) {
    std::vector<double> q;
    for (double x : grid) q.push_back(prop6_quantity(funcs, x, beta, p));
    bool all_zero = true;
    for (int i = start; i < n; ++i) all_zero &= q[i] == 0.0;
    if (all_zero) return true;
    const Trend qt = tail_trend(q);
    if (qt.kind != Trend::decreasing) return false;
    return q[n - 1] <= 0.6 * std::max(q[start], 1e-300);
  };

  for (double p = 0.1; p <= p0 + 1e-12; p += 0.1) {
    bool margin = true;
    for (int i = start; i < n; ++i) margin &= r[i] > 1.0 + 2.0 * p;
    if (!margin) continue;
    if (tr.kind == Trend::mixed) continue;
    if (prop6_ok(p, beta0 / 2.0) && prop6_ok(p, beta0 / 4.0)) {
      out.satisfied = Satisfied::yes;
      out.chosen_p = p;
      return out;
    }
  }

  double rmax = 0.0;
  for (int i = start; i < n; ++i) rmax = std::max(rmax, r[i]);
  out.satisfied = rmax < 1.0 ? Satisfied::no : Satisfied::inconclusive;
  return out;
}

ConditionVerdict check_lem_to0(const MomentFunctionals& funcs,
                               const std::vector<double>& grid) {
  ConditionVerdict out;
  out.id = "lem_to0";
  out.grid = grid;
  for (double x : grid) {
    out.values.push_back(funcs.v_of_x(x) / std::abs(x));
    out.reference.push_back(0.0);
  }
  const Trend tr = tail_trend(out.values);
  out.trend = trend_name(tr.kind);
  out.limit_estimate = tr.aitken;
  out.satisfied = tr.kind == Trend::decreasing &&
                          out.values.back() < 0.5 * out.values.front()
                      ? Satisfied::yes
                      : Satisfied::inconclusive;
  return out;
}

namespace {

// Shared core for the rate-envelope boundary checks: compares
// |x| (v_edge - m(x)) against V(x)/2, recurrence-side when `upper`.
ConditionVerdict check_assumption(const MomentFunctionals& funcs,
                                  const SpeedModel& speed,
                                  const std::vector<double>& grid, bool upper) {
  ConditionVerdict out;
  out.id = upper ? "assumptionA" : "assumptionB";
  out.grid = grid;
  const auto [m, V] = funcs.limits();
  const double edge = upper ? speed.v_sup() : speed.v_inf();
  const double gap = m - edge;  // psi_edge(x) = (m - edge) - deficit(x)

  for (double x : grid) {
    // signed |x| psi_edge(x), negated so "larger than V/2" is the
    // transience-side reading in both checks
    const double deficit = funcs.m_deficit(x);
    out.values.push_back(std::abs(x) * (deficit - gap));
    out.reference.push_back(0.5 * funcs.v_of_x(x));
  }
  const std::vector<double> r = ratios_of(out.values, out.reference);
  const Trend tr = tail_trend(r);
  out.trend = trend_name(tr.kind);
  out.limit_estimate = tr.aitken;

  const int n = static_cast<int>(r.size());
  const int start = std::max(0, n - 5);
  double rmax = 0.0, rmin = kInf;
  for (int i = start; i < n; ++i) {
    rmax = std::max(rmax, r[i]);
    rmin = std::min(rmin, r[i]);
  }

  if (tr.kind == Trend::mixed) {
    out.satisfied = Satisfied::inconclusive;
    return out;
  }
  if (upper) {
    // liminf |x| psi_sup > -V/2  <=>  ratio eventually below 1
    if (rmax < 0.98 && (tr.kind != Trend::increasing || tr.aitken < 0.98)) {
      out.satisfied = Satisfied::yes;
    } else if (rmin > 1.02) {
      out.satisfied = Satisfied::no;
    } else {
      out.satisfied = Satisfied::inconclusive;
    }
  } else {
    // limsup |x| psi_inf < -V/2  <=>  ratio eventually above 1
    if (std::isfinite(V) && rmin > 1.02 &&
        (tr.kind != Trend::decreasing || tr.aitken > 1.02)) {
      out.satisfied = Satisfied::yes;
    } else if (rmax < 0.98) {
      out.satisfied = Satisfied::no;
    } else {
      out.satisfied = Satisfied::inconclusive;
    }
  }
  return out;
}

}  // namespace

ConditionVerdict check_assumption_a(const MomentFunctionals& funcs,
                                    const SpeedModel& speed,
                                    const std::vector<double>& grid) {
  return check_assumption(funcs, speed, grid, /*upper=*/true);
}

ConditionVerdict check_assumption_b(const MomentFunctionals& funcs,
                                    const SpeedModel& speed,
                                    const std::vector<double>& grid) {
  return check_assumption(funcs, speed, grid, /*upper=*/false);
}

RegimeReport classify(const MomentFunctionals& funcs, const SpeedModel& speed,
                      double tol) {
  RegimeReport rep;
  const auto [m, V] = funcs.limits();
  rep.m = m;
  rep.V = V;
  rep.vbar = speed.vbar();
  rep.boundary_tol = tol;

  if (std::isinf(m)) {
    rep.verdict = Verdict::positive_recurrent;
    rep.note = "drift limit is infinite; the mean rate cannot keep up";
    return rep;
  }
  if (m == 0.0 && rep.vbar == 0.0) {
    rep.verdict = Verdict::boundary_undetermined;
    rep.note = "degenerate: no drift and no adaptable jumps";
    return rep;
  }

  const double gap = m - rep.vbar;
  const double scale = std::max(m, rep.vbar);
  if (gap > tol * scale) {
    rep.verdict = Verdict::positive_recurrent;
    return rep;
  }
  if (-gap > tol * scale) {
    rep.verdict = Verdict::transient;
    rep.transient_speed = rep.vbar - m;
    return rep;
  }

  // Boundary: the mean rates balance exactly (within tolerance).
  const std::vector<double> grid = geometric_grid();
  if (!speed.is_constant_rate() || speed.has_noise()) {
    ConditionVerdict a = check_assumption_a(funcs, speed, grid);
    ConditionVerdict b = check_assumption_b(funcs, speed, grid);
    rep.evidence.push_back(a);
    rep.evidence.push_back(b);
    if (speed.has_noise()) {
      rep.note =
          "balanced mean rate with a stochastic perturbation: boundary "
          "classification requires the perturbation to vanish";
      rep.verdict = Verdict::boundary_undetermined;
      return rep;
    }
    if (b.satisfied == Satisfied::yes) {
      ConditionVerdict c2 = check_cond2_prop6(funcs, rep.vbar, grid);
      rep.evidence.push_back(c2);
      if (c2.satisfied == Satisfied::yes) {
        rep.verdict = Verdict::boundary_transient_zero_speed;
        return rep;
      }
    }
    rep.verdict = Verdict::boundary_undetermined;
    rep.note = a.satisfied == Satisfied::yes
                   ? "rate-envelope condition holds: recurrent, but null "
                     "recurrence is not established for a varying rate"
                   : "varying rate at the balanced boundary: no decisive "
                     "envelope condition";
    return rep;
  }

  ConditionVerdict c1 = check_cond1(funcs, rep.vbar, grid);
  rep.evidence.push_back(c1);
  if (std::isfinite(m)) rep.evidence.push_back(check_lem_to0(funcs, grid));
  if (c1.satisfied == Satisfied::yes) {
    rep.verdict = Verdict::boundary_null_recurrent;
    return rep;
  }
  ConditionVerdict c2 = check_cond2_prop6(funcs, rep.vbar, grid);
  rep.evidence.push_back(c2);
  if (c2.satisfied == Satisfied::yes) {
    rep.verdict = Verdict::boundary_transient_zero_speed;
    return rep;
  }
  rep.verdict = Verdict::boundary_undetermined;
  rep.note = "balanced boundary with neither condition decisive";
  return rep;
}

SpeedEstimate estimate_speed(const std::vector<Trajectory>& ensemble) {
  if (ensemble.size() < 2) {
    throw Error("estimate_speed needs at least two trajectories");
  }
  SpeedEstimate est;
  for (const Trajectory& t : ensemble) {
    est.per_path.push_back((t.x_final - t.x0) / t.t_final);
  }
  const double n = static_cast<double>(est.per_path.size());
  est.mean = std::accumulate(est.per_path.begin(), est.per_path.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : est.per_path) ss += (v - est.mean) * (v - est.mean);
  const double sd = std::sqrt(ss / (n - 1.0));
  est.half_width = 1.96 * sd / std::sqrt(n);
  return est;
}

namespace {

void accumulate_excursions(const Trajectory& traj, double level,
                           ReturnTimeStats* stats) {
  {
    const std::vector<PathPoint> path = merged_path(traj);
    if (path.empty()) return;
    bool below = path.front().x_right < level;
    double entry = path.front().t;
    for (std::size_t i = 1; i < path.size(); ++i) {
      const PathPoint& a = path[i - 1];
      const PathPoint& b = path[i];
      const double xa = a.x_right;
      const double xb = b.x_left;
      if (b.t > a.t && xa != xb) {
        // linear segment crossing
        if (!below && xa >= level && xb < level) {
          below = true;
          entry = a.t + (xa - level) / (xa - xb) * (b.t - a.t);
        } else if (below && xb >= level) {
          const double cross = a.t + (xa - level) / (xa - xb) * (b.t - a.t);
          stats->durations.push_back(cross - entry);
          below = false;
        }
      }
      if (b.is_jump) {
        if (below && b.x_right >= level) {
          stats->durations.push_back(b.t - entry);
          below = false;
        } else if (!below && b.x_right < level) {
          below = true;
          entry = b.t;
        }
      }
    }
    if (below) ++stats->censored;
  }
}

void finalize_excursions(ReturnTimeStats* stats) {
  stats->completed = stats->durations.size();
  stats->no_crossings = stats->completed == 0 && stats->censored == 0;
  if (stats->completed > 0) {
    stats->mean = std::accumulate(stats->durations.begin(),
                                  stats->durations.end(), 0.0) /
                  static_cast<double>(stats->completed);
    std::vector<double> sorted = stats->durations;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t mid = sorted.size() / 2;
    stats->median = sorted.size() % 2 == 1
                        ? sorted[mid]
                        : 0.5 * (sorted[mid - 1] + sorted[mid]);
  }
}

}  // namespace

ReturnTimeStats return_time_stats(const std::vector<Trajectory>& ensemble,
                                  double level) {
  ReturnTimeStats stats;
  for (const Trajectory& traj : ensemble) {
    accumulate_excursions(traj, level, &stats);
  }
  finalize_excursions(&stats);
  return stats;
}

ReturnTimeStats return_time_stats(const Trajectory& traj, double level) {
  ReturnTimeStats stats;
  accumulate_excursions(traj, level, &stats);
  finalize_excursions(&stats);
  return stats;
}

double occupation_fraction(const Trajectory& traj, double lo, double hi) {
  const std::vector<PathPoint> path = merged_path(traj);
  if (path.size() < 2 || !(traj.t_final > 0.0)) return 0.0;
  double inside = 0.0;
  for (std::size_t i = 1; i < path.size(); ++i) {
    const PathPoint& a = path[i - 1];
    const PathPoint& b = path[i];
    const double dt = b.t - a.t;
    if (dt <= 0.0) continue;
    const double xa = a.x_right;
    const double xb = b.x_left;
    if (xa == xb) {
      if (xa >= lo && xa <= hi) inside += dt;
      continue;
    }
    const double xmin = std::min(xa, xb);
    const double xmax = std::max(xa, xb);
    const double overlap = std::min(xmax, hi) - std::max(xmin, lo);
    if (overlap > 0.0) inside += dt * overlap / (xmax - xmin);
  }
  return inside / traj.t_final;
}

}  // namespace lagsim
