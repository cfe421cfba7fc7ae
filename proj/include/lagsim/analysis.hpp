#ifndef LAGSIM_ANALYSIS_HPP
#define LAGSIM_ANALYSIS_HPP

#include <optional>
#include <string>
#include <vector>

#include "lagsim/fixation.hpp"
#include "lagsim/speed.hpp"
#include "lagsim/trajectory.hpp"

namespace lagsim {

enum class Verdict {
  transient,
  positive_recurrent,
  boundary_null_recurrent,
  boundary_transient_zero_speed,
  boundary_undetermined,
};

std::string verdict_name(Verdict v);

enum class Satisfied { yes, no, inconclusive };

/// Numerical evidence for one asymptotic condition: the decision
/// quantity evaluated on a geometric lag grid, its comparison level,
/// an extrapolated limit and the trend over the last grid points.
struct ConditionVerdict {
  std::string id;                 // cond1, cond2, prop6, lem_to0, assumptionA, assumptionB
  std::vector<double> grid;       // lag values, strictly decreasing
  std::vector<double> values;     // decision quantity per lag
  std::vector<double> reference;  // comparison level per lag (V(x)/2 etc.)
  double limit_estimate = 0.0;    // Aitken-extrapolated ratio limit
  std::string trend;              // decreasing | increasing | flat | mixed
  Satisfied satisfied = Satisfied::inconclusive;
  double chosen_p = 0.0;          // exponent found for the tail-decay check
};

struct RegimeReport {
  double m = 0.0;      // +inf allowed
  double V = 0.0;      // +inf allowed
  double vbar = 0.0;
  Verdict verdict = Verdict::boundary_undetermined;
  double transient_speed = 0.0;  // vbar - m when transient
  double boundary_tol = 1e-9;
  std::vector<ConditionVerdict> evidence;
  std::string note;
};

/// Geometric grid -2^k, k = k_lo .. k_hi.
std::vector<double> geometric_grid(int k_lo = 3, int k_hi = 24);

/// Analytic regime classification from the moment limits and the mean
/// environmental rate: net rate decides off the boundary; on the
/// boundary the verdict is delegated to the asymptotic condition
/// checkers, with an explicit undetermined outcome when the numerical
/// trends do not justify either conclusion.
RegimeReport classify(const MomentFunctionals& funcs, const SpeedModel& speed,
                      double tol = 1e-9);

/// |x psi(x)| against V(x)/2 on the grid; satisfied when the ratio
/// settles below one (recurrence-side boundary condition).
ConditionVerdict check_cond1(const MomentFunctionals& funcs, double v,
                             const std::vector<double>& grid);

/// The transience-side pair: ratio strictly above one with finite V,
/// plus decay of |x|^(p+2) * (second moment of fixed jumps above the
/// fraction beta of the lag) for some p found on a small grid.
/// Requires v equal to the drift limit within tolerance.
ConditionVerdict check_cond2_prop6(const MomentFunctionals& funcs, double v,
                                   const std::vector<double>& grid,
                                   double p0 = 0.9, double beta0 = 0.5);

/// |x|^(p+2) * int_{beta |x|}^{inf} a^2 g(x, a) nu(da): the tail-decay
/// quantity of the transience-side check (identically zero once
/// beta >= 2, where the acceptance window is empty).
double prop6_quantity(const MomentFunctionals& funcs, double x, double beta,
                      double p);

/// V(x)/|x| on the grid; decreases to zero whenever m is finite.
ConditionVerdict check_lem_to0(const MomentFunctionals& funcs,
                               const std::vector<double>& grid);

/// Boundary conditions for deterministic time-varying rates, built from
/// the rate envelope v_sup / v_inf instead of the mean.
ConditionVerdict check_assumption_a(const MomentFunctionals& funcs,
                                    const SpeedModel& speed,
                                    const std::vector<double>& grid);
ConditionVerdict check_assumption_b(const MomentFunctionals& funcs,
                                    const SpeedModel& speed,
                                    const std::vector<double>& grid);

struct SpeedEstimate {
  double mean = 0.0;
  double half_width = 0.0;  // 1.96 standard errors
  std::vector<double> per_path;
};

/// Ensemble terminal slope (X_T - X_0) / T with a normal-approximation
/// confidence interval.
SpeedEstimate estimate_speed(const std::vector<Trajectory>& ensemble);

struct ReturnTimeStats {
  std::size_t completed = 0;
  std::size_t censored = 0;
  double mean = 0.0;    // over completed excursions
  double median = 0.0;
  bool no_crossings = false;
  std::vector<double> durations;  // completed excursion lengths (tail data)
};

/// Excursion statistics below `level` pooled over the ensemble. An
/// excursion opens when the path enters (-inf, level) (or starts there)
/// and completes when it returns to [level, inf); open excursions at the
/// horizon are counted as censored.
ReturnTimeStats return_time_stats(const std::vector<Trajectory>& ensemble,
                                  double level);
ReturnTimeStats return_time_stats(const Trajectory& traj, double level);

/// Lebesgue fraction of [0, t_final] spent inside [lo, hi], exact on the
/// recorded polygonal path.
double occupation_fraction(const Trajectory& traj, double lo, double hi);

}  // namespace lagsim

#endif  // LAGSIM_ANALYSIS_HPP
