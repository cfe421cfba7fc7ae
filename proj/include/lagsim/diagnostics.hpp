#ifndef LAGSIM_DIAGNOSTICS_HPP
#define LAGSIM_DIAGNOSTICS_HPP

#include <memory>
#include <vector>

#include "lagsim/fixation.hpp"
#include "lagsim/simulate.hpp"
#include "lagsim/trajectory.hpp"

namespace lagsim {

/// Fast m(x) evaluation along a path: closed forms where they exist
/// (atoms, step-limit window), otherwise an adaptively refined
/// interpolation table certified against direct quadrature. Immutable
/// after construction and safe to share across threads.
class MeanDriftEvaluator {
 public:
  MeanDriftEvaluator(const MomentFunctionals& funcs, double x_min, double x_max,
                     double tol = 1e-6);
  double operator()(double x) const;

 private:
  const MomentFunctionals* funcs_;
  bool direct_;
  bool odd_symmetric_;
  double lo_ = 0.0, hi_ = 0.0;
  std::vector<double> xs_, ys_;

  double table_eval(double x) const;
};

/// Compensated-jump residual M_t = (sum of fixed jumps up to t) minus
/// the integral of m(X_s) ds, reported at every recorded sample time.
/// Vanishing of M_t / t is the strong-law diagnostic for the jump part.
std::vector<Sample> martingale_residual(const Trajectory& traj,
                                        const Scenario& sc);

/// Same, with a prebuilt drift evaluator (for ensembles).
std::vector<Sample> martingale_residual(const Trajectory& traj,
                                        const MeanDriftEvaluator& drift);

struct QvCheck {
  double max_residual = 0.0;  // worst |X_t^2 - X_0^2 - 2 int X dX - sum (dX)^2|
  double x2_max = 1.0;        // max of X^2 along the path, for tolerance scaling
};

/// Exact pathwise second-moment identity evaluated from the event log;
/// drift segments contribute through the chain rule, jumps through
/// 2 X_(s-) dX + (dX)^2. The residual is pure floating-point noise when
/// the trajectory bookkeeping is consistent.
QvCheck quadratic_variation_check(const Trajectory& traj);

struct PhiSpec {
  enum class Kind { log_abs, power_lyapunov } kind = Kind::log_abs;
  double p = 0.5;  // exponent of the power-Lyapunov variant

  static PhiSpec log_abs() { return {Kind::log_abs, 0.0}; }
  static PhiSpec power(double p) { return {Kind::power_lyapunov, p}; }
};

struct ItoCheck {
  double lhs = 0.0;     // Phi(X_t) - Phi(X_0) - int Phi'(X_s-) dX_s (jump part)
  double rhs = 0.0;     // half sum of Phi''(.) (dX)^2
  bool holds = false;
  std::size_t n_jumps = 0;
};

/// Pathwise convexity-direction inequality for C^2 test functions with
/// monotone second derivative and nonnegative jumps: the jump correction
/// sum is bounded by the half sum of Phi''(X_s-) (dX)^2 terms, from
/// above when Phi'' is decreasing (log|x| on the negative axis) and
/// from below when Phi'' is increasing (the power-Lyapunov family).
/// Throws WindowViolationError if the log variant sees the path touch
/// zero before t_end.
ItoCheck ito_inequality_check(const Trajectory& traj, const PhiSpec& phi,
                              double t_end);

}  // namespace lagsim

#endif  // LAGSIM_DIAGNOSTICS_HPP
