#ifndef LAGSIM_QUADRATURE_HPP
#define LAGSIM_QUADRATURE_HPP

#include <functional>
#include <limits>

namespace lagsim {

struct QuadratureOptions {
  double abs_tol = 1e-9;
  double rel_tol = 1e-8;
  int max_depth = 40;     // bisection depth inside one panel
  int max_shells = 168;   // dyadic panels toward a singular endpoint
  /// Smallest feature width the integrand may contain. Shell refinement
  /// toward an endpoint does not stop early until panels are narrower
  /// than this, so boundary layers well inside the range are not missed.
  double min_feature_scale = 0.0;
};

using Integrand = std::function<double(double)>;

/// Adaptive Gauss-Kronrod (G7,K15) on a finite interval. Endpoints are
/// never evaluated. Throws NonConvergentError when the refinement budget
/// is exhausted, DivergentError on non-integrable behaviour.
double integrate_adaptive(const Integrand& f, double a, double b,
                          const QuadratureOptions& opts = {});

/// Integral over [a, b] with 0 <= a < b <= infinity where the integrand
/// may be singular (but integrable) at either endpoint and must decay
/// toward an infinite b. Uses dyadic panels toward both endpoints with
/// the adaptive rule inside each panel, plus geometric tail
/// extrapolation. Divergence is reported as DivergentError.
double integrate_semi(const Integrand& f, double a, double b,
                      const QuadratureOptions& opts = {});

inline double infinity() { return std::numeric_limits<double>::infinity(); }

}  // namespace lagsim

#endif  // LAGSIM_QUADRATURE_HPP
