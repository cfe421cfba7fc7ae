#ifndef LAGSIM_MEASURE_HPP
#define LAGSIM_MEASURE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "lagsim/quadrature.hpp"
#include "lagsim/rng.hpp"

namespace lagsim {

class RandomStream;

enum class MeasureFamily {
  discrete_atoms,
  exponential,
  half_gaussian,
  power_law_tail,
  small_jump_power_law,
};

enum class SupportSign { positive_only, two_sided };

struct Atom {
  double location;  // signed effect size
  double weight;    // rate per unit time
};

/// Intensity measure of proposed mutation effects.
///
/// Density families are parameterised on the positive half-line; a
/// two-sided measure mirrors the same profile onto negative effects
/// (doubling the total rate but leaving the positive-side moments, and
/// hence the adaptation-rate limits, unchanged). Discrete atoms carry
/// signed locations directly.
///
/// Every constructor validates integrability of |alpha| ^ 1 near zero,
/// so only measures with a finite small-jump first moment can be built.
///
/// Sampling draw costs are part of the reproducibility contract:
/// atoms consume exactly one uniform per draw; exponential one;
/// power-law families one; half-Gaussian two uniforms per rejection
/// round; a two-sided measure consumes one extra uniform (the sign)
/// before the magnitude.
class MutationMeasure {
 public:
  static MutationMeasure discrete_atoms(std::vector<Atom> atoms);
  static MutationMeasure exponential(double rate_scale, double mean_effect,
                                     SupportSign sign = SupportSign::positive_only);
  static MutationMeasure half_gaussian(double rate_scale, double scale,
                                       SupportSign sign = SupportSign::positive_only);
  /// Density rate_scale * alpha^-(2+delta) on [lower_cut, inf); delta > -1.
  static MutationMeasure power_law_tail(double rate_scale, double delta,
                                        double lower_cut,
                                        SupportSign sign = SupportSign::positive_only);
  /// Density rate_scale * alpha^-(1+delta) on (0,1) plus
  /// tail_coef * alpha^-(5+tail_delta) on (1, inf); delta < 1.
  static MutationMeasure small_jump_power_law(double rate_scale, double delta,
                                              double tail_coef, double tail_delta,
                                              SupportSign sign = SupportSign::positive_only);

  MeasureFamily family() const { return family_; }
  SupportSign support_sign() const { return sign_; }
  bool is_atomic() const { return family_ == MeasureFamily::discrete_atoms; }
  const std::vector<Atom>& atoms() const { return atoms_; }
  std::string describe() const;

  /// Raw family parameters in constructor order (empty for atoms).
  std::vector<double> params() const;

  /// True when the measure has finite total mass (so epsilon = 0 is a
  /// valid truncation).
  bool finite_total_mass() const;

  /// nu({alpha : |alpha| >= eps}); +infinity when eps = 0 and the
  /// measure is not finite.
  double mass_above(double eps) const;

  /// Integral of |alpha| over {0 < |alpha| < eps}: the drift dropped by
  /// truncating at eps. Finite for every valid measure.
  double abs_moment_below(double eps) const;

  /// Positive-side moment: integral of alpha^k over (0, inf), k = 1 or 2.
  /// May be +infinity (detected analytically, never by quadrature).
  double positive_moment(int k) const;

  /// Closed-form integral of alpha^k against nu over [lo, hi] on the
  /// positive side, k = 0, 1, 2. Requires 0 <= lo <= hi.
  double positive_moment_between(int k, double lo, double hi) const;

  /// Density value at a signed effect; zero outside the support.
  /// Only meaningful for density families.
  double density(double alpha) const;

  /// Interior points where the density is non-smooth (family seams and
  /// cut points), used to split quadrature panels.
  std::vector<double> breakpoints() const;

  /// Draw a signed effect from nu restricted to {|alpha| >= eps},
  /// normalised. Requires mass_above(eps) finite and positive.
  double sample(double eps, RandomStream& rng) const;

  /// Integral of f against nu over the signed interval [lo, hi]
  /// (exact weighted sum for atoms, adaptive quadrature for densities).
  double integrate(const Integrand& f, double lo, double hi,
                   const QuadratureOptions& opts = {}) const;

 private:
  MutationMeasure() = default;

  double sample_magnitude(double eps, RandomStream& rng) const;
  double one_sided_mass_above(double eps) const;

  MeasureFamily family_ = MeasureFamily::discrete_atoms;
  SupportSign sign_ = SupportSign::positive_only;
  std::vector<Atom> atoms_;

  // Density parameters (interpretation depends on family).
  double rate_scale_ = 0.0;
  double p1_ = 0.0;  // mean_effect | scale | delta | delta
  double p2_ = 0.0;  // lower_cut | tail_coef
  double p3_ = 0.0;  // tail_delta
};

/// Cutoff policy for sigma-finite measures: jumps with |alpha| < epsilon
/// are dropped from simulation and the forgone drift is reported.
struct TruncationPolicy {
  double epsilon = 0.0;
  double bias_bound = 0.0;  // abs_moment_below(epsilon)

  /// Validates epsilon against the measure and computes the bias.
  static TruncationPolicy resolve(const MutationMeasure& m, double epsilon);

  /// Largest power-of-two epsilon whose bias is at most
  /// 1e-3 * |m - vbar| (or 1e-4 absolute when the drift gap vanishes);
  /// zero for finite measures.
  static TruncationPolicy automatic(const MutationMeasure& m, double vbar);
};

/// Base proposal rate nu({|alpha| >= eps}) used by the thinning loop.
/// Throws InfiniteRateError when eps = 0 on an infinite measure.
double total_rate(const MutationMeasure& m, const TruncationPolicy& trunc);

/// Proposal effect draw; see MutationMeasure::sample.
double sample_effect(const MutationMeasure& m, const TruncationPolicy& trunc,
                     RandomStream& rng);

/// Integral of f against nu over [lo, hi]; see MutationMeasure::integrate.
double integrate_against(const MutationMeasure& m, const Integrand& f,
                         double lo, double hi,
                         const QuadratureOptions& opts = {});

/// Drift bound forgone below the cutoff; see abs_moment_below.
double truncation_bias(const MutationMeasure& m, double eps);

}  // namespace lagsim

#endif  // LAGSIM_MEASURE_HPP
