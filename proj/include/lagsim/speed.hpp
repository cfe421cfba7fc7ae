#ifndef LAGSIM_SPEED_HPP
#define LAGSIM_SPEED_HPP

#include <string>
#include <vector>

namespace lagsim {

enum class SpeedKind { constant, piecewise, sinusoidal };

/// Environmental displacement model v(t) = integral of v1 plus an
/// optional Brownian perturbation simulated by the event loop.
///
/// The deterministic rate v1 is either constant, a cyclic
/// piecewise-constant schedule, or mean + amplitude * sin(2 pi t / period).
/// Its Cesaro mean vbar exists in closed form for each shipped form.
struct SpeedModel {
  SpeedKind kind = SpeedKind::constant;
  double v = 0.0;                  // constant rate
  std::vector<double> rates;       // piecewise: level per leg
  std::vector<double> durations;   // piecewise: leg lengths, repeated cyclically
  double mean = 0.0;               // sinusoidal
  double amplitude = 0.0;
  double period = 1.0;
  double noise_scale = 0.0;        // Brownian diffusion coefficient, 0 = none

  static SpeedModel constant(double v);
  static SpeedModel piecewise(std::vector<double> rates, std::vector<double> durations);
  static SpeedModel sinusoid(double mean, double amplitude, double period);
  SpeedModel with_noise(double noise_scale) const;

  bool has_noise() const { return noise_scale > 0.0; }
  bool is_constant_rate() const;

  /// Long-run mean rate vbar.
  double vbar() const;
  double v_sup() const;
  double v_inf() const;

  /// Deterministic displacement integral of v1 over [0, t].
  double cumulative(double t) const;

  /// Displacement over [t0, t1]; for the constant model this is exactly
  /// v * (t1 - t0).
  double displacement(double t0, double t1) const;

  /// Times in (t0, t1) where v1 is non-smooth (piecewise leg changes);
  /// the simulator records path samples there so that segments stay
  /// exactly linear between recorded points.
  std::vector<double> breakpoints_between(double t0, double t1) const;

  std::string describe() const;
};

}  // namespace lagsim

#endif  // LAGSIM_SPEED_HPP
