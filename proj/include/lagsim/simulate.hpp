#ifndef LAGSIM_SIMULATE_HPP
#define LAGSIM_SIMULATE_HPP

#include <cstdint>

#include "lagsim/fixation.hpp"
#include "lagsim/measure.hpp"
#include "lagsim/speed.hpp"
#include "lagsim/trajectory.hpp"

namespace lagsim {

/// Everything one path needs: measure, cutoff, fixation model, speed,
/// initial lag and output layout.
struct Scenario {
  MutationMeasure measure = MutationMeasure::discrete_atoms({});
  TruncationPolicy trunc;
  FixationModel model;
  SpeedModel speed;
  double x0 = 0.0;
  double horizon = 1.0;
  double output_grid_step = 1.0;
  std::uint64_t event_cap = 100000000;
  bool log_rejected = true;

  /// Throws ConfigError when a field is unusable (non-positive horizon
  /// or grid step, infinite truncated rate, ...).
  void validate() const;

  /// Provenance fingerprint over all dynamical fields (not seeds).
  std::uint64_t fingerprint() const;
};

/// Exact event-driven construction of the lag path: proposals arrive as
/// a Poisson stream at the truncated total rate, each is accepted when
/// an independent uniform mark falls below g(X_t-, alpha), and the
/// environmental drift is integrated in closed form between events
/// (Brownian noise, when present, advances by exact Gaussian increments
/// at every recorded time). Deterministic given the seed.
Trajectory simulate(const Scenario& sc, std::uint64_t seed,
                    std::uint64_t master_seed = 1);

}  // namespace lagsim

#endif  // LAGSIM_SIMULATE_HPP
