#ifndef LAGSIM_ENSEMBLE_HPP
#define LAGSIM_ENSEMBLE_HPP

#include <cstdint>
#include <vector>

#include "lagsim/analysis.hpp"
#include "lagsim/diagnostics.hpp"
#include "lagsim/simulate.hpp"

namespace lagsim {

/// Simulates one trajectory per seed on a bounded worker pool. Results
/// are indexed by seed order, so the output is identical whatever the
/// thread count.
std::vector<Trajectory> run_ensemble(const Scenario& sc,
                                     const std::vector<std::uint64_t>& seeds,
                                     std::uint64_t master_seed, int workers);

struct PerSeedRow {
  std::uint64_t seed = 0;
  double slope = 0.0;          // (X_T - X_0) / T
  double mart_ratio = 0.0;     // M_T / T
  double qv_residual = 0.0;
  std::size_t returns_completed = 0;
  bool budget_exceeded = false;
};

struct EnsembleSummary {
  std::uint64_t scenario_hash = 0;
  std::size_t n_paths = 0;
  SpeedEstimate slope;
  double mean_abs_mart_ratio = 0.0;
  double qv_max_residual = 0.0;
  double qv_tolerance = 0.0;
  ReturnTimeStats returns;
  double return_level = 0.0;
  std::size_t budget_exceeded_count = 0;
  std::vector<PerSeedRow> rows;
};

/// Aggregates slope, martingale-ratio, quadratic-variation and excursion
/// statistics over an ensemble. Rejects trajectories whose scenario
/// hashes disagree (mixing outputs of different scenarios corrupts the
/// summary). Order-independent: rows are sorted by seed.
EnsembleSummary summarize_ensemble(const Scenario& sc,
                                   const std::vector<Trajectory>& ensemble,
                                   double return_level);

}  // namespace lagsim

#endif  // LAGSIM_ENSEMBLE_HPP
