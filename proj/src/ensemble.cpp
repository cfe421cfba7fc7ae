#include "lagsim/ensemble.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <thread>

#include "lagsim/errors.hpp"

namespace lagsim {

std::vector<Trajectory> run_ensemble(const Scenario& sc,
                                     const std::vector<std::uint64_t>& seeds,
                                     std::uint64_t master_seed, int workers) {
  sc.validate();
  if (seeds.empty()) throw ConfigError("run needs at least one seed");
  if (workers <= 0) {
    workers = static_cast<int>(std::thread::hardware_concurrency());
    if (workers <= 0) workers = 1;
  }
  workers = std::min<int>(workers, static_cast<int>(seeds.size()));

  std::vector<Trajectory> out(seeds.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure = nullptr;
  std::mutex failure_mu;

  auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= seeds.size()) return;
      try {
        out[i] = simulate(sc, seeds[i], master_seed);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mu);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };

  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (std::thread& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

EnsembleSummary summarize_ensemble(const Scenario& sc,
                                   const std::vector<Trajectory>& ensemble,
                                   double return_level) {
  if (ensemble.empty()) throw Error("cannot summarize an empty ensemble");
  EnsembleSummary s;
  s.scenario_hash = ensemble.front().scenario_hash;
  for (const Trajectory& t : ensemble) {
    if (t.scenario_hash != s.scenario_hash) {
      throw Error("ensemble mixes outputs from different scenario hashes");
    }
  }
  s.n_paths = ensemble.size();
  s.return_level = return_level;
  s.slope = estimate_speed(ensemble);
  s.returns = return_time_stats(ensemble, return_level);

  // One drift evaluator across the whole ensemble (the expensive part
  // of the martingale residual).
  double x_min = 0.0;
  for (const Trajectory& t : ensemble) {
    for (const Sample& p : t.samples) x_min = std::min(x_min, p.x);
  }
  MomentFunctionals funcs(sc.measure, sc.model);
  MeanDriftEvaluator drift(funcs, x_min, 0.0);

  double sum_abs = 0.0;
  for (std::size_t i = 0; i < ensemble.size(); ++i) {
    const Trajectory& t = ensemble[i];
    PerSeedRow row;
    row.seed = t.seed;
    row.slope = s.slope.per_path[i];
    const std::vector<Sample> mart = martingale_residual(t, drift);
    row.mart_ratio = mart.empty() ? 0.0 : mart.back().x / t.t_final;
    const QvCheck qv = quadratic_variation_check(t);
    row.qv_residual = qv.max_residual;
    s.qv_max_residual = std::max(s.qv_max_residual, qv.max_residual);
    s.qv_tolerance =
        std::max(s.qv_tolerance, 1e-9 * std::max(1.0, qv.x2_max));
    row.returns_completed = return_time_stats(t, return_level).completed;
    row.budget_exceeded = t.budget_exceeded;
    if (t.budget_exceeded) ++s.budget_exceeded_count;
    sum_abs += std::abs(row.mart_ratio);
    s.rows.push_back(row);
  }
  s.mean_abs_mart_ratio = sum_abs / static_cast<double>(s.n_paths);
  std::sort(s.rows.begin(), s.rows.end(),
            [](const PerSeedRow& a, const PerSeedRow& b) { return a.seed < b.seed; });
  return s;
}

}  // namespace lagsim
