#include "lagsim/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "lagsim/errors.hpp"
#include "lagsim/rng.hpp"

namespace lagsim {
namespace {

struct Fnv1a {
  std::uint64_t h = 1469598103934665603ull;
  void bytes(const void* p, std::size_t n) {
    const unsigned char* b = static_cast<const unsigned char*>(p);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= b[i];
      h *= 1099511628211ull;
    }
  }
  void f64(double x) {
    if (x == 0.0) x = 0.0;  // collapse -0
    std::uint64_t bits;
    std::memcpy(&bits, &x, sizeof bits);
    bytes(&bits, sizeof bits);
  }
  void u64(std::uint64_t x) { bytes(&x, sizeof x); }
};

bool inside_envelope(double x, double alpha) {
  return x * alpha < 0.0 && std::abs(alpha) <= 2.0 * std::abs(x);
}

}  // namespace

void Scenario::validate() const {
  if (!(horizon > 0.0)) throw ConfigError("scenario horizon must be > 0");
  if (!(output_grid_step > 0.0)) throw ConfigError("scenario output_grid_step must be > 0");
  if (event_cap == 0) throw ConfigError("scenario event_cap must be >= 1");
  if (!std::isfinite(x0)) throw ConfigError("scenario x0 must be finite");
  total_rate(measure, trunc);  // throws InfiniteRateError when unusable
}

std::uint64_t Scenario::fingerprint() const {
  Fnv1a h;
  h.u64(static_cast<std::uint64_t>(measure.family()));
  h.u64(static_cast<std::uint64_t>(measure.support_sign()));
  for (const Atom& a : measure.atoms()) {
    h.f64(a.location);
    h.f64(a.weight);
  }
  for (double p : measure.params()) h.f64(p);
  h.f64(trunc.epsilon);
  h.u64(static_cast<std::uint64_t>(model.kind));
  h.f64(model.sigma);
  h.u64(static_cast<std::uint64_t>(speed.kind));
  h.f64(speed.v);
  h.f64(speed.mean);
  h.f64(speed.amplitude);
  h.f64(speed.period);
  h.f64(speed.noise_scale);
  for (double r : speed.rates) h.f64(r);
  for (double d : speed.durations) h.f64(d);
  h.f64(x0);
  h.f64(horizon);
  h.f64(output_grid_step);
  return h.h;
}

Trajectory simulate(const Scenario& sc, std::uint64_t seed, std::uint64_t master_seed) {
  sc.validate();
  RandomStream rng = RandomStream::derive(master_seed, seed);
  const double lambda = total_rate(sc.measure, sc.trunc);

  Trajectory traj;
  traj.x0 = sc.x0;
  traj.horizon = sc.horizon;
  traj.scenario_hash = sc.fingerprint();
  traj.seed = seed;
  traj.rejected_logged = sc.log_rejected;

  // Recorded times: the uniform output grid, plus speed breakpoints so
  // segments between recorded points stay exactly linear for
  // piecewise-constant rates, plus the horizon itself.
  std::vector<double> record_times;
  for (std::uint64_t i = 1; i * sc.output_grid_step < sc.horizon; ++i) {
    record_times.push_back(i * sc.output_grid_step);
  }
  for (double b : sc.speed.breakpoints_between(0.0, sc.horizon)) {
    record_times.push_back(b);
  }
  record_times.push_back(sc.horizon);
  std::sort(record_times.begin(), record_times.end());
  record_times.erase(std::unique(record_times.begin(), record_times.end()),
                     record_times.end());

  traj.samples.reserve(record_times.size() + 1);
  traj.samples.push_back({0.0, sc.x0});

  // Path state: anchored at the last proposal event so that positions
  // are computed by one displacement from the anchor, not by a long
  // incremental accumulation.
  double t_anchor = 0.0;
  double x_anchor = sc.x0;
  double r_cur = 0.0;     // Brownian perturbation R_t
  double r_anchor = 0.0;
  double t_r = 0.0;       // time R was last advanced to
  const bool noisy = sc.speed.has_noise();

  auto advance_r = [&](double t) {
    if (!noisy || t <= t_r) return;
    r_cur += sc.speed.noise_scale * std::sqrt(t - t_r) * rng.normal();
    t_r = t;
  };
  auto x_at = [&](double t) {
    advance_r(t);
    return x_anchor - sc.speed.displacement(t_anchor, t) - (r_cur - r_anchor);
  };

  std::size_t next_record = 0;
  auto emit_records_until = [&](double t) {
    while (next_record < record_times.size() && record_times[next_record] <= t) {
      const double rt = record_times[next_record];
      traj.samples.push_back({rt, x_at(rt)});
      ++next_record;
    }
  };

  double t_prop = lambda > 0.0 ? rng.exponential(lambda)
                               : std::numeric_limits<double>::infinity();
  while (t_prop < sc.horizon) {
    emit_records_until(t_prop);
    const double x_before = x_at(t_prop);
    const double alpha = sample_effect(sc.measure, sc.trunc, rng);
    const double mark = rng.uniform01();
    const double g = fixation_prob(sc.model, x_before, alpha);
    if (sc.model.kind != FixationKind::constant_test && g > 0.0 &&
        !inside_envelope(x_before, alpha)) {
      throw Error("fixation probability escaped its envelope");
    }
    ++traj.proposal_count;
    const bool fix = mark <= g;
    if (fix) {
      traj.events.push_back(
          {t_prop, EventKind::fixed, alpha, x_before, x_before + alpha});
      ++traj.fixed_count;
      x_anchor = x_before + alpha;
    } else {
      if (sc.log_rejected) {
        traj.events.push_back(
            {t_prop, EventKind::proposed_rejected, alpha, x_before, x_before});
      }
      x_anchor = x_before;
    }
    t_anchor = t_prop;
    r_anchor = r_cur;

    if (traj.proposal_count >= sc.event_cap) {
      traj.budget_exceeded = true;
      traj.t_final = t_prop;
      traj.x_final = x_anchor;
      return traj;
    }
    t_prop += rng.exponential(lambda);
  }

  emit_records_until(sc.horizon);
  traj.t_final = sc.horizon;
  traj.x_final = traj.samples.back().x;
  return traj;
}

}  // namespace lagsim
