#ifndef LAGSIM_CONFIG_HPP
#define LAGSIM_CONFIG_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "lagsim/simulate.hpp"

namespace lagsim {

/// Full run description parsed from a sectioned key = value file.
/// Unknown sections or keys are hard errors; every error message names
/// the offending key.
struct RunConfig {
  // [measure]
  std::string measure_family;  // atoms | exponential | half_gaussian |
                               // power_law | small_jump_power_law
  std::vector<Atom> atoms;
  double rate_scale = 1.0;
  double mean_effect = 1.0;   // exponential
  double scale = 1.0;         // half_gaussian
  double delta = 1.0;         // power families
  double lower_cut = 1.0;     // power_law
  double tail_coef = 0.0;     // small_jump_power_law
  double tail_delta = 1.0;    // small_jump_power_law
  bool two_sided = false;

  // [truncation]
  bool epsilon_auto = true;
  double epsilon = 0.0;

  // [fixation]
  std::string fixation_kind = "kimura";  // kimura | haldane | step_limit
  double sigma = 1.0;

  // [speed]
  std::string speed_kind = "constant";  // constant | piecewise | sinusoidal
  double v = 1.0;
  double speed_mean = 1.0;
  double amplitude = 0.0;
  double period = 1.0;
  std::vector<double> rates;
  std::vector<double> durations;
  double noise_scale = 0.0;

  // [scenario]
  double x0 = 0.0;
  double horizon = 100.0;
  double output_grid_step = 1.0;
  std::uint64_t event_cap = 100000000;
  bool log_rejected = true;

  // [run]
  std::uint64_t seed_count = 1;
  std::vector<std::uint64_t> seed_list;  // used instead of count when set
  std::uint64_t master_seed = 1;
  int workers = 0;  // 0 = hardware

  // [outputs]
  std::string out_dir;
  std::vector<std::string> formats = {"csv", "jsonl", "json-report"};
  bool emit_plot_script = false;

  // [analysis]
  double boundary_tol = 1e-9;
  double return_level = 0.0;

  std::vector<std::uint64_t> seeds() const;
};

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// Canonical text form; parse(serialize(c)) reproduces c exactly, and
/// serialization is idempotent across the round trip.
std::string serialize_config(const RunConfig& c);

/// Override one key ("section.key") with a raw value string; used by
/// sweeps and command-line overrides.
void set_config_key(RunConfig& c, const std::string& dotted_key,
                    const std::string& value);

/// Materialises the dynamical part (resolving an automatic cutoff).
Scenario build_scenario(const RunConfig& c);

MutationMeasure build_measure(const RunConfig& c);
FixationModel build_fixation(const RunConfig& c);
SpeedModel build_speed(const RunConfig& c);

}  // namespace lagsim

#endif  // LAGSIM_CONFIG_HPP
