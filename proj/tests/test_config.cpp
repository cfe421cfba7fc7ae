#include <doctest.h>

#include <string>
#include <vector>

#include "lagsim/config.hpp"
#include "lagsim/errors.hpp"

using namespace lagsim;

namespace {

const char* kSample = R"(
# transient exponential scenario
[measure]
family = exponential
rate_scale = 1.0
mean_effect = 1.0

[fixation]
kind = kimura
sigma = 1.0

[speed]
kind = constant
v = 2.0

[scenario]
x0 = 0.0
horizon = 2000
output_grid_step = 1.0

[run]
seeds = 50
master_seed = 12345
)";

}  // namespace

TEST_CASE("parse then serialize round-trips to a fixed point") {
  const RunConfig c1 = parse_config(kSample);
  const std::string s1 = serialize_config(c1);
  const RunConfig c2 = parse_config(s1);
  const std::string s2 = serialize_config(c2);
  CHECK(s1 == s2);
  CHECK(c2.seed_count == 50);
  CHECK(c2.master_seed == 12345);
  CHECK(c2.v == 2.0);
}

TEST_CASE("unknown sections and keys are named in the error") {
  CHECK_THROWS_WITH_AS(parse_config("[nope]\nx = 1\n"),
                       doctest::Contains("nope"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config("[measure]\nfamly = exponential\n"),
                       doctest::Contains("measure.famly"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config("[speed]\nv = fast\n"),
                       doctest::Contains("speed.v"), ConfigError);
  CHECK_THROWS_AS(parse_config("x = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[measure\n"), ConfigError);
}

TEST_CASE("atoms and seed lists parse element-wise") {
  const RunConfig c = parse_config(
      "[measure]\nfamily = atoms\natoms = 1.0:2.0, -0.5:0.25\n"
      "[run]\nseed_list = 7, 9, 11\n");
  REQUIRE(c.atoms.size() == 2);
  CHECK(c.atoms[0].location == 1.0);
  CHECK(c.atoms[0].weight == 2.0);
  CHECK(c.atoms[1].location == -0.5);
  CHECK(c.seeds() == std::vector<std::uint64_t>{7, 9, 11});
}

TEST_CASE("build_scenario resolves the automatic cutoff") {
  RunConfig c = parse_config(kSample);
  c.measure_family = "small_jump_power_law";
  c.rate_scale = 1.0;
  c.delta = 0.5;
  c.tail_coef = 0.0;
  c.tail_delta = 1.0;
  c.v = 3.0;
  const Scenario sc = build_scenario(c);
  CHECK(sc.trunc.epsilon > 0.0);
  const double m1 = sc.measure.positive_moment(1);
  CHECK(sc.trunc.bias_bound <= 1e-3 * std::abs(m1 - 3.0));

  // explicit cutoff is honored as-is
  c.epsilon_auto = false;
  c.epsilon = 0.125;
  CHECK(build_scenario(c).trunc.epsilon == 0.125);
}

TEST_CASE("dotted-key override drives sweeps") {
  RunConfig c = parse_config(kSample);
  set_config_key(c, "speed.v", "0.5");
  CHECK(c.v == 0.5);
  set_config_key(c, "fixation.kind", "step_limit");
  CHECK(c.fixation_kind == "step_limit");
  CHECK_THROWS_AS(set_config_key(c, "speed.warp", "9"), ConfigError);
  CHECK_THROWS_AS(set_config_key(c, "novalue", "9"), ConfigError);
}

TEST_CASE("builders reject unknown names") {
  RunConfig c = parse_config(kSample);
  c.measure_family = "zipf";
  CHECK_THROWS_AS(build_measure(c), ConfigError);
  c = parse_config(kSample);
  c.fixation_kind = "wright";
  CHECK_THROWS_AS(build_fixation(c), ConfigError);
  c = parse_config(kSample);
  c.speed_kind = "warp";
  CHECK_THROWS_AS(build_speed(c), ConfigError);
}

TEST_CASE("serialization round-trips every family and speed kind") {
  const std::vector<std::string> blocks = {
      "[measure]\nfamily = atoms\natoms = 1.0:0.7, -0.25:0.125\n",
      "[measure]\nfamily = exponential\nrate_scale = 2.5\nmean_effect = 0.75\n"
      "support = two_sided\n",
      "[measure]\nfamily = half_gaussian\nrate_scale = 1.25\nscale = 2.0\n",
      "[measure]\nfamily = power_law\nrate_scale = 1.5\ndelta = 0.75\n"
      "lower_cut = 0.5\n",
      "[measure]\nfamily = small_jump_power_law\nrate_scale = 1.0\n"
      "delta = 0.5\ntail_coef = 1.0\ntail_delta = 0.5\n"
      "[truncation]\nepsilon = 0.01\n",
  };
  const std::vector<std::string> speeds = {
      "[speed]\nkind = constant\nv = 1.5\n",
      "[speed]\nkind = sinusoidal\nmean = 1.0\namplitude = 0.25\nperiod = 8\n"
      "noise_scale = 0.5\n",
      "[speed]\nkind = piecewise\nrates = 1.0, 2.0\ndurations = 3.0, 1.0\n",
  };
  for (const auto& mb : blocks) {
    for (const auto& sb : speeds) {
      const std::string text = mb + sb + "[run]\nseeds = 2\n";
      const RunConfig c = parse_config(text);
      const std::string s1 = serialize_config(c);
      CHECK(s1 == serialize_config(parse_config(s1)));
      CHECK_NOTHROW(build_measure(c));
      CHECK_NOTHROW(build_speed(c));
    }
  }
}

TEST_CASE("malformed input raises config errors rather than crashing") {
  const std::vector<std::string> junk = {
      "[measure]\nfamily\n",
      "[measure]\natoms = 1.0\n",
      "[measure]\natoms = a:b\n",
      "[speed]\nrates = 1, x\n",
      "[run]\nseeds = -3\n",
      "[run]\nseeds = 1e5\n",
      "===\n",
      "[outputs]\nformats = csv, pdf\n",
      "[scenario]\nlog_rejected = maybe\n",
      std::string(1 << 12, '['),
  };
  for (const auto& text : junk) {
    CHECK_THROWS_AS(parse_config(text), ConfigError);
  }
}

TEST_CASE("scenario fingerprint tracks dynamical fields only") {
  const RunConfig c = parse_config(kSample);
  const Scenario a = build_scenario(c);
  RunConfig c2 = c;
  c2.seed_count = 7;
  c2.master_seed = 1;
  const Scenario b = build_scenario(c2);
  CHECK(a.fingerprint() == b.fingerprint());

  RunConfig c3 = c;
  c3.v = 2.5;
  CHECK(build_scenario(c3).fingerprint() != a.fingerprint());
}
