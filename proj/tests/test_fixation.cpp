#include <doctest.h>

#include <cmath>
#include <vector>

#include "lagsim/fixation.hpp"
#include "lagsim/measure.hpp"
#include "lagsim/rng.hpp"

using namespace lagsim;

namespace {
const double kInf = std::numeric_limits<double>::infinity();

bool envelope(double x, double alpha) {
  return x * alpha < 0.0 && std::abs(alpha) <= 2.0 * std::abs(x);
}
}  // namespace

TEST_CASE("selection coefficient: sign convention and boundary") {
  CHECK(selection_coefficient(2.0, 1.0, 1.0) == 0.0);    // same direction
  CHECK(selection_coefficient(-1.0, 2.0, 1.0) == 0.0);   // window boundary
  CHECK(selection_coefficient(-1.0, 1.0, 0.5) ==
        doctest::Approx(0.5));                            // 0.5 * 1 * (2 - 1)
  CHECK(selection_coefficient(1.0, -1.0, 0.5) ==
        doctest::Approx(0.5));                            // mirrored lag
  CHECK(selection_coefficient(-1.0, 1.0, 2.0) >= 0.0);
}

TEST_CASE("fixation probabilities per model") {
  const auto kim = FixationModel::kimura(0.5);
  CHECK(fixation_prob(kim, -1.0, 1.0) ==
        doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-12));
  CHECK(fixation_prob(kim, -1.0, 3.0) == 0.0);  // beyond the window
  CHECK(fixation_prob(FixationModel::haldane(1.0), -1.0, 3.0) == 0.0);
  CHECK(fixation_prob(FixationModel::step_limit(), -1.0, 3.0) == 0.0);
  CHECK(fixation_prob(FixationModel::step_limit(), -5.0, 1.0) == 1.0);
}

TEST_CASE("envelope holds for a million random inputs") {
  RandomStream rng(2024);
  const std::vector<FixationModel> models = {
      FixationModel::kimura(0.7), FixationModel::haldane(2.0),
      FixationModel::step_limit()};
  for (int i = 0; i < 1000000; ++i) {
    const double x = (rng.uniform01() - 0.5) * 40.0;
    const double a = (rng.uniform01() - 0.5) * 40.0;
    const auto& model = models[i % models.size()];
    const double g = fixation_prob(model, x, a);
    CHECK(g >= 0.0);
    CHECK(g <= 1.0);
    if (!envelope(x, a)) CHECK(g == 0.0);
  }
}

TEST_CASE("model ordering: step dominates kimura; 1-e^-2s <= min(2s,1)") {
  RandomStream rng(11);
  for (int i = 0; i < 100000; ++i) {
    const double x = -20.0 * rng.uniform01();
    const double a = 40.0 * (rng.uniform01() - 0.25);
    const double sigma = 0.1 + 3.0 * rng.uniform01();
    const double gk = fixation_prob(FixationModel::kimura(sigma), x, a);
    const double gh = fixation_prob(FixationModel::haldane(sigma), x, a);
    const double gs = fixation_prob(FixationModel::step_limit(), x, a);
    CHECK(gk <= gs + 1e-15);
    CHECK(gk <= gh + 1e-15);  // 1 - e^-2s <= min(2s, 1) for s >= 0
  }
}

TEST_CASE("m and V at a lag: atoms, zero lag, windowed power law") {
  MomentFunctionals step_atoms(MutationMeasure::discrete_atoms({{1.0, 0.7}}),
                               FixationModel::step_limit());
  CHECK(step_atoms.m_of_x(-1.0) == doctest::Approx(0.7));
  CHECK(step_atoms.v_of_x(-1.0) == doctest::Approx(0.7));
  CHECK(step_atoms.m_of_x(0.0) == 0.0);
  CHECK(step_atoms.v_of_x(0.0) == 0.0);

  // int_1^20 a^2 a^-2.75 da = 4 (20^0.25 - 1)
  MomentFunctionals step_pl(MutationMeasure::power_law_tail(1.0, 0.75, 1.0),
                            FixationModel::step_limit());
  CHECK(step_pl.v_of_x(-10.0) ==
        doctest::Approx(4.0 * (std::pow(20.0, 0.25) - 1.0)).epsilon(1e-10));
}

TEST_CASE("m(x) approaches its limit deep in the tail") {
  MomentFunctionals kim(MutationMeasure::exponential(1.0, 1.0),
                        FixationModel::kimura(1.0));
  const auto [m, V] = kim.limits();
  CHECK(m == doctest::Approx(1.0));
  CHECK(V == doctest::Approx(2.0));
  CHECK(std::abs(kim.m_of_x(-50.0) - m) < 0.01 * m);
}

TEST_CASE("psi is m(x) minus the rate") {
  MomentFunctionals step_atoms(MutationMeasure::discrete_atoms({{1.0, 0.7}}),
                               FixationModel::step_limit());
  CHECK(step_atoms.psi(1.0, 0.0) == doctest::Approx(-1.0));
  CHECK(step_atoms.psi(0.7, -1.0) == doctest::Approx(0.0));

  MomentFunctionals kim(MutationMeasure::exponential(1.0, 1.0),
                        FixationModel::kimura(1.0));
  CHECK(kim.psi(2.0, -1e4) == doctest::Approx(-1.0).epsilon(1e-6));
}

TEST_CASE("limits flag heavy tails as infinite") {
  MomentFunctionals pl(MutationMeasure::power_law_tail(1.0, 1.0, 1.0),
                       FixationModel::kimura(1.0));
  const auto [m, V] = pl.limits();
  CHECK(m == doctest::Approx(1.0));
  CHECK(std::isinf(V));

  MomentFunctionals atoms(MutationMeasure::discrete_atoms({{1.0, 0.7}}),
                          FixationModel::kimura(1.0));
  CHECK(atoms.limits().first == doctest::Approx(0.7));
  CHECK(atoms.limits().second == doctest::Approx(0.7));
}

TEST_CASE("m(x), V(x) increase monotonically toward their limits") {
  const std::vector<MutationMeasure> measures = {
      MutationMeasure::exponential(1.0, 1.0),
      MutationMeasure::power_law_tail(1.0, 1.0, 1.0)};
  for (const auto& measure : measures) {
    MomentFunctionals f(measure, FixationModel::kimura(1.0));
    double pm = 0.0, pv = 0.0;
    for (int k = 0; k <= 14; ++k) {
      const double x = -std::ldexp(1.0, k);
      const double mk = f.m_of_x(x);
      const double vk = f.v_of_x(x);
      CHECK(mk >= pm - 1e-12);
      CHECK(vk >= pv - 1e-12);
      pm = mk;
      pv = vk;
    }
    const double m = f.limits().first;
    if (std::isfinite(m)) CHECK(pm <= m * (1.0 + 1e-9));
  }
}

TEST_CASE("m deficit equals limit minus m(x) where both are computable") {
  MomentFunctionals kim(MutationMeasure::exponential(1.0, 1.0),
                        FixationModel::kimura(1.0));
  for (double x : {-0.5, -2.0, -8.0}) {
    CHECK(kim.m_deficit(x) ==
          doctest::Approx(kim.limits().first - kim.m_of_x(x)).epsilon(1e-7));
  }
  MomentFunctionals hal(MutationMeasure::exponential(1.0, 1.0),
                        FixationModel::haldane(1.0));
  for (double x : {-0.5, -2.0, -8.0}) {
    CHECK(hal.m_deficit(x) ==
          doctest::Approx(hal.limits().first - hal.m_of_x(x)).epsilon(1e-7));
  }
}

TEST_CASE("psi stays nonpositive at the balance rate") {
  MomentFunctionals kim(MutationMeasure::exponential(1.0, 1.0),
                        FixationModel::kimura(1.0));
  const double m = kim.limits().first;
  for (int k = 0; k <= 20; ++k) {
    CHECK(kim.psi(m, -std::ldexp(1.0, k)) <= 1e-12);
  }
}

TEST_CASE("lipschitz ratio bounded by 4 sigma int alpha^2") {
  RandomStream rng(5);

  SUBCASE("saturated lags give vanishing ratios") {
    MomentFunctionals f(MutationMeasure::discrete_atoms({{1.0, 1.0}}),
                        FixationModel::kimura(1.0));
    // direct probe far in the tail, where g is flat at 1
    const double g1 = fixation_prob(f.model(), -10.0, 1.0);
    const double g2 = fixation_prob(f.model(), -12.0, 1.0);
    CHECK(std::abs(g1 - g2) / 2.0 < 1e-14);
  }

  SUBCASE("exponential measure on K=[0,4]") {
    MomentFunctionals f(MutationMeasure::exponential(1.0, 1.0),
                        FixationModel::kimura(1.0));
    const auto rep = f.lipschitz_check(0.0, 4.0, 10000, rng);
    // c_K = 4 * int_0^4 a^2 e^-a da = 4 (2 - 26 e^-4), about 6.095
    const double ck = 4.0 * (2.0 - 26.0 * std::exp(-4.0));
    CHECK(rep.c_k == doctest::Approx(ck).epsilon(1e-10));
    CHECK(rep.pass);
    CHECK(rep.max_ratio <= rep.c_k * (1.0 + 1e-6));
    CHECK(rep.max_ratio > 0.0);
  }

  SUBCASE("rejects non-kimura models") {
    MomentFunctionals f(MutationMeasure::exponential(1.0, 1.0),
                        FixationModel::step_limit());
    CHECK_THROWS(f.lipschitz_check(0.0, 4.0, 10, rng));
  }
}

TEST_CASE("doubling-grid convergence detection") {
  MomentFunctionals kim(MutationMeasure::exponential(1.0, 1.0),
                        FixationModel::kimura(1.0));
  const double at = kim.m_converged_at(1e-6);
  CHECK(std::isfinite(at));
  CHECK(at >= 1.0);
  CHECK(std::abs(kim.m_of_x(-at) - kim.limits().first) < 1e-3);
}
