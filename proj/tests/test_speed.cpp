#include <doctest.h>

#include <cmath>

#include "lagsim/rng.hpp"
#include "lagsim/speed.hpp"

using namespace lagsim;

TEST_CASE("constant displacement is exact") {
  const auto s = SpeedModel::constant(1.5);
  CHECK(s.cumulative(4.0) == 6.0);
  CHECK(s.displacement(2.0, 6.0) == 1.5 * 4.0);
  CHECK(s.vbar() == 1.5);
  CHECK(s.v_sup() == 1.5);
  CHECK(s.v_inf() == 1.5);
}

TEST_CASE("sinusoid: closed-form integral and Cesaro mean") {
  const auto s = SpeedModel::sinusoid(2.0, 0.5, 10.0);
  CHECK(s.vbar() == 2.0);
  CHECK(s.v_sup() == 2.5);
  CHECK(s.v_inf() == 1.5);
  // one full period integrates to mean * period
  CHECK(s.cumulative(10.0) == doctest::Approx(20.0).epsilon(1e-12));
  // numerically cross-check the closed form on a partial period
  double riemann = 0.0;
  const int n = 200000;
  const double t = 3.7;
  for (int i = 0; i < n; ++i) {
    const double u = (i + 0.5) * t / n;
    riemann += (2.0 + 0.5 * std::sin(2.0 * M_PI * u / 10.0)) * t / n;
  }
  CHECK(s.cumulative(t) == doctest::Approx(riemann).epsilon(1e-8));
  // Cesaro convergence
  CHECK(s.cumulative(1e6) / 1e6 == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("piecewise cyclic schedule") {
  const auto s = SpeedModel::piecewise({1.0, 3.0}, {2.0, 1.0});
  CHECK(s.vbar() == doctest::Approx((1.0 * 2.0 + 3.0 * 1.0) / 3.0));
  CHECK(s.v_sup() == 3.0);
  CHECK(s.v_inf() == 1.0);
  CHECK(s.cumulative(2.0) == doctest::Approx(2.0));
  CHECK(s.cumulative(3.0) == doctest::Approx(5.0));
  CHECK(s.cumulative(7.0) == doctest::Approx(10.0 + 1.0));  // 2 cycles + 1 unit of rate 1
  const auto pts = s.breakpoints_between(0.0, 7.0);
  CHECK(pts.size() == 4);  // t = 2, 3, 5, 6
  CHECK(pts[0] == doctest::Approx(2.0));
  CHECK(pts[3] == doctest::Approx(6.0));
  // long-run Cesaro mean
  CHECK(s.cumulative(3e5) / 3e5 == doctest::Approx(s.vbar()).epsilon(1e-6));
}

TEST_CASE("brownian perturbation washes out at rate 1/sqrt(t)") {
  // R_T is a sum of independent gaussian increments; |R_T| / T should be
  // within 5 standard deviations of zero for each seed.
  const double c = 0.5;
  const double T = 10000.0;
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    RandomStream rng = RandomStream::derive(17, seed);
    double r = 0.0;
    const int steps = 10000;
    const double dt = T / steps;
    for (int i = 0; i < steps; ++i) r += c * std::sqrt(dt) * rng.normal();
    CHECK(std::abs(r) / T <= 5.0 * c / std::sqrt(T));
  }
}
