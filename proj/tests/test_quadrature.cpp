#include <doctest.h>

#include <cmath>

#include "lagsim/errors.hpp"
#include "lagsim/quadrature.hpp"

using namespace lagsim;

TEST_CASE("adaptive rule reproduces elementary integrals") {
  CHECK(integrate_adaptive([](double x) { return x * x; }, 0.0, 1.0) ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(integrate_adaptive([](double x) { return std::sin(x); }, 0.0, M_PI) ==
        doctest::Approx(2.0).epsilon(1e-12));
  CHECK(integrate_adaptive([](double x) { return std::exp(-x); }, 0.0, 30.0) ==
        doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("semi-infinite integrals with decaying tails") {
  // int_0^inf e^-x = 1
  CHECK(integrate_semi([](double x) { return std::exp(-x); }, 0.0, infinity()) ==
        doctest::Approx(1.0).epsilon(1e-10));
  // int_1^inf x^-3 = 1/2
  CHECK(integrate_semi([](double x) { return std::pow(x, -3.0); }, 1.0,
                       infinity()) == doctest::Approx(0.5).epsilon(1e-10));
  // int_0^inf x e^-x = 1
  CHECK(integrate_semi([](double x) { return x * std::exp(-x); }, 0.0,
                       infinity()) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("integrable endpoint singularities converge") {
  // int_0^1 x^-1/2 = 2
  CHECK(integrate_semi([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0) ==
        doctest::Approx(2.0).epsilon(1e-9));
  // int_0^1 x^-0.9 = 10
  CHECK(integrate_semi([](double x) { return std::pow(x, -0.9); }, 0.0, 1.0) ==
        doctest::Approx(10.0).epsilon(1e-7));
}

TEST_CASE("non-integrable singularities are reported, not summed") {
  CHECK_THROWS_AS(
      integrate_semi([](double x) { return std::pow(x, -1.5); }, 0.0, 1.0),
      DivergentError);
  CHECK_THROWS_AS(
      integrate_semi([](double x) { return 1.0 / x; }, 0.0, 1.0),
      DivergentError);
  // diverging tail: int_1^inf x^-1/2
  CHECK_THROWS_AS(
      integrate_semi([](double x) { return std::pow(x, -0.5); }, 1.0,
                     infinity()),
      DivergentError);
}

TEST_CASE("narrow interior boundary layer is captured with a scale hint") {
  // int_0^L s e^(-s/w) ds with w << L: mass w^2 concentrated near 0.
  const double w = 1e-7;
  const double L = 1e5;
  QuadratureOptions opts;
  opts.abs_tol = 1e-18;
  opts.rel_tol = 1e-8;
  opts.min_feature_scale = w / 4.0;
  const double got = integrate_semi(
      [&](double s) { return s * std::exp(-s / w); }, 0.0, L, opts);
  CHECK(got == doctest::Approx(w * w).epsilon(1e-6));
}
