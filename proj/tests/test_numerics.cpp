#include "bma/error.hpp"
#include "bma/optimize.hpp"
#include "bma/quadrature.hpp"

#include "doctest.h"

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

using namespace bma;

TEST_CASE("integrate_log on known integrals") {
  const double no_hints[] = {0.0};
  SUBCASE("standard normal kernel") {
    auto f = [](double x) { return -0.5 * x * x; };
    const auto r = integrate_log(f, -40, 40, no_hints);
    CHECK(r.log_value == doctest::Approx(0.5 * std::log(2 * std::numbers::pi)).epsilon(1e-12));
  }
  SUBCASE("values far below double range") {
    auto f = [](double x) { return -5000.0 - 0.5 * x * x / 1e-4; };
    const auto r = integrate_log(f, -3, 3, no_hints);
    CHECK(r.log_value == doctest::Approx(-5000.0 + 0.5 * std::log(2 * std::numbers::pi * 1e-4)).epsilon(1e-12));
  }
  SUBCASE("narrow off-centre spike in a wide interval") {
    auto f = [](double x) { return -0.5 * (x - 7.3) * (x - 7.3) / 1e-6; };
    const auto r = integrate_log(f, -100, 100, {});
    CHECK(r.log_value == doctest::Approx(0.5 * std::log(2 * std::numbers::pi * 1e-6)).epsilon(1e-10));
  }
  SUBCASE("polynomial") {
    auto f = [](double x) { return std::log(3 * x * x); };
    const auto r = integrate_log(f, 0.0, 2.0, {});
    CHECK(std::exp(r.log_value) == doctest::Approx(8.0).epsilon(1e-12));
  }
  SUBCASE("zero everywhere") {
    auto f = [](double) { return -std::numeric_limits<double>::infinity(); };
    CHECK(integrate_log(f, 0, 1, {}).log_value == -std::numeric_limits<double>::infinity());
  }
  SUBCASE("subdivision budget exhausted") {
    auto f = [](double x) { return std::sin(1.0 / (x + 1e-3)) > 0 ? 0.0 : -1.0; };
    CHECK_THROWS_AS(integrate_log(f, 0.0, 1.0, {}, QuadratureOptions{1e-14, 8}), ConvergenceError);
  }
}

TEST_CASE("log_sum_exp") {
  const std::vector<double> v{-1000.0, -1000.0};
  CHECK(log_sum_exp(v) == doctest::Approx(-1000.0 + std::log(2.0)));
  const double inf = std::numeric_limits<double>::infinity();
  const std::vector<double> w{-inf, -inf};
  CHECK(log_sum_exp(w) == -inf);
  const std::vector<double> z{0.0, std::log(3.0)};
  CHECK(log_sum_exp(z) == doctest::Approx(std::log(4.0)));
}

TEST_CASE("golden section") {
  auto f = [](double x) { return -(x - 0.3) * (x - 0.3); };
  const auto r = golden_section_maximize(f, 0.0, 2.0, 1e-10);
  CHECK(r.converged);
  CHECK(r.x == doctest::Approx(0.3).epsilon(1e-8));
  // Maximum on the boundary.
  const auto b = golden_section_maximize([](double x) { return -x; }, 0.0, 1.0, 1e-10);
  CHECK(b.x == doctest::Approx(0.0).epsilon(1e-8));
}

TEST_CASE("nelder mead") {
  auto rosen = [](const std::vector<double>& p) {
    return 100 * std::pow(p[1] - p[0] * p[0], 2) + std::pow(1 - p[0], 2);
  };
  const auto r = nelder_mead_minimize(rosen, {-1.2, 1.0}, 0.5, 1e-12);
  CHECK(r.converged);
  CHECK(r.x[0] == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(r.x[1] == doctest::Approx(1.0).epsilon(1e-5));
}
