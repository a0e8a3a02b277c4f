#include "bma/distributions.hpp"
#include "bma/error.hpp"

#include "doctest.h"
#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

using namespace bma;

TEST_CASE("log_pdf closed forms") {
  CHECK(log_pdf(PriorSpec::normal(0, 0.56), 0.0) == doctest::Approx(-0.3391200379517306).epsilon(1e-14));
  CHECK(log_pdf(PriorSpec::normal(0, 0.56), 0.0) == doctest::Approx(-std::log(0.56) - 0.5 * std::log(2 * M_PI)));
  CHECK(log_pdf(PriorSpec::uniform(0, 1), 0.5) == 0.0);
  CHECK(log_pdf(PriorSpec::half_normal(0.57), -0.1) == -std::numeric_limits<double>::infinity());
  CHECK(log_pdf(PriorSpec::half_normal(0.57), 0.3) ==
        doctest::Approx(std::log(2.0) + oracle::normal_logpdf(0.3, 0, 0.57)));
  CHECK(log_pdf(PriorSpec::inverse_gamma(1.26, 0.24), 0.3) ==
        doctest::Approx(std::log(oracle::inv_gamma_pdf(0.3, 1.26, 0.24))));
}

TEST_CASE("densities integrate to one") {
  const PriorSpec specs[] = {PriorSpec::normal(0.1, 0.56),   PriorSpec::half_normal(0.57),
                             PriorSpec::cauchy(0, 0.7),      PriorSpec::student_t(0, 0.33, 3),
                             PriorSpec::gamma(1.59, 0.26),   PriorSpec::inverse_gamma(1.26, 0.24),
                             PriorSpec::uniform(-1, 2)};
  for (const auto& s : specs) {
    CAPTURE(to_string(s));
    // Central 99.98% so the fixed-step rule is accurate in the tails too.
    const double lo = quantile(s, 1e-4), hi = quantile(s, 1 - 1e-4);
    const double mass = oracle::simpson([&](double x) { return std::exp(log_pdf(s, x)); }, lo, hi, 400000);
    CHECK(mass == doctest::Approx(1.0 - 2e-4).epsilon(1e-8));
  }
}

TEST_CASE("quantile") {
  CHECK(quantile(PriorSpec::uniform(0, 1), 0.25) == doctest::Approx(0.25));
  CHECK(quantile(PriorSpec::normal(0, 0.56), 0.5) == doctest::Approx(0.0));
  CHECK(quantile(PriorSpec::half_normal(0.57), 0.5) == doctest::Approx(0.3844591576117665).epsilon(1e-12));
  CHECK(quantile(PriorSpec::gamma(1.59, 0.26), 0.9) == doctest::Approx(0.8493235720212915).epsilon(1e-12));
  CHECK_THROWS_AS(quantile(PriorSpec::point_mass(0), 0.5), UnsupportedOperationError);
  CHECK_THROWS_AS(quantile(PriorSpec::normal(0, 1), 1.0), ParameterDomainError);

  SUBCASE("inverse-gamma median against bisection on the integrated density") {
    const double frozen = 0.2535035570437154;
    auto cdf_oracle = [](double x) { return oracle::simpson([](double u) { return oracle::inv_gamma_pdf(u, 1.26, 0.24); }, 0.0, x, 20000); };
    const double median = oracle::bisect([&](double x) { return cdf_oracle(x) - 0.5; }, 0.01, 5.0, 60);
    CHECK(median == doctest::Approx(frozen).epsilon(1e-7));
    CHECK(quantile(PriorSpec::inverse_gamma(1.26, 0.24), 0.5) == doctest::Approx(frozen).epsilon(1e-12));
  }
}

TEST_CASE("cdf and quantile are inverse") {
  const PriorSpec specs[] = {PriorSpec::normal(0, 0.56), PriorSpec::student_t(0, 0.33, 3),
                             PriorSpec::gamma(1.59, 0.26), PriorSpec::inverse_gamma(1.26, 0.24),
                             PriorSpec::half_normal(0.57), PriorSpec::cauchy(0, 0.7)};
  for (const auto& s : specs) {
    for (double p : {1e-6, 0.01, 0.3, 0.5, 0.77, 0.999}) {
      CHECK(cdf(s, quantile(s, p)) == doctest::Approx(p).epsilon(1e-10));
    }
  }
  CHECK(cdf(PriorSpec::student_t(0, 0.33, 3), 0.5) == doctest::Approx(0.8865108484813083).epsilon(1e-12));
}

TEST_CASE("sampling") {
  std::mt19937_64 rng(42);
  CHECK(sample(PriorSpec::point_mass(0), rng, 3) == std::vector<double>{0, 0, 0});
  const auto u = sample(PriorSpec::uniform(0, 1), rng, 100000);
  CHECK(std::accumulate(u.begin(), u.end(), 0.0) / u.size() == doctest::Approx(0.5).epsilon(0.02));
  auto t = sample(PriorSpec::student_t(0, 0.33, 3), rng, 100000);
  std::nth_element(t.begin(), t.begin() + t.size() / 2, t.end());
  CHECK(std::abs(t[t.size() / 2]) < 0.01);
  for (double v : sample(PriorSpec::half_normal(0.5), rng, 1000)) CHECK(v >= 0.0);
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(PriorSpec::normal(0, 0), ParameterDomainError);
  CHECK_THROWS_AS(PriorSpec::uniform(1, 1), ParameterDomainError);
  CHECK_THROWS_AS(PriorSpec::gamma(-1, 1), ParameterDomainError);
  CHECK_THROWS_AS(PriorSpec::student_t(0, 1, 0), ParameterDomainError);
  CHECK_THROWS_AS(PriorSpec::normal(std::nan(""), 1), ParameterDomainError);
  CHECK_THROWS_AS(PriorSpec::point_mass(1.0).param(1), ParameterDomainError);
}

TEST_CASE("prior text round trip") {
  const PriorSpec specs[] = {PriorSpec::point_mass(0),        PriorSpec::uniform(0, 1),
                             PriorSpec::normal(0, 0.56),      PriorSpec::half_normal(0.57),
                             PriorSpec::cauchy(0, 1 / std::sqrt(2.0)), PriorSpec::student_t(0, 0.33, 3),
                             PriorSpec::gamma(1.59, 0.26),    PriorSpec::inverse_gamma(1.26, 0.24)};
  for (const auto& s : specs) CHECK(parse_prior(to_string(s)) == s);
  CHECK(to_string(PriorSpec::student_t(0, 0.51, 5)) == "t(0,0.51,5)");
  CHECK(parse_prior(" T( 0.0 , 0.51, 5.0 ) ") == PriorSpec::student_t(0, 0.51, 5));
  CHECK(parse_prior("InvGamma(1.79,0.28)") == PriorSpec::inverse_gamma(1.79, 0.28));
  CHECK_THROWS_AS(parse_prior("t(0,0.5)"), ParseError);
  CHECK_THROWS_AS(parse_prior("lognormal(0,1)"), ParseError);
  CHECK_THROWS_AS(parse_prior("normal(0,inf)"), ParseError);
  CHECK_THROWS_AS(parse_prior("normal(0,1"), ParseError);
  CHECK_THROWS_AS(parse_prior("normal(0,-1)"), ParseError);
}

TEST_CASE("maximum likelihood fits") {
  std::mt19937_64 rng(2024);
  SUBCASE("gamma recovers its parameters") {
    const auto x = sample(PriorSpec::gamma(1.59, 0.26), rng, 2000);
    const auto fit = fit_mle(Family::Gamma, x);
    CHECK(fit.param(0) == doctest::Approx(1.59).epsilon(0.10));
    CHECK(fit.param(1) == doctest::Approx(0.26).epsilon(0.10));
  }
  SUBCASE("student t scale with location fixed at zero") {
    const auto x = sample(PriorSpec::student_t(0, 0.33, 3), rng, 2000);
    const auto fit = fit_mle(Family::StudentT, x);
    CHECK(fit.param(0) == 0.0);
    CHECK(fit.param(1) == doctest::Approx(0.33).epsilon(0.10));
  }
  SUBCASE("inverse gamma") {
    const auto x = sample(PriorSpec::inverse_gamma(1.26, 0.24), rng, 4000);
    const auto fit = fit_mle(Family::InverseGamma, x);
    CHECK(fit.param(0) == doctest::Approx(1.26).epsilon(0.10));
    CHECK(fit.param(1) == doctest::Approx(0.24).epsilon(0.10));
  }
  SUBCASE("fit is a local maximum of the likelihood") {
    const auto x = sample(PriorSpec::inverse_gamma(1.26, 0.24), rng, 500);
    const auto fit = fit_mle(Family::InverseGamma, x);
    const double best = log_likelihood(fit, x);
    for (double f : {0.98, 1.02}) {
      CHECK(log_likelihood(PriorSpec::inverse_gamma(fit.param(0) * f, fit.param(1)), x) < best);
      CHECK(log_likelihood(PriorSpec::inverse_gamma(fit.param(0), fit.param(1) * f), x) < best);
    }
  }
  SUBCASE("normal and half-normal closed forms") {
    const std::vector<double> x{0.1, -0.4, 0.7, 0.2};
    const double ss = 0.01 + 0.16 + 0.49 + 0.04;
    CHECK(fit_mle(Family::Normal, x).param(1) == doctest::Approx(std::sqrt(ss / 4)));
    const std::vector<double> h{0.1, 0.4, 0.7, 0.2};
    CHECK(fit_mle(Family::HalfNormal, h).param(0) == doctest::Approx(std::sqrt(ss / 4)));
  }
  CHECK_THROWS_AS(fit_mle(Family::Normal, std::vector<double>{1, 1, 1}), DegenerateDataError);
  CHECK_THROWS_AS(fit_mle(Family::Gamma, std::vector<double>{0.3}), DegenerateDataError);
  CHECK_THROWS_AS(fit_mle(Family::Gamma, std::vector<double>{-0.3, 0.2}), ParameterDomainError);
  CHECK_THROWS_AS(fit_mle(Family::Cauchy, std::vector<double>{0.1, 0.2}), UnsupportedOperationError);
}
