#include "bma/error.hpp"
#include "bma/prior_fit.hpp"

#include "doctest.h"

#include <cmath>
#include <random>

using namespace bma;

namespace {

Comparison with_k(std::size_t k, std::string id, double spread = 0.0) {
  Comparison c{std::move(id), {}, std::nullopt};
  for (std::size_t i = 0; i < k; ++i) {
    c.studies.push_back({0.2 + spread * ((i % 2) ? 1.0 : -1.0), 0.1, "s", std::nullopt});
  }
  return c;
}

}  // namespace

TEST_CASE("study-count filter") {
  std::vector<Comparison> corpus;
  for (std::size_t k : {3, 9, 10, 12, 15}) corpus.push_back(with_k(k, "c" + std::to_string(k), 0.1));
  const auto t = prepare_training(corpus, 10, 0.01);
  CHECK(t.provenance.retained_comparisons == 3);
  CHECK(t.provenance.dropped_too_few_studies == 2);
  CHECK(t.provenance.input_studies == 49);
  CHECK(t.provenance.retained_studies == 37);
  CHECK(t.delta_estimates.size() == 3);
}

TEST_CASE("non-estimable comparisons are dropped") {
  std::vector<Comparison> corpus{with_k(10, "a", 0.1), with_k(10, "b", 0.1)};
  corpus[1].studies[4].se = NAN;
  const auto t = prepare_training(corpus, 10, 0.01);
  CHECK(t.provenance.dropped_non_estimable == 1);
  CHECK(t.provenance.non_estimable_studies == 1);
  CHECK(t.retained_ids == std::vector<std::string>{"a"});
}

TEST_CASE("tau floor applies to the tau list only") {
  // spreads chosen so tau_hat is 0, small and clearly positive
  std::vector<Comparison> corpus{with_k(10, "zero", 0.0), with_k(10, "tiny", 0.0), with_k(10, "big", 0.4)};
  corpus[1].studies[0].effect += 0.02;
  const auto t = prepare_training(corpus, 10, 0.01);
  CHECK(t.fits[0].tau_hat < 0.01);
  CHECK(t.fits[1].tau_hat < 0.01);
  CHECK(t.fits[2].tau_hat > 0.2);
  CHECK(t.delta_estimates.size() == 3);
  CHECK(t.tau_estimates.size() == 1);
  CHECK(t.provenance.tau_below_floor == 2);
}

TEST_CASE("errors") {
  std::vector<Comparison> corpus{with_k(3, "a")};
  CHECK_THROWS_AS(prepare_training(corpus, 10, 0.01), EmptyTrainingError);
  CHECK_THROWS_AS(prepare_training(corpus, 1, 0.01), ParameterDomainError);

  TrainingSet one_tau;
  one_tau.delta_estimates = {0.1, -0.3, 0.5};
  one_tau.tau_estimates = {0.2};
  CHECK_THROWS_AS(fit_candidates(one_tau), DegenerateDataError);
}

TEST_CASE("candidate layout and recovery") {
  std::mt19937_64 rng(77);
  TrainingSet t;
  t.delta_estimates = sample(PriorSpec::normal(0, 0.56), rng, 800);
  t.tau_estimates = sample(PriorSpec::gamma(1.59, 0.26), rng, 800);
  const auto c = fit_candidates(t);
  REQUIRE(c.delta_priors.size() == 3);
  REQUIRE(c.tau_priors.size() == 4);
  CHECK(c.delta_priors[0] == PriorSpec::cauchy(0, 1 / std::sqrt(2.0)));
  CHECK(c.delta_priors[1].family() == Family::Normal);
  CHECK(c.delta_priors[2].family() == Family::StudentT);
  CHECK(c.tau_priors[0] == PriorSpec::uniform(0, 1));
  CHECK(c.tau_priors[1].family() == Family::HalfNormal);
  CHECK(c.tau_priors[2].family() == Family::InverseGamma);
  CHECK(c.tau_priors[3].family() == Family::Gamma);
  CHECK(c.delta_priors[1].param(1) == doctest::Approx(0.56).epsilon(0.10));
  CHECK(c.tau_priors[3].param(0) == doctest::Approx(1.59).epsilon(0.15));
  CHECK(c.tau_priors[3].param(1) == doctest::Approx(0.26).epsilon(0.15));
}

TEST_CASE("serial and parallel training agree") {
  std::mt19937_64 rng(4);
  std::vector<Comparison> corpus;
  for (int i = 0; i < 30; ++i) {
    Comparison c{"c" + std::to_string(i), {}, std::nullopt};
    for (int j = 0; j < 12; ++j) c.studies.push_back({std::normal_distribution<double>(0.3, 0.4)(rng), 0.2, "s", {}});
    corpus.push_back(c);
  }
  const auto a = prepare_training(corpus, 10, 0.01, Execution::Serial);
  const auto b = prepare_training(corpus, 10, 0.01, Execution::Parallel);
  CHECK(a.delta_estimates == b.delta_estimates);
  CHECK(a.tau_estimates == b.tau_estimates);
}

TEST_CASE("end-to-end recovery from simulated comparisons") {
  std::mt19937_64 rng(21);
  const auto dp = PriorSpec::student_t(0, 0.33, 3);
  const auto tp = PriorSpec::gamma(1.59, 0.26);
  std::vector<Comparison> corpus;
  for (int i = 0; i < 300; ++i) {
    const double d = sample(dp, rng, 1)[0], tau = sample(tp, rng, 1)[0];
    Comparison c{"c" + std::to_string(i), {}, std::nullopt};
    for (int j = 0; j < 30; ++j) {
      const double se = std::uniform_real_distribution<double>(0.03, 0.06)(rng);
      c.studies.push_back({std::normal_distribution<double>(d, std::sqrt(se * se + tau * tau))(rng), se, "s", {}});
    }
    corpus.push_back(std::move(c));
  }
  const auto cand = fit_candidates(prepare_training(corpus, 10, 0.01));
  CHECK(cand.delta_priors[2].param(1) == doctest::Approx(0.33).epsilon(0.15));
  CHECK(cand.tau_priors[3].param(1) == doctest::Approx(0.26).epsilon(0.15));
}
