#include "bma/ensemble.hpp"
#include "bma/error.hpp"
#include "bma/prior_fit.hpp"

#include "doctest.h"

#include <cmath>
#include <numeric>

using namespace bma;

namespace {

ModelEnsemble two_models(double p0, double p1) {
  const ModelSpec m{PriorSpec::normal(0, 1), PriorSpec::point_mass(0), "a"};
  return ModelEnsemble{{{m, p0}, {ModelSpec{PriorSpec::point_mass(0), PriorSpec::point_mass(0), "b"}, p1}}};
}

}  // namespace

TEST_CASE("standard ensemble weights") {
  const auto ref = reference_candidates();
  const auto e = build_standard_ensemble(ref.delta_priors, ref.tau_priors, EnsembleScheme::FourType);
  REQUIRE(e.size() == 20);
  CHECK(e.members[0].prior_prob == 0.25);
  for (int i = 1; i <= 3; ++i) CHECK(e.members[i].prior_prob == 0.25 / 3);
  for (int i = 4; i <= 7; ++i) CHECK(e.members[i].prior_prob == 0.25 / 4);
  for (int i = 8; i < 20; ++i) CHECK(e.members[i].prior_prob == 0.25 / 12);
  CHECK(e.members[8].prior_prob == doctest::Approx(1.0 / 48).epsilon(1e-15));
  CHECK_NOTHROW(validate(e));

  const auto flat = build_standard_ensemble(ref.delta_priors, ref.tau_priors, EnsembleScheme::Flat,
                                            Restriction::RandomAlternativeOnly);
  REQUIRE(flat.size() == 12);
  for (const auto& m : flat.members) CHECK(m.prior_prob == 1.0 / 12);

  const PriorSpec d[] = {PriorSpec::normal(0, 1)}, t[] = {PriorSpec::half_normal(1)};
  const auto four = build_standard_ensemble(d, t, EnsembleScheme::FourType);
  REQUIRE(four.size() == 4);
  CHECK(four.members[3].model.name == "random_H1");
  for (const auto& m : four.members) CHECK(m.prior_prob == 0.25);

  const PriorSpec bad_tau[] = {PriorSpec::normal(0, 1)};
  CHECK_THROWS_AS(build_standard_ensemble(d, bad_tau, EnsembleScheme::FourType), ParameterDomainError);
}

TEST_CASE("inclusion Bayes factors from posterior probabilities") {
  const PriorSpec d[] = {PriorSpec::normal(0, 1)}, t[] = {PriorSpec::half_normal(1)};
  const auto e = build_standard_ensemble(d, t, EnsembleScheme::FourType);
  const double post[] = {1.95e-20, 0.221, 0.00456, 0.774};
  const auto effect = inclusion_bf(e, post, {false, true, false, true});
  CHECK(effect.value == doctest::Approx(0.995 / 0.00456).epsilon(1e-12));
  CHECK(effect.value == doctest::Approx(218.5).epsilon(0.01));
  const auto het = inclusion_bf(e, post, {false, false, true, true});
  CHECK(het.value == doctest::Approx((0.00456 + 0.774) / (1.95e-20 + 0.221)).epsilon(1e-12));
  CHECK(het.value == doctest::Approx(3.52).epsilon(0.01));

  const auto two = two_models(0.5, 0.5);
  const double p82[] = {0.8, 0.2};
  CHECK(inclusion_bf(two, p82, {true, false}).value == doctest::Approx(4.0));
  const auto skew = two_models(0.9, 0.1);
  const double p91[] = {0.9, 0.1};
  CHECK(inclusion_bf(skew, p91, {true, false}).value == doctest::Approx(1.0));
  const double p10[] = {1.0, 0.0};
  CHECK(inclusion_bf(two, p10, {true, false}).infinite);
  CHECK_THROWS_AS(inclusion_bf(two, p82, {true, true}), ParameterDomainError);
}

TEST_CASE("16-configuration ensemble inclusion BF by hand") {
  const PriorSpec d[] = {PriorSpec::normal(0, 0.56), PriorSpec::student_t(0, 0.33, 3)};
  const PriorSpec t[] = {PriorSpec::half_normal(0.57), PriorSpec::gamma(1.59, 0.26),
                         PriorSpec::inverse_gamma(1.26, 0.24)};
  const auto e = build_standard_ensemble(d, t, EnsembleScheme::FourType);
  REQUIRE(e.size() == 12);
  std::vector<double> lm(e.size());
  for (std::size_t i = 0; i < lm.size(); ++i) lm[i] = -3.0 - 0.37 * static_cast<double>(i % 5) + 0.11 * i;
  const auto r = combine_marginals(e, lm);
  double in_num = 0, out_num = 0, in_prior = 0, out_prior = 0;
  for (std::size_t i = 0; i < e.size(); ++i) {
    const double mass = e.members[i].prior_prob * std::exp(lm[i]);
    (delta_free(e.members[i].model) ? in_num : out_num) += mass;
    (delta_free(e.members[i].model) ? in_prior : out_prior) += e.members[i].prior_prob;
  }
  CHECK(r.incl_bf_effect->value == doctest::Approx((in_num / out_num) / (in_prior / out_prior)).epsilon(1e-12));
}

TEST_CASE("combine_marginals identities") {
  const auto ref = reference_candidates();
  const auto e = build_standard_ensemble(ref.delta_priors, ref.tau_priors, EnsembleScheme::FourType);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-60, -2);
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<double> lm(e.size());
    for (auto& v : lm) v = u(rng);
    const auto r = combine_marginals(e, lm);
    CHECK(std::accumulate(r.posterior_probs.begin(), r.posterior_probs.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-12));
    for (std::size_t i = 0; i < e.size(); ++i) {
      for (std::size_t j = 0; j < e.size(); ++j) {
        CHECK(r.log_bf_matrix[i][j] == doctest::Approx(-r.log_bf_matrix[j][i]).epsilon(1e-12));
        const std::size_t k = (i + j) % e.size();
        CHECK(r.log_bf_matrix[i][j] + r.log_bf_matrix[j][k] == doctest::Approx(r.log_bf_matrix[i][k]).epsilon(1e-9));
      }
    }
  }
  SUBCASE("equal marginals give unit inclusion BFs") {
    const PriorSpec d[] = {PriorSpec::normal(0, 1)}, t[] = {PriorSpec::half_normal(1)};
    const auto four = build_standard_ensemble(d, t, EnsembleScheme::FourType);
    const double lm[] = {-4.2, -4.2, -4.2, -4.2};
    const auto r = combine_marginals(four, lm);
    CHECK(r.incl_bf_effect->value == doctest::Approx(1.0));
    CHECK(r.incl_bf_heterogeneity->value == doctest::Approx(1.0));
  }
  SUBCASE("identical models") {
    const ModelSpec m{PriorSpec::normal(0, 1), PriorSpec::point_mass(0), "a"};
    const ModelEnsemble same{{{m, 0.5}, {m, 0.5}}};
    const double y[] = {0.3, 0.1}, s[] = {0.2, 0.2};
    const auto r = evaluate(same, make_comparison(y, s));
    CHECK(r.posterior_probs[0] == doctest::Approx(0.5));
    CHECK(r.bf_matrix[0][1] == doctest::Approx(1.0));
  }
  SUBCASE("degenerate evidence") {
    const double lm[] = {-INFINITY, -INFINITY};
    CHECK_THROWS_AS(combine_marginals(two_models(0.5, 0.5), lm), DegenerateEvidenceError);
  }
}

TEST_CASE("evaluate on one study at the null favours parsimony") {
  const double y[] = {0.0}, s[] = {1.0};
  const PriorSpec d[] = {PriorSpec::cauchy(0, 0.707)}, t[] = {PriorSpec::half_normal(0.5)};
  const auto e = build_standard_ensemble(d, t, EnsembleScheme::FourType);
  const auto r = evaluate(e, make_comparison(y, s));
  CHECK(r.posterior_probs[0] > r.posterior_probs[1]);
  CHECK(r.averaged_delta.has_value());
  CHECK(r.averaged_tau.has_value());
}

TEST_CASE("sequential updating") {
  const double y[] = {0.5, 0.2, 0.8, 0.35}, s[] = {0.2, 0.3, 0.25, 0.15};
  const auto c = make_comparison(y, s);
  const PriorSpec d[] = {PriorSpec::student_t(0, 0.51, 5)}, t[] = {PriorSpec::inverse_gamma(1.79, 0.28)};
  const auto e = build_standard_ensemble(d, t, EnsembleScheme::FourType);
  EvaluateOptions opts;
  opts.summaries = false;
  const std::size_t fwd[] = {0, 1, 2, 3}, rev[] = {3, 2, 1, 0};
  const auto a = sequential_update(e, c, fwd, opts);
  const auto b = sequential_update(e, c, rev, opts);
  const auto batch = evaluate(e, c, opts);
  const std::size_t first[] = {0};
  const auto single = evaluate(e, c.subset(first), opts);
  REQUIRE(a.size() == 4);
  for (std::size_t i = 0; i < e.size(); ++i) {
    CHECK(a.front().posterior_probs[i] == single.posterior_probs[i]);
    CHECK(a.back().posterior_probs[i] == doctest::Approx(batch.posterior_probs[i]).epsilon(1e-9));
    CHECK(b.back().posterior_probs[i] == doctest::Approx(batch.posterior_probs[i]).epsilon(1e-9));
  }
  const std::size_t bad[] = {0, 0, 1, 2};
  CHECK_THROWS_AS(sequential_update(e, c, bad, opts), ParameterDomainError);
}
