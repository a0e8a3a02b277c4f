#include "bma/error.hpp"
#include "bma/pipeline.hpp"

#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

using namespace bma;

namespace {

std::vector<Comparison> simulate_corpus(std::uint64_t seed, int n, int k, double delta, double tau) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> se_d(0.1, 0.4);
  std::vector<Comparison> out;
  for (int i = 0; i < n; ++i) {
    Comparison c{"cmp" + std::to_string(i), {}, std::nullopt};
    for (int j = 0; j < k; ++j) {
      const double se = se_d(rng);
      c.studies.push_back({std::normal_distribution<double>(delta, std::sqrt(se * se + tau * tau))(rng), se, "s", {}});
    }
    out.push_back(std::move(c));
  }
  return out;
}

const CorpusEvaluation& shared_evaluation() {
  static const CorpusEvaluation ev = [] {
    auto corpus = simulate_corpus(1, 5, 6, 0.3, 0.2);
    corpus.push_back(Comparison{"small", {corpus[0].studies[0], corpus[0].studies[1]}, std::nullopt});
    auto bad = corpus[1];
    bad.id = "bad";
    bad.studies[2].effect = NAN;
    corpus.push_back(bad);
    return evaluate_corpus(corpus, reference_candidates());
  }();
  return ev;
}

void check_bookkeeping(const RankingTable& t) {
  double avg = 0.0;
  for (const auto& row : t.rows) {
    CHECK(std::accumulate(row.rank_counts.begin(), row.rank_counts.end(), std::size_t{0}) == t.evaluated);
    avg += row.average_posterior;
  }
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    std::size_t col = 0;
    for (const auto& row : t.rows) col += row.rank_counts[r];
    CHECK(col == t.evaluated);
  }
  CHECK(avg == doctest::Approx(1.0).epsilon(1e-8));
}

}  // namespace

TEST_CASE("stable ranks") {
  const double v[] = {0.2, 0.5, 0.2, 0.1};
  CHECK(stable_ranks(v) == std::vector<std::size_t>{2, 1, 3, 4});
}

TEST_CASE("corpus filtering") {
  const auto& ev = shared_evaluation();
  CHECK(ev.evaluated() == 5);
  CHECK(ev.skipped_too_few_studies == 1);
  CHECK(ev.skipped_non_estimable == 1);
  CHECK(ev.failures.empty());
  CHECK(std::is_sorted(ev.ids.begin(), ev.ids.end()));
}

TEST_CASE("ranking tables") {
  const auto& ev = shared_evaluation();
  const auto h1r = rank_configurations(ev, Restriction::RandomAlternativeOnly);
  REQUIRE(h1r.rows.size() == 12);
  check_bookkeeping(h1r);
  for (const auto& r : h1r.rows) CHECK(r.prior_prob == 1.0 / 12);

  const auto all = rank_configurations(ev, Restriction::AllTypes);
  REQUIRE(all.rows.size() == 20);
  check_bookkeeping(all);

  const auto types = average_model_types(ev);
  REQUIRE(types.rows.size() == 4);
  check_bookkeeping(types);
  for (const auto& r : types.rows) CHECK(r.prior_prob == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(types.rows[0].label == "fixed_H0");

  const auto params = average_parameter_priors(ev);
  REQUIRE(params.delta.rows.size() == 3);
  REQUIRE(params.tau.rows.size() == 4);
  check_bookkeeping(params.delta);
  check_bookkeeping(params.tau);
  for (const auto& r : params.delta.rows) CHECK(r.prior_prob == 1.0 / 3);
  for (const auto& r : params.tau.rows) CHECK(r.prior_prob == 0.25);
}

TEST_CASE("single comparison gives one entry per rank") {
  const auto corpus = simulate_corpus(2, 1, 4, 0.5, 0.3);
  const auto ev = evaluate_corpus(corpus, reference_candidates());
  const auto t = rank_configurations(ev, Restriction::RandomAlternativeOnly);
  for (std::size_t r = 0; r < 12; ++r) {
    std::size_t ones = 0;
    for (const auto& row : t.rows) ones += row.rank_counts[r];
    CHECK(ones == 1);
  }
}

TEST_CASE("per-comparison partitions sum to one") {
  const auto& ev = shared_evaluation();
  for (std::size_t i = 0; i < ev.evaluated(); ++i) {
    const auto four = configuration_posteriors(ev, i, Restriction::AllTypes);
    CHECK(std::accumulate(four.begin(), four.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-10));
    const auto h1r = configuration_posteriors(ev, i, Restriction::RandomAlternativeOnly);
    // Within-H1r ratios do not depend on the ensemble weights.
    for (std::size_t a = 0; a < 12; ++a) {
      const std::size_t b = (a + 5) % 12;
      const double r_h1r = h1r[a] / h1r[b];
      const double r_four = four[8 + a] / four[8 + b];
      CHECK(r_h1r == doctest::Approx(r_four).epsilon(1e-9));
    }
  }
}

TEST_CASE("order and execution independence") {
  auto corpus = simulate_corpus(3, 4, 5, 0.1, 0.1);
  const auto a = evaluate_corpus(corpus, reference_candidates());
  std::reverse(corpus.begin(), corpus.end());
  PipelineOptions serial;
  serial.execution = Execution::Serial;
  const auto b = evaluate_corpus(corpus, reference_candidates(), serial);
  CHECK(a.ids == b.ids);
  CHECK(a.log_marginals == b.log_marginals);
  const auto ta = average_model_types(a), tb = average_model_types(b);
  for (std::size_t i = 0; i < 4; ++i) CHECK(ta.rows[i].average_posterior == tb.rows[i].average_posterior);
}

TEST_CASE("inclusion summary") {
  const auto& ev = shared_evaluation();
  const auto s = corpus_inclusion_summary(ev);
  CHECK(s.effect_for + s.effect_against == s.evaluated);
  CHECK(s.heterogeneity_for + s.heterogeneity_against == s.evaluated);
  CHECK(s.log_bf_effect.size() == s.evaluated);
}

TEST_CASE("null homogeneous corpus favours the fixed null") {
  const auto corpus = simulate_corpus(4, 4, 20, 0.0, 0.0);
  const auto ev = evaluate_corpus(corpus, reference_candidates());
  const auto t = average_model_types(ev);
  CHECK(t.rows[0].average_posterior == std::max({t.rows[0].average_posterior, t.rows[1].average_posterior,
                                                 t.rows[2].average_posterior, t.rows[3].average_posterior}));
  CHECK(corpus_inclusion_summary(ev).effect_for <= 1);
}

TEST_CASE("failures are recorded and can abort") {
  const auto corpus = simulate_corpus(5, 3, 4, 0.2, 0.2);
  PipelineOptions opts;
  opts.marginal.outer.max_intervals = 1;
  opts.marginal.outer.rel_tol = 1e-15;
  CHECK_THROWS_AS(evaluate_corpus(corpus, reference_candidates(), opts), CorpusFailureError);
  opts.max_failure_fraction = 1.0;
  const auto ev = evaluate_corpus(corpus, reference_candidates(), opts);
  CHECK(ev.failures.size() == 3);
  CHECK(ev.evaluated() == 0);
}
