#pragma once

#include "bma/ensemble.hpp"
#include "bma/parallel.hpp"
#include "bma/prior_fit.hpp"

#include <span>
#include <string>
#include <vector>

namespace bma {

struct PipelineOptions {
  MarginalOptions marginal;
  std::size_t min_studies = 3;
  /// Abort with CorpusFailureError when more than this fraction of the
  /// eligible comparisons fail to evaluate.
  double max_failure_fraction = 0.01;
  Execution execution = Execution::Parallel;
};

struct ComparisonFailure {
  std::string id;
  std::string message;
};

/// Log marginal likelihoods of every comparison under the full four-type
/// ensemble built from a candidate set. All ranking tables derive from it.
struct CorpusEvaluation {
  ModelEnsemble ensemble;
  std::size_t delta_count = 0;
  std::size_t tau_count = 0;
  /// Evaluated comparisons, sorted by id so results do not depend on input order.
  std::vector<std::string> ids;
  std::vector<std::vector<double>> log_marginals;
  std::vector<ComparisonFailure> failures;
  std::size_t skipped_too_few_studies = 0;
  std::size_t skipped_non_estimable = 0;

  std::size_t evaluated() const noexcept { return ids.size(); }
  /// Ensemble index of the random-effects alternative with priors (d, t).
  std::size_t random_alternative_index(std::size_t d, std::size_t t) const noexcept {
    return 1 + delta_count + tau_count + d * tau_count + t;
  }
};

CorpusEvaluation evaluate_corpus(std::span<const Comparison> corpus, const CandidatePriorSet& candidates,
                                 const PipelineOptions& options = {});

struct RankingRow {
  std::string label;
  /// rank_counts[r] is the number of comparisons where this entity ranked r + 1.
  std::vector<std::size_t> rank_counts;
  double prior_prob;
  double average_posterior;
};

struct RankingTable {
  std::vector<RankingRow> rows;
  std::size_t evaluated = 0;
};

/// Posterior probabilities of the random-effects alternatives under a flat
/// prior over configurations (RandomAlternativeOnly) or of all members under
/// the four-type weights (AllTypes), ranked per comparison.
RankingTable rank_configurations(const CorpusEvaluation& evaluation, Restriction restriction);

/// Four-type posterior mass summed within each model type.
RankingTable average_model_types(const CorpusEvaluation& evaluation);

struct ParameterPriorTables {
  RankingTable delta;
  RankingTable tau;
};

/// Within the random-effects alternatives, posterior mass of each delta prior
/// summed over its tau partners, and of each tau prior over its delta partners.
ParameterPriorTables average_parameter_priors(const CorpusEvaluation& evaluation);

struct InclusionSummary {
  std::size_t evaluated = 0;
  std::size_t effect_for = 0;
  std::size_t effect_against = 0;
  std::size_t heterogeneity_for = 0;
  std::size_t heterogeneity_against = 0;
  std::vector<std::string> ids;
  std::vector<double> log_bf_effect;
  std::vector<double> log_bf_heterogeneity;
};

/// Inclusion Bayes factors per comparison under the four-type ensemble.
/// "for" counts BF > 1.
InclusionSummary corpus_inclusion_summary(const CorpusEvaluation& evaluation);

/// Per-comparison posterior probabilities used by the tables, exposed for tests.
std::vector<double> configuration_posteriors(const CorpusEvaluation& evaluation, std::size_t comparison,
                                             Restriction restriction);

/// 1-based ranks by descending value; ties keep index order.
std::vector<std::size_t> stable_ranks(std::span<const double> values);

}  // namespace bma
