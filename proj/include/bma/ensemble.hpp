#pragma once

#include "bma/marginal.hpp"

#include <optional>
#include <span>
#include <vector>

namespace bma {

struct EnsembleMember {
  ModelSpec model;
  double prior_prob;
};

/// Weighted set of competing models. Prior probabilities are positive and sum to one.
struct ModelEnsemble {
  std::vector<EnsembleMember> members;

  std::size_t size() const noexcept { return members.size(); }
  std::vector<double> prior_probs() const;
};

void validate(const ModelEnsemble& ensemble);

enum class EnsembleScheme {
  /// Each of the four model types gets its type weight, split evenly among
  /// the prior configurations of that type.
  FourType,
  /// Every prior configuration gets the same weight.
  Flat,
};

enum class Restriction { AllTypes, RandomAlternativeOnly };

/// Prior probabilities of the four model types under the FourType scheme.
struct TypeWeights {
  double fixed_null = 0.25;
  double fixed_alternative = 0.25;
  double random_null = 0.25;
  double random_alternative = 0.25;
};

/// Members are ordered fixed null, fixed alternatives (one per delta prior),
/// random nulls (one per tau prior), then random alternatives in delta-major
/// order. Single-prior ensembles use the bare type names ("fixed_H1");
/// otherwise names carry the prior text.
ModelEnsemble build_standard_ensemble(std::span<const PriorSpec> delta_priors, std::span<const PriorSpec> tau_priors,
                                      EnsembleScheme scheme, Restriction restriction = Restriction::AllTypes,
                                      const TypeWeights& type_weights = {});

/// Bayes factor for membership of a bipartition. `infinite` is set when the
/// out-set has zero posterior mass; value and log_value are then +inf.
struct InclusionBayesFactor {
  double value;
  double log_value;
  bool infinite;
};

/// (posterior in / posterior out) / (prior in / prior out). Throws
/// ParameterDomainError when either side of the partition is empty.
InclusionBayesFactor inclusion_bf(const ModelEnsemble& ensemble, std::span<const double> posterior_probs,
                                  const std::vector<bool>& in_set);

struct EvaluateOptions {
  MarginalOptions marginal;
  /// Compute per-model and averaged posterior summaries.
  bool summaries = true;
  /// Averaged delta includes the delta = 0 point masses of null models.
  bool include_null_spikes = false;
};

struct BmaResult {
  std::vector<double> log_marginals;
  std::vector<double> posterior_probs;
  std::vector<std::vector<double>> bf_matrix;
  std::vector<std::vector<double>> log_bf_matrix;
  /// Absent when the ensemble has no models on one side of the partition.
  std::optional<InclusionBayesFactor> incl_bf_effect;
  std::optional<InclusionBayesFactor> incl_bf_heterogeneity;
  double incl_posterior_effect = 0.0;
  double incl_posterior_heterogeneity = 0.0;
  std::optional<PosteriorSummary> averaged_delta;
  std::optional<PosteriorSummary> averaged_tau;
  std::vector<std::optional<PosteriorSummary>> delta_summaries;
  std::vector<std::optional<PosteriorSummary>> tau_summaries;
};

/// Posterior model probabilities, Bayes factors and inclusion Bayes factors
/// from precomputed log marginal likelihoods. Throws DegenerateEvidenceError
/// when every marginal is -inf.
BmaResult combine_marginals(const ModelEnsemble& ensemble, std::span<const double> log_marginals);

BmaResult evaluate(const ModelEnsemble& ensemble, const Comparison& comparison, const EvaluateOptions& options = {});

/// Result t (0-based) evaluates the first t + 1 studies of `order`.
std::vector<BmaResult> sequential_update(const ModelEnsemble& ensemble, const Comparison& comparison,
                                         std::span<const std::size_t> order, const EvaluateOptions& options = {});

}  // namespace bma
