#pragma once

#include "bma/distributions.hpp"
#include "bma/meta.hpp"
#include "bma/parallel.hpp"
#include "bma/reml.hpp"

#include <span>
#include <string>
#include <vector>

namespace bma {

/// Counts recorded while turning a corpus into training estimates.
struct TrainingProvenance {
  std::size_t min_studies = 10;
  double tau_floor = 0.01;
  std::size_t input_comparisons = 0;
  std::size_t input_studies = 0;
  std::size_t dropped_too_few_studies = 0;
  std::size_t dropped_non_estimable = 0;
  std::size_t non_estimable_studies = 0;
  std::size_t retained_comparisons = 0;
  std::size_t retained_studies = 0;
  std::size_t tau_below_floor = 0;
  std::size_t reml_not_converged = 0;
};

struct TrainingSet {
  std::vector<std::string> retained_ids;
  std::vector<RemlFit> fits;
  /// One per retained comparison.
  std::vector<double> delta_estimates;
  /// Retained comparisons with tau_hat >= tau_floor.
  std::vector<double> tau_estimates;
  TrainingProvenance provenance;
};

/// Drops comparisons with fewer than `min_studies` studies, then those with
/// any non-estimable study, and fits REML to the rest. Throws
/// EmptyTrainingError when nothing survives.
TrainingSet prepare_training(std::span<const Comparison> corpus, std::size_t min_studies, double tau_floor,
                             Execution execution = Execution::Parallel);

struct CandidatePriorSet {
  /// Cauchy(0, 1/sqrt 2), fitted Normal(0, s), fitted t(0, s, df).
  std::vector<PriorSpec> delta_priors;
  /// Uniform(0, 1), fitted half-normal, fitted inverse-gamma, fitted gamma.
  std::vector<PriorSpec> tau_priors;
  TrainingProvenance provenance;
};

/// Fits the candidate families to the training estimates; the Cauchy and
/// uniform defaults are fixed.
CandidatePriorSet fit_candidates(const TrainingSet& training, const FitOptions& options = {});

/// The published candidate set obtained from the Cochrane training data.
CandidatePriorSet reference_candidates();

}  // namespace bma
