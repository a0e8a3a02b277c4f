#pragma once

#include "bma/cli/forest.hpp"
#include "bma/ensemble.hpp"
#include "bma/pipeline.hpp"
#include "bma/prior_fit.hpp"

#include "json.hpp"

#include <optional>
#include <string>
#include <vector>

namespace bma::cli {

using Json = nlohmann::ordered_json;

struct AnalyzeConfig {
  PriorSpec delta_prior = PriorSpec::point_mass(0.0);
  PriorSpec tau_prior = PriorSpec::point_mass(0.0);
  std::optional<std::string> subfield;
  bool subfield_matched = false;
  EnsembleScheme scheme = EnsembleScheme::FourType;
  TypeWeights model_priors;
  bool sequential = false;
  bool null_spikes = false;
  MarginalOptions marginal;
};

struct AnalyzeReport {
  ModelEnsemble ensemble;
  BmaResult result;
  std::vector<BmaResult> sequence;
  std::vector<ForestRow> forest;
  Json json;
};

/// Four-model analysis of one comparison, serialised for the analyze command.
AnalyzeReport analyze(const Comparison& comparison, const AnalyzeConfig& config);

Json summary_json(const PosteriorSummary& summary);
Json to_json(const CandidatePriorSet& candidates);
/// Reads the delta_priors / tau_priors arrays written by to_json.
CandidatePriorSet candidates_from_json(const Json& json);
Json to_json(const RankingTable& table);
Json to_json(const InclusionSummary& summary);
/// Evaluation bookkeeping: counts of evaluated, skipped and failed comparisons.
Json evaluation_json(const CorpusEvaluation& evaluation);

/// Two-space indented JSON followed by a newline.
std::string dump(const Json& json);

}  // namespace bma::cli
