#include "bma/prior_fit.hpp"

#include "bma/error.hpp"

#include <cmath>
#include <numbers>
#include <optional>

namespace bma {

TrainingSet prepare_training(std::span<const Comparison> corpus, std::size_t min_studies, double tau_floor,
                             Execution execution) {
  if (min_studies < 2) throw ParameterDomainError("prepare_training: min_studies must be at least 2");
  if (!(tau_floor >= 0.0)) throw ParameterDomainError("prepare_training: tau_floor must be non-negative");

  TrainingSet out;
  TrainingProvenance& p = out.provenance;
  p.min_studies = min_studies;
  p.tau_floor = tau_floor;
  p.input_comparisons = corpus.size();

  std::vector<const Comparison*> kept;
  for (const Comparison& c : corpus) {
    p.input_studies += c.size();
    if (c.size() < min_studies) {
      ++p.dropped_too_few_studies;
      continue;
    }
    std::size_t bad = 0;
    for (const Study& s : c.studies) bad += s.estimable() ? 0 : 1;
    if (bad > 0) {
      ++p.dropped_non_estimable;
      p.non_estimable_studies += bad;
      continue;
    }
    kept.push_back(&c);
  }
  if (kept.empty()) throw EmptyTrainingError("no comparisons survive the training filters");

  std::vector<std::optional<RemlFit>> fits(kept.size());
  for_each_index(kept.size(), execution, [&](std::size_t i) { fits[i] = reml_fit(*kept[i]); });

  for (std::size_t i = 0; i < kept.size(); ++i) {
    const RemlFit& f = *fits[i];
    out.retained_ids.push_back(kept[i]->id);
    out.fits.push_back(f);
    p.retained_studies += kept[i]->size();
    if (!f.converged) ++p.reml_not_converged;
    out.delta_estimates.push_back(f.delta_hat);
    if (f.tau_hat >= tau_floor) {
      out.tau_estimates.push_back(f.tau_hat);
    } else {
      ++p.tau_below_floor;
    }
  }
  p.retained_comparisons = kept.size();
  return out;
}

CandidatePriorSet fit_candidates(const TrainingSet& training, const FitOptions& options) {
  if (training.delta_estimates.empty()) throw EmptyTrainingError("fit_candidates: no delta estimates");
  CandidatePriorSet out;
  out.provenance = training.provenance;
  out.delta_priors = {PriorSpec::cauchy(0.0, 1.0 / std::numbers::sqrt2),
                      fit_mle(Family::Normal, training.delta_estimates, options),
                      fit_mle(Family::StudentT, training.delta_estimates, options)};
  out.tau_priors = {PriorSpec::uniform(0.0, 1.0), fit_mle(Family::HalfNormal, training.tau_estimates, options),
                    fit_mle(Family::InverseGamma, training.tau_estimates, options),
                    fit_mle(Family::Gamma, training.tau_estimates, options)};
  return out;
}

CandidatePriorSet reference_candidates() {
  CandidatePriorSet out;
  out.delta_priors = {PriorSpec::cauchy(0.0, 1.0 / std::numbers::sqrt2), PriorSpec::normal(0.0, 0.56),
                      PriorSpec::student_t(0.0, 0.33, 3.0)};
  out.tau_priors = {PriorSpec::uniform(0.0, 1.0), PriorSpec::half_normal(0.57), PriorSpec::inverse_gamma(1.26, 0.24),
                    PriorSpec::gamma(1.59, 0.26)};
  return out;
}

}  // namespace bma
