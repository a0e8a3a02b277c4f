#include "bma/pipeline.hpp"

#include "bma/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <tuple>

namespace bma {

namespace {

struct Outcome {
  std::vector<double> log_marginals;
  std::optional<std::string> error;
};

Outcome evaluate_one(const ModelEnsemble& ensemble, const Comparison& c, const MarginalOptions& options) {
  Outcome out;
  try {
    out.log_marginals.reserve(ensemble.size());
    for (const auto& m : ensemble.members) {
      const double lm = log_marginal(m.model, c, options);
      if (!std::isfinite(lm)) throw NumericDomainError("non-finite log marginal for " + m.model.name);
      out.log_marginals.push_back(lm);
    }
  } catch (const std::exception& e) {
    out.log_marginals.clear();
    out.error = e.what();
  }
  return out;
}

RankingTable tally(std::vector<std::string> labels, std::vector<double> priors,
                   const std::vector<std::vector<double>>& per_comparison) {
  const std::size_t m = labels.size();
  RankingTable table;
  table.evaluated = per_comparison.size();
  table.rows.resize(m);
  for (std::size_t j = 0; j < m; ++j) {
    table.rows[j] = {std::move(labels[j]), std::vector<std::size_t>(m, 0), priors[j], 0.0};
  }
  std::vector<double> sums(m, 0.0);
  for (const auto& probs : per_comparison) {
    const auto ranks = stable_ranks(probs);
    for (std::size_t j = 0; j < m; ++j) {
      ++table.rows[j].rank_counts[ranks[j] - 1];
      sums[j] += probs[j];
    }
  }
  if (table.evaluated > 0) {
    for (std::size_t j = 0; j < m; ++j) table.rows[j].average_posterior = sums[j] / static_cast<double>(table.evaluated);
  }
  return table;
}

}  // namespace

std::vector<std::size_t> stable_ranks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
  std::vector<std::size_t> ranks(values.size());
  for (std::size_t r = 0; r < order.size(); ++r) ranks[order[r]] = r + 1;
  return ranks;
}

CorpusEvaluation evaluate_corpus(std::span<const Comparison> corpus, const CandidatePriorSet& candidates,
                                 const PipelineOptions& options) {
  if (options.min_studies < 1) throw ParameterDomainError("min_studies must be at least 1");
  CorpusEvaluation ev;
  ev.ensemble = build_standard_ensemble(candidates.delta_priors, candidates.tau_priors, EnsembleScheme::FourType);
  ev.delta_count = candidates.delta_priors.size();
  ev.tau_count = candidates.tau_priors.size();

  std::vector<const Comparison*> eligible;
  for (const auto& c : corpus) {
    if (c.size() < options.min_studies) {
      ++ev.skipped_too_few_studies;
    } else if (!c.estimable()) {
      ++ev.skipped_non_estimable;
    } else {
      eligible.push_back(&c);
    }
  }

  std::vector<Outcome> outcomes(eligible.size());
  for_each_index(eligible.size(), options.execution,
                 [&](std::size_t i) { outcomes[i] = evaluate_one(ev.ensemble, *eligible[i], options.marginal); });

  std::vector<std::size_t> ok;
  for (std::size_t i = 0; i < eligible.size(); ++i) {
    if (outcomes[i].error) {
      ev.failures.push_back({eligible[i]->id, *outcomes[i].error});
    } else {
      ok.push_back(i);
    }
  }
  if (static_cast<double>(ev.failures.size()) >
      options.max_failure_fraction * static_cast<double>(eligible.size())) {
    throw CorpusFailureError(std::to_string(ev.failures.size()) + " of " + std::to_string(eligible.size()) +
                             " comparisons failed; first: " + ev.failures.front().id + ": " +
                             ev.failures.front().message);
  }

  std::sort(ok.begin(), ok.end(), [&](std::size_t a, std::size_t b) {
    if (eligible[a]->id != eligible[b]->id) return eligible[a]->id < eligible[b]->id;
    return outcomes[a].log_marginals < outcomes[b].log_marginals;
  });
  std::sort(ev.failures.begin(), ev.failures.end(),
            [](const auto& a, const auto& b) { return std::tie(a.id, a.message) < std::tie(b.id, b.message); });
  for (std::size_t i : ok) {
    ev.ids.push_back(eligible[i]->id);
    ev.log_marginals.push_back(std::move(outcomes[i].log_marginals));
  }
  return ev;
}

std::vector<double> configuration_posteriors(const CorpusEvaluation& ev, std::size_t comparison,
                                             Restriction restriction) {
  const auto& lm = ev.log_marginals.at(comparison);
  if (restriction == Restriction::AllTypes) return combine_marginals(ev.ensemble, lm).posterior_probs;

  std::vector<double> sub;
  for (std::size_t d = 0; d < ev.delta_count; ++d) {
    for (std::size_t t = 0; t < ev.tau_count; ++t) sub.push_back(lm[ev.random_alternative_index(d, t)]);
  }
  const double norm = log_sum_exp(sub);
  for (double& v : sub) v = std::exp(v - norm);
  return sub;
}

RankingTable rank_configurations(const CorpusEvaluation& ev, Restriction restriction) {
  std::vector<std::string> labels;
  std::vector<double> priors;
  if (restriction == Restriction::AllTypes) {
    for (const auto& m : ev.ensemble.members) {
      labels.push_back(m.model.name);
      priors.push_back(m.prior_prob);
    }
  } else {
    const double flat = 1.0 / static_cast<double>(ev.delta_count * ev.tau_count);
    for (std::size_t d = 0; d < ev.delta_count; ++d) {
      for (std::size_t t = 0; t < ev.tau_count; ++t) {
        labels.push_back(ev.ensemble.members[ev.random_alternative_index(d, t)].model.name);
        priors.push_back(flat);
      }
    }
  }
  std::vector<std::vector<double>> probs;
  probs.reserve(ev.evaluated());
  for (std::size_t i = 0; i < ev.evaluated(); ++i) probs.push_back(configuration_posteriors(ev, i, restriction));
  return tally(std::move(labels), std::move(priors), probs);
}

RankingTable average_model_types(const CorpusEvaluation& ev) {
  constexpr ModelType types[] = {ModelType::FixedNull, ModelType::FixedAlternative, ModelType::RandomNull,
                                 ModelType::RandomAlternative};
  std::vector<std::size_t> type_of;
  std::vector<double> priors(4, 0.0);
  for (const auto& m : ev.ensemble.members) {
    const auto t = static_cast<std::size_t>(model_type(m.model));
    type_of.push_back(t);
    priors[t] += m.prior_prob;
  }
  std::vector<std::string> labels;
  for (ModelType t : types) labels.emplace_back(model_type_name(t));

  std::vector<std::vector<double>> probs;
  for (std::size_t i = 0; i < ev.evaluated(); ++i) {
    const auto post = configuration_posteriors(ev, i, Restriction::AllTypes);
    std::vector<double> by_type(4, 0.0);
    for (std::size_t j = 0; j < post.size(); ++j) by_type[type_of[j]] += post[j];
    probs.push_back(std::move(by_type));
  }
  return tally(std::move(labels), std::move(priors), probs);
}

ParameterPriorTables average_parameter_priors(const CorpusEvaluation& ev) {
  const std::size_t nd = ev.delta_count, nt = ev.tau_count;
  std::vector<std::string> d_labels, t_labels;
  for (std::size_t d = 0; d < nd; ++d) d_labels.push_back(to_string(ev.ensemble.members[ev.random_alternative_index(d, 0)].model.delta_prior));
  for (std::size_t t = 0; t < nt; ++t) t_labels.push_back(to_string(ev.ensemble.members[ev.random_alternative_index(0, t)].model.tau_prior));

  std::vector<std::vector<double>> d_probs, t_probs;
  for (std::size_t i = 0; i < ev.evaluated(); ++i) {
    const auto post = configuration_posteriors(ev, i, Restriction::RandomAlternativeOnly);
    std::vector<double> dp(nd, 0.0), tp(nt, 0.0);
    for (std::size_t d = 0; d < nd; ++d) {
      for (std::size_t t = 0; t < nt; ++t) {
        dp[d] += post[d * nt + t];
        tp[t] += post[d * nt + t];
      }
    }
    d_probs.push_back(std::move(dp));
    t_probs.push_back(std::move(tp));
  }
  return {tally(std::move(d_labels), std::vector<double>(nd, 1.0 / static_cast<double>(nd)), d_probs),
          tally(std::move(t_labels), std::vector<double>(nt, 1.0 / static_cast<double>(nt)), t_probs)};
}

InclusionSummary corpus_inclusion_summary(const CorpusEvaluation& ev) {
  InclusionSummary s;
  s.evaluated = ev.evaluated();
  s.ids = ev.ids;
  for (const auto& lm : ev.log_marginals) {
    const BmaResult r = combine_marginals(ev.ensemble, lm);
    const double le = r.incl_bf_effect->log_value;
    const double lh = r.incl_bf_heterogeneity->log_value;
    s.log_bf_effect.push_back(le);
    s.log_bf_heterogeneity.push_back(lh);
    ++(le > 0.0 ? s.effect_for : s.effect_against);
    ++(lh > 0.0 ? s.heterogeneity_for : s.heterogeneity_against);
  }
  return s;
}

}  // namespace bma
