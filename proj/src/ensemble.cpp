#include "bma/ensemble.hpp"

#include "bma/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace bma {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::optional<InclusionBayesFactor> log_space_inclusion(std::span<const double> log_weighted,
                                                        std::span<const double> priors,
                                                        const std::vector<bool>& in_set) {
  std::vector<double> in_lw, out_lw;
  double prior_in = 0.0, prior_out = 0.0;
  for (std::size_t i = 0; i < priors.size(); ++i) {
    if (in_set[i]) {
      in_lw.push_back(log_weighted[i]);
      prior_in += priors[i];
    } else {
      out_lw.push_back(log_weighted[i]);
      prior_out += priors[i];
    }
  }
  if (in_lw.empty() || out_lw.empty()) return std::nullopt;
  const double log_out = log_sum_exp(out_lw);
  if (log_out == -kInf) return InclusionBayesFactor{kInf, kInf, true};
  const double log_bf = log_sum_exp(in_lw) - log_out - (std::log(prior_in) - std::log(prior_out));
  return InclusionBayesFactor{std::exp(log_bf), log_bf, false};
}

std::string member_name(ModelType type, const PriorSpec* delta, const PriorSpec* tau, bool bare) {
  std::string name(model_type_name(type));
  if (bare) return name;
  name += ':';
  if (delta) name += " delta~" + to_string(*delta);
  if (tau) name += " tau~" + to_string(*tau);
  if (!delta && !tau) name += " delta=0 tau=0";
  return name;
}

}  // namespace

std::vector<double> ModelEnsemble::prior_probs() const {
  std::vector<double> out;
  out.reserve(members.size());
  for (const auto& m : members) out.push_back(m.prior_prob);
  return out;
}

void validate(const ModelEnsemble& ensemble) {
  if (ensemble.members.size() < 2) throw ParameterDomainError("ensemble needs at least two members");
  double total = 0.0;
  for (const auto& m : ensemble.members) {
    if (!(m.prior_prob > 0.0)) throw ParameterDomainError("ensemble prior probabilities must be positive");
    validate(m.model);
    total += m.prior_prob;
  }
  if (std::abs(total - 1.0) > 1e-12) throw ParameterDomainError("ensemble prior probabilities must sum to one");
}

ModelEnsemble build_standard_ensemble(std::span<const PriorSpec> delta_priors, std::span<const PriorSpec> tau_priors,
                                      EnsembleScheme scheme, Restriction restriction, const TypeWeights& tw) {
  if (delta_priors.empty() || tau_priors.empty()) throw ParameterDomainError("prior lists must be non-empty");
  for (const auto& p : tau_priors) {
    if (p.support().lower < 0.0) throw ParameterDomainError("tau priors must have non-negative support");
  }
  const PriorSpec zero = PriorSpec::point_mass(0.0);
  const bool bare = delta_priors.size() == 1 && tau_priors.size() == 1;
  const double nd = static_cast<double>(delta_priors.size());
  const double nt = static_cast<double>(tau_priors.size());
  const bool all = restriction == Restriction::AllTypes;
  const double configurations = all ? 1 + nd + nt + nd * nt : nd * nt;

  auto weight = [&](double type_weight, double within) {
    return scheme == EnsembleScheme::Flat ? 1.0 / configurations : type_weight / within;
  };

  ModelEnsemble e;
  if (all) {
    e.members.push_back({{zero, zero, member_name(ModelType::FixedNull, nullptr, nullptr, bare)},
                         weight(tw.fixed_null, 1.0)});
    for (const auto& d : delta_priors) {
      e.members.push_back({{d, zero, member_name(ModelType::FixedAlternative, &d, nullptr, bare)},
                           weight(tw.fixed_alternative, nd)});
    }
    for (const auto& t : tau_priors) {
      e.members.push_back({{zero, t, member_name(ModelType::RandomNull, nullptr, &t, bare)},
                           weight(tw.random_null, nt)});
    }
  }
  for (const auto& d : delta_priors) {
    for (const auto& t : tau_priors) {
      e.members.push_back({{d, t, member_name(ModelType::RandomAlternative, &d, &t, bare)},
                           all ? weight(tw.random_alternative, nd * nt) : 1.0 / configurations});
    }
  }
  if (scheme == EnsembleScheme::FourType && all) {
    const double type_total = tw.fixed_null + tw.fixed_alternative + tw.random_null + tw.random_alternative;
    if (std::abs(type_total - 1.0) > 1e-12) throw ParameterDomainError("model type weights must sum to one");
  }
  return e;
}

InclusionBayesFactor inclusion_bf(const ModelEnsemble& ensemble, std::span<const double> posterior_probs,
                                  const std::vector<bool>& in_set) {
  if (posterior_probs.size() != ensemble.size() || in_set.size() != ensemble.size()) {
    throw ParameterDomainError("inclusion_bf: sizes do not match the ensemble");
  }
  double post_in = 0.0, post_out = 0.0, prior_in = 0.0, prior_out = 0.0;
  std::size_t n_in = 0;
  for (std::size_t i = 0; i < ensemble.size(); ++i) {
    if (in_set[i]) {
      post_in += posterior_probs[i];
      prior_in += ensemble.members[i].prior_prob;
      ++n_in;
    } else {
      post_out += posterior_probs[i];
      prior_out += ensemble.members[i].prior_prob;
    }
  }
  if (n_in == 0 || n_in == ensemble.size()) throw ParameterDomainError("inclusion_bf: partition side is empty");
  if (!(post_out > 0.0)) return {kInf, kInf, true};
  const double value = (post_in / post_out) / (prior_in / prior_out);
  return {value, std::log(value), false};
}

BmaResult combine_marginals(const ModelEnsemble& ensemble, std::span<const double> log_marginals) {
  const std::size_t n = ensemble.size();
  if (log_marginals.size() != n) throw ParameterDomainError("combine_marginals: one marginal per member required");

  BmaResult r;
  r.log_marginals.assign(log_marginals.begin(), log_marginals.end());
  const auto priors = ensemble.prior_probs();
  std::vector<double> log_weighted(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (std::isnan(log_marginals[i]) || log_marginals[i] == kInf) {
      throw NumericDomainError("log marginal of '" + ensemble.members[i].model.name + "' is not finite");
    }
    log_weighted[i] = std::log(priors[i]) + log_marginals[i];
  }
  const double log_norm = log_sum_exp(log_weighted);
  if (log_norm == -kInf) throw DegenerateEvidenceError("every model has zero marginal likelihood");

  r.posterior_probs.resize(n);
  for (std::size_t i = 0; i < n; ++i) r.posterior_probs[i] = std::exp(log_weighted[i] - log_norm);

  r.bf_matrix.assign(n, std::vector<double>(n));
  r.log_bf_matrix.assign(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double lb = i == j ? 0.0 : log_marginals[i] - log_marginals[j];
      r.log_bf_matrix[i][j] = lb;
      r.bf_matrix[i][j] = std::exp(lb);
    }
  }

  std::vector<bool> effect(n), heterogeneity(n);
  for (std::size_t i = 0; i < n; ++i) {
    effect[i] = delta_free(ensemble.members[i].model);
    heterogeneity[i] = tau_free(ensemble.members[i].model);
    if (effect[i]) r.incl_posterior_effect += r.posterior_probs[i];
    if (heterogeneity[i]) r.incl_posterior_heterogeneity += r.posterior_probs[i];
  }
  r.incl_bf_effect = log_space_inclusion(log_weighted, priors, effect);
  r.incl_bf_heterogeneity = log_space_inclusion(log_weighted, priors, heterogeneity);
  return r;
}

BmaResult evaluate(const ModelEnsemble& ensemble, const Comparison& comparison, const EvaluateOptions& options) {
  validate(ensemble);
  validate(comparison);
  std::vector<double> lm;
  lm.reserve(ensemble.size());
  for (const auto& m : ensemble.members) lm.push_back(log_marginal(m.model, comparison, options.marginal));
  BmaResult r = combine_marginals(ensemble, lm);
  if (!options.summaries) return r;

  const std::size_t n = ensemble.size();
  r.delta_summaries.resize(n);
  r.tau_summaries.resize(n);
  std::vector<const PosteriorSummary*> d_parts, t_parts;
  std::vector<double> d_w, t_w;
  double null_mass = 0.0;
  std::optional<double> null_location;
  for (std::size_t i = 0; i < n; ++i) {
    const ModelSpec& model = ensemble.members[i].model;
    if (delta_free(model)) {
      r.delta_summaries[i] = posterior_summary(model, comparison, Parameter::Delta, options.marginal);
    } else {
      null_mass += r.posterior_probs[i];
      const double loc = model.delta_prior.param(0);
      if (null_location && *null_location != loc) {
        throw UnsupportedOperationError("null models disagree on the fixed delta value");
      }
      null_location = loc;
    }
    if (tau_free(model)) r.tau_summaries[i] = posterior_summary(model, comparison, Parameter::Tau, options.marginal);
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (r.delta_summaries[i] && r.posterior_probs[i] > 0.0) {
      d_parts.push_back(&*r.delta_summaries[i]);
      d_w.push_back(r.posterior_probs[i]);
    }
    if (r.tau_summaries[i] && r.posterior_probs[i] > 0.0) {
      t_parts.push_back(&*r.tau_summaries[i]);
      t_w.push_back(r.posterior_probs[i]);
    }
  }
  if (!d_parts.empty()) {
    std::optional<PointMassComponent> atom;
    if (options.include_null_spikes && null_location) atom = PointMassComponent{*null_location, null_mass};
    r.averaged_delta = mixture_summary(d_parts, d_w, atom);
  }
  if (!t_parts.empty()) r.averaged_tau = mixture_summary(t_parts, t_w);
  return r;
}

std::vector<BmaResult> sequential_update(const ModelEnsemble& ensemble, const Comparison& comparison,
                                         std::span<const std::size_t> order, const EvaluateOptions& options) {
  std::vector<std::size_t> sorted(order.begin(), order.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::size_t> identity(comparison.size());
  std::iota(identity.begin(), identity.end(), 0);
  if (sorted != identity) throw ParameterDomainError("sequential_update: order must be a permutation of study indices");

  std::vector<BmaResult> out;
  out.reserve(order.size());
  for (std::size_t t = 1; t <= order.size(); ++t) {
    out.push_back(evaluate(ensemble, comparison.subset(order.first(t)), options));
  }
  return out;
}

}  // namespace bma
