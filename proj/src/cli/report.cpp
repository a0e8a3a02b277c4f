#include "bma/cli/report.hpp"

#include "bma/cli/io.hpp"

#include <cmath>
#include <numeric>

namespace bma::cli {

namespace {

Json number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json inclusion_json(const std::optional<InclusionBayesFactor>& bf, double posterior) {
  Json j;
  if (bf) {
    j["bf"] = number(bf->value);
    j["log_bf"] = number(bf->log_value);
    j["infinite"] = bf->infinite;
  } else {
    j["bf"] = nullptr;
  }
  j["posterior_prob"] = posterior;
  return j;
}

Json matrix_json(const std::vector<std::vector<double>>& m) {
  Json j = Json::array();
  for (const auto& row : m) {
    Json r = Json::array();
    for (double v : row) r.push_back(number(v));
    j.push_back(std::move(r));
  }
  return j;
}

std::optional<std::size_t> index_of(const ModelEnsemble& e, ModelType type) {
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (model_type(e.members[i].model) == type) return i;
  }
  return std::nullopt;
}

}  // namespace

Json summary_json(const PosteriorSummary& s) {
  Json j;
  j["mean"] = s.mean;
  j["median"] = s.median;
  j["sd"] = s.sd;
  j["ci_lower"] = s.ci_lower;
  j["ci_upper"] = s.ci_upper;
  if (s.atom) j["point_mass"] = {{"location", s.atom->location}, {"probability", s.atom->probability}};
  return j;
}

AnalyzeReport analyze(const Comparison& comparison, const AnalyzeConfig& config) {
  AnalyzeReport rep;
  const PriorSpec dp[] = {config.delta_prior};
  const PriorSpec tp[] = {config.tau_prior};
  rep.ensemble = build_standard_ensemble(dp, tp, config.scheme, Restriction::AllTypes, config.model_priors);
  validate(rep.ensemble);

  EvaluateOptions opts;
  opts.marginal = config.marginal;
  opts.include_null_spikes = config.null_spikes;
  rep.result = evaluate(rep.ensemble, comparison, opts);

  Json& j = rep.json;
  j["studies"] = Json::array();
  for (const auto& s : comparison.studies) j["studies"].push_back({{"label", s.label}, {"effect", s.effect}, {"se", s.se}});
  j["priors"] = {{"delta", to_string(config.delta_prior)}, {"tau", to_string(config.tau_prior)}};
  if (config.subfield) {
    j["priors"]["subfield"] = *config.subfield;
    j["priors"]["subfield_matched"] = config.subfield_matched;
  }
  j["scheme"] = config.scheme == EnsembleScheme::FourType ? "four-type" : "flat";

  j["models"] = Json::array();
  for (std::size_t i = 0; i < rep.ensemble.size(); ++i) {
    const auto& m = rep.ensemble.members[i];
    j["models"].push_back({{"name", m.model.name},
                           {"prior_prob", m.prior_prob},
                           {"log_marginal", number(rep.result.log_marginals[i])},
                           {"posterior_prob", rep.result.posterior_probs[i]}});
  }
  j["bf_matrix"] = matrix_json(rep.result.bf_matrix);
  j["log_bf_matrix"] = matrix_json(rep.result.log_bf_matrix);
  j["inclusion"] = {{"effect", inclusion_json(rep.result.incl_bf_effect, rep.result.incl_posterior_effect)},
                    {"heterogeneity",
                     inclusion_json(rep.result.incl_bf_heterogeneity, rep.result.incl_posterior_heterogeneity)}};

  Json conditional = Json::object();
  for (std::size_t i = 0; i < rep.ensemble.size(); ++i) {
    Json c = Json::object();
    if (rep.result.delta_summaries[i]) c["delta"] = summary_json(*rep.result.delta_summaries[i]);
    if (rep.result.tau_summaries[i]) c["tau"] = summary_json(*rep.result.tau_summaries[i]);
    if (!c.empty()) conditional[rep.ensemble.members[i].model.name] = std::move(c);
  }
  j["conditional"] = std::move(conditional);
  j["averaged"] = Json::object();
  if (rep.result.averaged_delta) j["averaged"]["delta"] = summary_json(*rep.result.averaged_delta);
  if (rep.result.averaged_tau) j["averaged"]["tau"] = summary_json(*rep.result.averaged_tau);

  if (config.sequential) {
    std::vector<std::size_t> order(comparison.size());
    std::iota(order.begin(), order.end(), 0);
    EvaluateOptions seq_opts = opts;
    seq_opts.summaries = false;
    rep.sequence = sequential_update(rep.ensemble, comparison, order, seq_opts);
    j["sequential"] = Json::array();
    for (std::size_t t = 0; t < rep.sequence.size(); ++t) {
      const auto& r = rep.sequence[t];
      j["sequential"].push_back({{"studies", t + 1},
                                 {"added", comparison.studies[t].label},
                                 {"posterior_probs", r.posterior_probs},
                                 {"inclusion_effect", inclusion_json(r.incl_bf_effect, r.incl_posterior_effect)},
                                 {"inclusion_heterogeneity",
                                  inclusion_json(r.incl_bf_heterogeneity, r.incl_posterior_heterogeneity)}});
    }
  }

  std::optional<PosteriorSummary> fixed_post, random_post;
  if (auto i = index_of(rep.ensemble, ModelType::FixedAlternative)) fixed_post = rep.result.delta_summaries[*i];
  if (auto i = index_of(rep.ensemble, ModelType::RandomAlternative)) random_post = rep.result.delta_summaries[*i];
  rep.forest = forest_rows(comparison, fixed_post, random_post, rep.result.averaged_delta);
  return rep;
}

Json to_json(const CandidatePriorSet& c) {
  Json j;
  j["delta_priors"] = Json::array();
  for (const auto& p : c.delta_priors) j["delta_priors"].push_back(to_string(p));
  j["tau_priors"] = Json::array();
  for (const auto& p : c.tau_priors) j["tau_priors"].push_back(to_string(p));
  const auto& pv = c.provenance;
  j["provenance"] = {{"min_studies", pv.min_studies},
                     {"tau_floor", pv.tau_floor},
                     {"input_comparisons", pv.input_comparisons},
                     {"input_studies", pv.input_studies},
                     {"dropped_too_few_studies", pv.dropped_too_few_studies},
                     {"dropped_non_estimable", pv.dropped_non_estimable},
                     {"non_estimable_studies", pv.non_estimable_studies},
                     {"retained_comparisons", pv.retained_comparisons},
                     {"retained_studies", pv.retained_studies},
                     {"tau_below_floor", pv.tau_below_floor},
                     {"reml_not_converged", pv.reml_not_converged}};
  return j;
}

CandidatePriorSet candidates_from_json(const Json& j) {
  CandidatePriorSet c;
  auto read = [&](const char* key, std::vector<PriorSpec>& out) {
    if (!j.is_object() || !j.contains(key) || !j[key].is_array() || j[key].empty()) {
      throw InputError(std::string("candidate file needs a non-empty '") + key + "' array");
    }
    for (const auto& item : j[key]) {
      if (!item.is_string()) throw InputError(std::string("'") + key + "' entries must be prior strings");
      out.push_back(parse_prior(item.get<std::string>()));
    }
  };
  read("delta_priors", c.delta_priors);
  read("tau_priors", c.tau_priors);
  return c;
}

Json to_json(const RankingTable& t) {
  Json j;
  j["evaluated"] = t.evaluated;
  j["rows"] = Json::array();
  for (const auto& r : t.rows) {
    j["rows"].push_back({{"label", r.label},
                         {"rank_counts", r.rank_counts},
                         {"prior_prob", r.prior_prob},
                         {"average_posterior", r.average_posterior}});
  }
  return j;
}

Json to_json(const InclusionSummary& s) {
  Json j;
  j["evaluated"] = s.evaluated;
  j["effect"] = {{"evidence_for", s.effect_for}, {"evidence_against", s.effect_against}};
  j["heterogeneity"] = {{"evidence_for", s.heterogeneity_for}, {"evidence_against", s.heterogeneity_against}};
  j["comparisons"] = Json::array();
  for (std::size_t i = 0; i < s.ids.size(); ++i) {
    j["comparisons"].push_back({{"id", s.ids[i]},
                                {"log_bf_effect", number(s.log_bf_effect[i])},
                                {"log_bf_heterogeneity", number(s.log_bf_heterogeneity[i])}});
  }
  return j;
}

Json evaluation_json(const CorpusEvaluation& ev) {
  Json j;
  j["evaluated"] = ev.evaluated();
  j["skipped_too_few_studies"] = ev.skipped_too_few_studies;
  j["skipped_non_estimable"] = ev.skipped_non_estimable;
  j["failures"] = Json::array();
  for (const auto& f : ev.failures) j["failures"].push_back({{"id", f.id}, {"message", f.message}});
  return j;
}

std::string dump(const Json& json) { return json.dump(2) + "\n"; }

}  // namespace bma::cli
