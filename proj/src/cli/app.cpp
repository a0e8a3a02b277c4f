#include "bma/cli/app.hpp"

#include "bma/catalog.hpp"
#include "bma/cli/io.hpp"
#include "bma/cli/report.hpp"
#include "bma/csv.hpp"

#include "CLI11.hpp"

#include <ostream>

namespace bma::cli {

namespace {

struct Common {
  std::string out_path;
  std::string map_text;
  int threads = 0;
  double tol = 0.0;
};

void add_common(CLI::App* cmd, Common& c, bool with_tol) {
  cmd->add_option("--out", c.out_path, "Write JSON here instead of stdout");
  cmd->add_option("--map", c.map_text, "Column remapping, e.g. effect=d,se=se_d");
  cmd->add_option("--threads", c.threads, "Worker threads (default: available parallelism)")->check(CLI::NonNegativeNumber);
  if (with_tol) cmd->add_option("--tol", c.tol, "Relative tolerance of the outer quadrature")->check(CLI::PositiveNumber);
}

MarginalOptions marginal_options(const Common& c) {
  MarginalOptions m;
  if (c.tol > 0.0) {
    m.outer.rel_tol = c.tol;
    m.inner.rel_tol = c.tol / 10.0;
  }
  return m;
}

void emit(const Common& c, const Json& j, std::ostream& out) {
  if (c.out_path.empty()) {
    out << dump(j);
  } else {
    write_file(c.out_path, dump(j));
  }
}

TypeWeights parse_model_priors(const std::string& text) {
  const auto rows = parse_csv(text);
  if (rows.size() != 1 || rows[0].fields.size() != 4) {
    throw InputError("--model-priors needs four comma-separated values p0f,p1f,p0r,p1r");
  }
  double p[4];
  double total = 0.0;
  for (int i = 0; i < 4; ++i) {
    p[i] = parse_real(rows[0].fields[i], 0, "model-priors");
    if (!(p[i] > 0.0)) throw InputError("--model-priors values must be positive");
    total += p[i];
  }
  if (std::abs(total - 1.0) > 1e-6) throw InputError("--model-priors values must sum to 1");
  return {p[0] / total, p[1] / total, p[2] / total, p[3] / total};
}

Json catalog_entry_json(const SubfieldEntry& e) {
  return {{"topic", e.topic},
          {"comparisons", e.comparisons},
          {"studies", e.studies},
          {"delta_prior", to_string(e.delta_prior)},
          {"tau_prior", to_string(e.tau_prior)}};
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bayesian model-averaged meta-analysis of standardized mean differences", "bma"};
  app.require_subcommand(1);

  // analyze
  Common an;
  std::string an_input, delta_text, tau_text, subfield, scheme = "four-type", model_priors, forest_path;
  bool sequential = false, null_spikes = false;
  auto* analyze_cmd = app.add_subcommand("analyze", "Four-model Bayesian meta-analysis of one comparison");
  analyze_cmd->add_option("input", an_input, "CSV with effect,se[,label] or n1,m1,sd1,n2,m2,sd2[,label]")->required();
  analyze_cmd->add_option("--delta-prior", delta_text, "Prior on the effect, e.g. t(0,0.51,5)");
  analyze_cmd->add_option("--tau-prior", tau_text, "Prior on heterogeneity, e.g. invgamma(1.79,0.28)");
  analyze_cmd->add_option("--subfield", subfield, "Take priors from the subfield catalog");
  analyze_cmd->add_option("--scheme", scheme, "Model prior scheme")->check(CLI::IsMember({"four-type", "flat"}));
  analyze_cmd->add_option("--model-priors", model_priors, "Prior probabilities p0f,p1f,p0r,p1r");
  analyze_cmd->add_flag("--sequential", sequential, "Report results after each study in input order");
  analyze_cmd->add_flag("--null-spikes", null_spikes, "Include the delta = 0 mass of null models in the averaged delta");
  analyze_cmd->add_option("--forest", forest_path, "Write an SVG forest plot");
  add_common(analyze_cmd, an, true);

  // fit-priors
  Common fp;
  std::string fp_input;
  std::size_t fp_min_studies = 10;
  double tau_floor = 0.01;
  auto* fit_cmd = app.add_subcommand("fit-priors", "Fit candidate priors to a training corpus");
  fit_cmd->add_option("corpus", fp_input, "CSV with comparison_id and effect,se or raw columns")->required();
  fit_cmd->add_option("--min-studies", fp_min_studies, "Drop comparisons with fewer studies");
  fit_cmd->add_option("--tau-floor", tau_floor, "Exclude tau estimates below this from the tau fits");
  add_common(fit_cmd, fp, false);

  // rank
  Common rk;
  std::string rk_input, candidates_path, mode = "configs", restriction = "h1r";
  std::size_t rk_min_studies = 3;
  double max_fail = 0.01;
  auto* rank_cmd = app.add_subcommand("rank", "Rank prior configurations over a test corpus");
  rank_cmd->add_option("corpus", rk_input, "CSV with comparison_id and effect,se or raw columns")->required();
  rank_cmd->add_option("--candidates", candidates_path, "Candidate priors JSON from fit-priors (default: published set)");
  rank_cmd->add_option("--mode", mode, "Analysis")->check(CLI::IsMember({"configs", "model-types", "parameter-priors", "inclusion"}));
  rank_cmd->add_option("--restriction", restriction, "Ensemble for --mode configs")->check(CLI::IsMember({"h1r", "four-type"}));
  rank_cmd->add_option("--min-studies", rk_min_studies, "Skip comparisons with fewer studies");
  rank_cmd->add_option("--max-failure-fraction", max_fail, "Abort when more comparisons fail")->check(CLI::Range(0.0, 1.0));
  add_common(rank_cmd, rk, true);

  // catalog
  std::string topic;
  auto* catalog_cmd = app.add_subcommand("catalog", "Subfield prior catalog");
  catalog_cmd->require_subcommand(1);
  auto* list_cmd = catalog_cmd->add_subcommand("list", "All entries as JSON");
  auto* show_cmd = catalog_cmd->add_subcommand("show", "One topic; unknown topics give the pooled estimate");
  show_cmd->add_option("topic", topic)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kInputError;
  }

  try {
    if (*analyze_cmd) {
      set_thread_count(an.threads);
      AnalyzeConfig cfg;
      cfg.marginal = marginal_options(an);
      const auto& catalog = SubfieldCatalog::builtin();
      const CatalogMatch match = catalog.lookup(subfield.empty() ? std::string(SubfieldCatalog::kPooledTopic) : subfield);
      if (!subfield.empty()) {
        cfg.subfield = subfield;
        cfg.subfield_matched = match.matched;
        if (!match.matched) err << "warning: subfield '" << subfield << "' not in catalog; using the pooled estimate\n";
      }
      cfg.delta_prior = delta_text.empty() ? match.entry.delta_prior : parse_prior(delta_text);
      cfg.tau_prior = tau_text.empty() ? match.entry.tau_prior : parse_prior(tau_text);
      if (cfg.delta_prior.is_point_mass() || cfg.tau_prior.is_point_mass()) {
        throw InputError("--delta-prior and --tau-prior must be continuous; null models are added automatically");
      }
      cfg.scheme = scheme == "flat" ? EnsembleScheme::Flat : EnsembleScheme::FourType;
      if (!model_priors.empty()) {
        if (cfg.scheme == EnsembleScheme::Flat) throw InputError("--model-priors cannot be combined with --scheme flat");
        cfg.model_priors = parse_model_priors(model_priors);
      }
      cfg.sequential = sequential;
      cfg.null_spikes = null_spikes;

      const Comparison c = read_studies(read_file(an_input), parse_column_map(an.map_text));
      const AnalyzeReport rep = analyze(c, cfg);
      if (!forest_path.empty()) write_file(forest_path, render_forest_svg(rep.forest));
      emit(an, rep.json, out);
    } else if (*fit_cmd) {
      set_thread_count(fp.threads);
      if (fp_min_studies < 2) throw InputError("--min-studies must be at least 2");
      const auto corpus = read_corpus(read_file(fp_input), parse_column_map(fp.map_text));
      const TrainingSet training = prepare_training(corpus, fp_min_studies, tau_floor);
      emit(fp, to_json(fit_candidates(training)), out);
    } else if (*rank_cmd) {
      set_thread_count(rk.threads);
      const auto corpus = read_corpus(read_file(rk_input), parse_column_map(rk.map_text));
      CandidatePriorSet candidates = reference_candidates();
      if (!candidates_path.empty()) {
        Json parsed;
        try {
          parsed = Json::parse(read_file(candidates_path));
        } catch (const Json::parse_error& e) {
          throw ParseError(std::string("candidates: ") + e.what());
        }
        candidates = candidates_from_json(parsed);
      }
      PipelineOptions opts;
      opts.marginal = marginal_options(rk);
      opts.min_studies = rk_min_studies;
      opts.max_failure_fraction = max_fail;
      const CorpusEvaluation ev = evaluate_corpus(corpus, candidates, opts);
      for (const auto& f : ev.failures) err << "warning: comparison '" << f.id << "' failed: " << f.message << "\n";

      Json j;
      j["mode"] = mode;
      j["candidates"] = {{"delta_priors", Json::array()}, {"tau_priors", Json::array()}};
      for (const auto& p : candidates.delta_priors) j["candidates"]["delta_priors"].push_back(to_string(p));
      for (const auto& p : candidates.tau_priors) j["candidates"]["tau_priors"].push_back(to_string(p));
      j["corpus"] = evaluation_json(ev);
      if (mode == "configs") {
        j["restriction"] = restriction;
        j["table"] = to_json(rank_configurations(ev, restriction == "h1r" ? Restriction::RandomAlternativeOnly
                                                                          : Restriction::AllTypes));
      } else if (mode == "model-types") {
        j["table"] = to_json(average_model_types(ev));
      } else if (mode == "parameter-priors") {
        const auto t = average_parameter_priors(ev);
        j["delta"] = to_json(t.delta);
        j["tau"] = to_json(t.tau);
      } else {
        j["inclusion"] = to_json(corpus_inclusion_summary(ev));
      }
      emit(rk, j, out);
    } else if (*catalog_cmd) {
      const auto& catalog = SubfieldCatalog::builtin();
      if (*list_cmd) {
        Json j;
        j["schema_version"] = catalog.schema_version();
        j["topics"] = Json::array();
        for (const auto& e : catalog.topics()) j["topics"].push_back(catalog_entry_json(e));
        j["pooled"] = catalog_entry_json(catalog.pooled());
        out << dump(j);
      } else if (*show_cmd) {
        const CatalogMatch m = catalog.lookup(topic);
        if (!m.matched) err << "warning: topic '" << topic << "' not in catalog; showing the pooled estimate\n";
        Json j = catalog_entry_json(m.entry);
        j["matched"] = m.matched;
        out << dump(j);
      }
    }
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const ParameterDomainError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kComputationError;
  }
  return kSuccess;
}

}  // namespace bma::cli
