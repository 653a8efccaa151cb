// tmcflow: topic-method composition workflow.
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "tmc/error.hpp"
#include "tmc/extract.hpp"
#include "tmc/pipeline.hpp"
#include "tmc/stages.hpp"
#include "tmc/text.hpp"

namespace fs = std::filesystem;
using namespace tmc;

namespace {

std::optional<fs::path> opt_path(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return fs::path(s);
}

network::EdgeWeighting parse_weighting(const std::string& s) {
  if (s == "unweighted") return network::EdgeWeighting::unweighted;
  if (s == "shared-intensity") return network::EdgeWeighting::shared_intensity;
  throw ConfigError("--weighted must be unweighted or shared-intensity");
}

std::vector<int> parse_k_list(const std::string& s) {
  std::vector<int> ks;
  for (const auto& part : text::split(s, ',')) {
    const auto t = text::trim(part);
    if (t.empty()) continue;
    try {
      std::size_t used = 0;
      ks.push_back(std::stoi(std::string(t), &used));
      if (used != t.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw ConfigError("bad --k-list entry '" + std::string(t) + "'");
    }
  }
  return ks;
}

struct TopicFlags {
  std::string corpus, out, report, quality, in;
  int k = 38;
  std::string k_list;
  std::uint64_t seed = pipeline::kDefaultSeed;
  std::optional<double> alpha;
  double beta = 0.01;
  int iterations = 1000;
  std::optional<int> burn_in;
  std::size_t min_token_len = topics::kDefaultMinTokenLength;
  unsigned threads = 0;
};

void add_model_flags(CLI::App* cmd, TopicFlags& f) {
  cmd->add_option("--corpus", f.corpus, "corpus.jsonl")->required();
  cmd->add_option("--seed", f.seed, "random seed");
  cmd->add_option("--alpha", f.alpha, "document-topic prior (default 50/K)");
  cmd->add_option("--beta", f.beta, "topic-word prior");
  cmd->add_option("--iterations", f.iterations, "Gibbs sweeps");
  cmd->add_option("--burn-in", f.burn_in, "burn-in sweeps (default 4/5 of iterations)");
  cmd->add_option("--min-token-len", f.min_token_len, "shortest token kept");
  cmd->add_option("--out", f.out, "topics.csv")->required();
  cmd->add_option("--report", f.report, "JSON report");
}

stages::TopicParams topic_params(const TopicFlags& f, stages::TopicMode mode) {
  stages::TopicParams p;
  p.mode = mode;
  p.corpus = f.corpus;
  p.model.K = f.k;
  p.model.seed = f.seed;
  p.model.alpha = f.alpha;
  p.model.beta = f.beta;
  p.model.iterations = f.iterations;
  p.model.burn_in = f.burn_in;
  p.min_token_len = f.min_token_len;
  p.out = f.out;
  p.report = opt_path(f.report);
  p.threads = f.threads;
  return p;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Topic-method composition workflow"};
  app.set_version_flag("--version", std::string("tmcflow ") + pipeline::kToolVersion);
  app.require_subcommand(1);

  // ingest
  auto* ingest_cmd = app.add_subcommand("ingest", "parse, year-filter and deduplicate bibliographic exports");
  std::vector<std::string> in_paths, in_formats;
  stages::IngestParams ingest_p;
  std::string ingest_out, ingest_report;
  ingest_cmd->add_option("--in", in_paths, "input export (repeatable)")->required();
  ingest_cmd->add_option("--format", in_formats, "jsonl|csv|wos_tab, one per --in or one for all");
  ingest_cmd->add_option("--year-min", ingest_p.year_min);
  ingest_cmd->add_option("--year-max", ingest_p.year_max);
  ingest_cmd->add_option("--title-sim", ingest_p.title_sim, "fuzzy title threshold");
  ingest_cmd->add_option("--out", ingest_out)->required();
  ingest_cmd->add_option("--report", ingest_report)->required();

  // extract
  auto* extract_cmd = app.add_subcommand("extract", "method entities per document");
  std::string ex_corpus, ex_lexicon, ex_candidates, ex_out, ex_report;
  bool ex_fallback = false;
  extract_cmd->add_option("--corpus", ex_corpus)->required();
  extract_cmd->add_option("--lexicon", ex_lexicon, "lexicon JSON or CSV")->required();
  extract_cmd->add_option("--candidates", ex_candidates, "LLM candidate mentions (JSONL)");
  extract_cmd->add_flag("--fallback-rule", ex_fallback, "rule extraction for docs without candidates");
  extract_cmd->add_option("--out", ex_out)->required();
  extract_cmd->add_option("--report", ex_report);

  auto* eval_cmd = app.add_subcommand("eval-extract", "precision, recall and F1 against a gold file");
  std::string ev_pred, ev_gold;
  eval_cmd->add_option("--pred", ev_pred)->required();
  eval_cmd->add_option("--gold", ev_gold)->required();

  // topics
  auto* topics_cmd = app.add_subcommand("topics", "topic assignment");
  topics_cmd->require_subcommand(1);
  TopicFlags fit_f, sweep_f, import_f;
  auto* fit_cmd = topics_cmd->add_subcommand("fit", "fit a Gibbs topic model with fixed K");
  add_model_flags(fit_cmd, fit_f);
  fit_cmd->add_option("--k", fit_f.k, "topic count");
  auto* sweep_cmd = topics_cmd->add_subcommand("sweep", "select K by perplexity and coherence");
  add_model_flags(sweep_cmd, sweep_f);
  sweep_cmd->add_option("--k-list", sweep_f.k_list, "comma-separated K values")->required();
  sweep_cmd->add_option("--quality", sweep_f.quality, "K,perplexity,coherence,selected table");
  sweep_cmd->add_option("--threads", sweep_f.threads, "parallel fits (0 = hardware)");
  auto* import_cmd = topics_cmd->add_subcommand("import", "import external topic assignments");
  import_cmd->add_option("--in", import_f.in, "doc_id,topic_id CSV or {doc_id, dist} JSONL")->required();
  import_cmd->add_option("--out", import_f.out)->required();
  import_cmd->add_option("--report", import_f.report);

  // tmc
  auto* tmc_cmd = app.add_subcommand("tmc", "topic-method intensity table");
  tmc_cmd->require_subcommand(1);
  auto* tmc_build = tmc_cmd->add_subcommand("build", "build the sigma-truncated TMC table");
  stages::TmcParams tmc_p;
  std::string tmc_methods, tmc_topics, tmc_out, tmc_graph, tmc_gexf, tmc_report;
  tmc_build->add_option("--methods", tmc_methods)->required();
  tmc_build->add_option("--topics", tmc_topics)->required();
  tmc_build->add_option("--sigma", tmc_p.sigma, "retention threshold");
  tmc_build->add_option("--out", tmc_out)->required();
  tmc_build->add_option("--graph", tmc_graph, "bipartite export (.graphml or .gexf)");
  tmc_build->add_option("--gexf", tmc_gexf, "second bipartite export");
  tmc_build->add_option("--report", tmc_report);

  // network
  auto* net_cmd = app.add_subcommand("network", "TMC shared-element network");
  net_cmd->require_subcommand(1);
  std::string net_tmc, net_weighted = "unweighted";
  double net_sigma = core::kDefaultSigma;
  net_cmd->add_option("--tmc", net_tmc, "tmc.csv")->required();
  net_cmd->add_option("--weighted", net_weighted, "unweighted|shared-intensity");
  net_cmd->add_option("--sigma", net_sigma, "sigma recorded in the summary");
  auto* net_build = net_cmd->add_subcommand("build", "export the network with community labels");
  std::string nb_out, nb_summary;
  net_build->add_option("--out", nb_out, ".graphml or .gexf")->required();
  net_build->add_option("--summary", nb_summary, "network.json");
  auto* net_comm = net_cmd->add_subcommand("communities", "greedy modularity communities");
  std::string nc_out, nc_history;
  net_comm->add_option("--out", nc_out, "comm.csv")->required();
  net_comm->add_option("--history", nc_history, "hist.csv");
  auto* net_top = net_cmd->add_subcommand("top", "most popular TMCs");
  std::string nt_out;
  std::size_t nt_n = network::kDefaultTopN;
  net_top->add_option("--n", nt_n, "rows");
  net_top->add_option("--out", nt_out, "top.csv")->required();

  // run
  auto* run_cmd = app.add_subcommand("run", "full pipeline from a config file");
  std::string run_config;
  bool manifest_only = false;
  std::optional<std::string> o_out_dir, o_k_list, o_topic_mode, o_weighted, o_lexicon, o_candidates, o_topics_in;
  std::optional<std::uint64_t> o_seed;
  std::optional<double> o_sigma, o_title_sim, o_alpha, o_beta;
  std::optional<int> o_k, o_year_min, o_year_max, o_iterations, o_burn_in;
  std::optional<std::size_t> o_top_n;
  bool o_fallback = false;
  run_cmd->add_option("--config", run_config, "JSON config")->required();
  run_cmd->add_flag("--manifest-only", manifest_only, "print planned stages without running");
  run_cmd->add_option("--out-dir", o_out_dir);
  run_cmd->add_option("--seed", o_seed);
  run_cmd->add_option("--sigma", o_sigma);
  run_cmd->add_option("--title-sim", o_title_sim);
  run_cmd->add_option("--year-min", o_year_min);
  run_cmd->add_option("--year-max", o_year_max);
  run_cmd->add_option("--lexicon", o_lexicon);
  run_cmd->add_option("--candidates", o_candidates);
  run_cmd->add_flag("--fallback-rule", o_fallback);
  run_cmd->add_option("--topic-mode", o_topic_mode, "fit|sweep|import");
  run_cmd->add_option("--k", o_k);
  run_cmd->add_option("--k-list", o_k_list);
  run_cmd->add_option("--topics-in", o_topics_in);
  run_cmd->add_option("--alpha", o_alpha);
  run_cmd->add_option("--beta", o_beta);
  run_cmd->add_option("--iterations", o_iterations);
  run_cmd->add_option("--burn-in", o_burn_in);
  run_cmd->add_option("--top-n", o_top_n);
  run_cmd->add_option("--weighted", o_weighted);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*ingest_cmd) {
      if (in_formats.size() > 1 && in_formats.size() != in_paths.size())
        throw ConfigError("give one --format per --in, or a single --format");
      for (std::size_t i = 0; i < in_paths.size(); ++i) {
        stages::InputSpec spec{in_paths[i], ingest::Format::jsonl};
        if (!in_formats.empty()) spec.format = ingest::format_from_string(in_formats.size() == 1 ? in_formats[0] : in_formats[i]);
        ingest_p.inputs.push_back(spec);
      }
      ingest_p.out = ingest_out;
      ingest_p.report = ingest_report;
      const auto s = stages::run_ingest(ingest_p);
      std::cout << "parsed " << s.parsed << ", rejected " << s.rejected << ", in year range " << s.after_year_filter
                << ", merged " << s.merged << ", kept " << s.kept << '\n';
    } else if (*extract_cmd) {
      stages::ExtractParams p{ex_corpus, ex_lexicon, opt_path(ex_candidates), ex_fallback, ex_out, opt_path(ex_report)};
      const auto s = stages::run_extract(p);
      std::cout << s.documents << " documents, " << s.docs_with_methods << " with methods, " << s.unmapped
                << " unmapped candidates\n";
    } else if (*eval_cmd) {
      const auto e = extract::evaluate_extraction(extract::read_doc_methods(ev_pred), extract::read_doc_methods(ev_gold));
      nlohmann::ordered_json j;
      j["precision"] = e.precision;
      j["recall"] = e.recall;
      j["f1"] = e.f1;
      j["tp"] = e.tp;
      j["fp"] = e.fp;
      j["fn"] = e.fn;
      j["docs_missing_from_gold"] = e.docs_missing_from_gold;
      std::cout << j.dump(2) << '\n';
    } else if (*topics_cmd) {
      stages::TopicSummary s;
      if (*fit_cmd) {
        s = stages::run_topics(topic_params(fit_f, stages::TopicMode::fit));
      } else if (*sweep_cmd) {
        auto p = topic_params(sweep_f, stages::TopicMode::sweep);
        p.k_list = parse_k_list(sweep_f.k_list);
        p.quality = opt_path(sweep_f.quality);
        s = stages::run_topics(p);
      } else {
        stages::TopicParams p;
        p.mode = stages::TopicMode::import_external;
        p.import = fs::path(import_f.in);
        p.out = import_f.out;
        p.report = opt_path(import_f.report);
        s = stages::run_topics(p);
      }
      std::cout << "K=" << s.K << ", assigned " << s.assigned << ", unassigned " << s.unassigned << '\n';
    } else if (*tmc_cmd) {
      tmc_p.methods = tmc_methods;
      tmc_p.topics = tmc_topics;
      tmc_p.out = tmc_out;
      tmc_p.graph = opt_path(tmc_graph);
      tmc_p.gexf = opt_path(tmc_gexf);
      tmc_p.report = opt_path(tmc_report);
      const auto table = stages::run_tmc(tmc_p);
      std::cout << table.pairs.size() << " pairs, " << table.retained_count << " retained at sigma "
                << text::format_double(table.sigma) << '\n';
    } else if (*net_cmd) {
      stages::NetworkParams p;
      p.tmc = net_tmc;
      p.sigma = net_sigma;
      p.weighting = parse_weighting(net_weighted);
      if (*net_build) {
        if (fs::path(nb_out).extension() == ".gexf") p.gexf = nb_out;
        else p.graph = nb_out;
        p.summary = opt_path(nb_summary);
      } else if (*net_comm) {
        p.communities = nc_out;
        p.history = opt_path(nc_history);
      } else {
        p.top_n = nt_n;
        p.top = nt_out;
      }
      const auto s = stages::run_network(p);
      std::cout << s.nodes << " nodes, " << s.edges << " edges, " << s.communities << " communities, Q="
                << text::format_double(s.q) << '\n';
    } else if (*run_cmd) {
      auto config = pipeline::RunConfig::load(run_config);
      if (o_out_dir) config.out_dir = *o_out_dir;
      if (o_seed) config.seed = *o_seed;
      if (o_sigma) config.sigma = *o_sigma;
      if (o_title_sim) config.title_sim = *o_title_sim;
      if (o_year_min) config.year_min = *o_year_min;
      if (o_year_max) config.year_max = *o_year_max;
      if (o_lexicon) config.lexicon = *o_lexicon;
      if (o_candidates) config.candidates = fs::path(*o_candidates);
      if (o_fallback) config.fallback_rule = true;
      if (o_topic_mode) {
        if (*o_topic_mode == "fit") config.topic_mode = stages::TopicMode::fit;
        else if (*o_topic_mode == "sweep") config.topic_mode = stages::TopicMode::sweep;
        else if (*o_topic_mode == "import") config.topic_mode = stages::TopicMode::import_external;
        else throw ConfigError("--topic-mode must be fit, sweep or import");
      }
      if (o_k) config.k = *o_k;
      if (o_k_list) config.k_list = parse_k_list(*o_k_list);
      if (o_topics_in) config.topics_in = fs::path(*o_topics_in);
      if (o_alpha) config.alpha = *o_alpha;
      if (o_beta) config.beta = *o_beta;
      if (o_iterations) config.iterations = *o_iterations;
      if (o_burn_in) config.burn_in = *o_burn_in;
      if (o_top_n) config.top_n = *o_top_n;
      if (o_weighted) config.weighting = parse_weighting(*o_weighted);

      if (manifest_only) {
        for (const auto& st : pipeline::plan_pipeline(config)) {
          std::cout << st.name << (st.would_skip ? "  (up to date)" : "") << '\n';
          for (const auto& f : st.outputs) std::cout << "  " << (config.out_dir / f).string() << '\n';
        }
        return kExitOk;
      }
      const auto manifest = pipeline::run_pipeline(config, std::cerr);
      std::size_t executed = 0;
      for (const auto& st : manifest.stages) executed += st.status == pipeline::StageStatus::executed;
      std::cout << executed << " of " << manifest.stages.size() << " stages executed; manifest at "
                << (config.out_dir / pipeline::kManifestFile).string() << '\n';
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kExitInput;
  } catch (const StageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitStage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitStage;
  }
  return kExitOk;
}
