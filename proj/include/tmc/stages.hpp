#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "tmc/ingest.hpp"
#include "tmc/network.hpp"
#include "tmc/topic_model.hpp"

// File-to-file stage runners. Each reads its declared inputs and writes its declared
// outputs; the CLI subcommands and the pipeline orchestrator both call these.
namespace tmc::stages {

namespace fs = std::filesystem;

struct InputSpec {
  fs::path path;
  ingest::Format format = ingest::Format::jsonl;
};

struct IngestParams {
  std::vector<InputSpec> inputs;
  int year_min = ingest::kDefaultYearMin;
  int year_max = ingest::kDefaultYearMax;
  double title_sim = ingest::kDefaultTitleSim;
  fs::path out;     // corpus.jsonl
  fs::path report;  // dedup.json
};

struct IngestSummary {
  std::size_t parsed = 0, rejected = 0, after_year_filter = 0, merged = 0, kept = 0;
};

// Parse, normalize, year-filter and deduplicate; ids must be unique across inputs.
IngestSummary run_ingest(const IngestParams& p);

struct ExtractParams {
  fs::path corpus;
  fs::path lexicon;
  std::optional<fs::path> candidates;  // LLM stage output; switches to two-stage extraction
  bool fallback_rule = false;
  fs::path out;                   // methods.jsonl
  std::optional<fs::path> report;
};

struct ExtractSummary {
  std::size_t documents = 0, docs_with_methods = 0, unmapped = 0;
};

ExtractSummary run_extract(const ExtractParams& p);

enum class TopicMode { fit, sweep, import_external };

struct TopicParams {
  TopicMode mode = TopicMode::fit;
  fs::path corpus;                 // fit / sweep
  std::optional<fs::path> import;  // import mode: BERTopic-style CSV or JSONL
  topics::TopicModelConfig model;  // K used by fit; template for sweep
  std::vector<int> k_list;         // sweep
  std::size_t min_token_len = topics::kDefaultMinTokenLength;
  fs::path out;                      // topics.csv
  std::optional<fs::path> quality;   // sweep: K,perplexity,coherence,selected
  std::optional<fs::path> report;
  unsigned threads = 0;
};

struct TopicSummary {
  int K = 0;
  std::size_t assigned = 0, unassigned = 0;
};

TopicSummary run_topics(const TopicParams& p);

struct TmcParams {
  fs::path methods;  // methods.jsonl
  fs::path topics;   // topics.csv
  double sigma = core::kDefaultSigma;
  fs::path out;      // tmc.csv
  std::optional<fs::path> graph;  // bipartite export (.graphml or .gexf)
  std::optional<fs::path> gexf;   // optional second export
  std::optional<fs::path> report;
};

core::TmcTable run_tmc(const TmcParams& p);

struct NetworkParams {
  fs::path tmc;  // tmc.csv
  double sigma = core::kDefaultSigma;  // only reported; retention is read from the table
  network::EdgeWeighting weighting = network::EdgeWeighting::unweighted;
  std::size_t top_n = network::kDefaultTopN;
  std::optional<fs::path> graph;       // net.graphml
  std::optional<fs::path> gexf;        // net.gexf
  std::optional<fs::path> communities; // comm.csv
  std::optional<fs::path> history;     // hist.csv
  std::optional<fs::path> top;         // top.csv
  std::optional<fs::path> summary;     // network.json
};

struct NetworkSummary {
  std::size_t nodes = 0, edges = 0, communities = 0, merges_applied = 0;
  double q = 0;
  std::optional<double> bipartite_q;
  std::size_t bipartite_communities = 0;
};

NetworkSummary run_network(const NetworkParams& p);

struct ReportParams {
  fs::path corpus, methods, topics, tmc, communities, network_summary, top;
  fs::path out;  // summary.txt
};

struct ReportNumbers {
  std::size_t corpus_size = 0, method_count = 0, topic_count = 0, tmc_pairs = 0, retained_pairs = 0,
              community_count = 0, top_rows = 0;
  double modularity = 0;
};

// Recomputes every number from the files it summarizes; throws InputError naming a missing
// upstream output or a disagreement between files.
ReportNumbers emit_report(const ReportParams& p);

}  // namespace tmc::stages
