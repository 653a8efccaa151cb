#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "tmc/extract.hpp"

namespace tmc::core {

inline constexpr double kDefaultSigma = 0.001;

using Extractions = extract::DocMethods;
// doc_id -> dominant topic; unassigned documents are simply absent.
using Assignments = std::map<std::string, int>;

struct TmcPair {
  std::string method;
  int topic = 0;
  std::int64_t d_i = 0;
  std::int64_t d_j = 0;
  std::int64_t d_ij = 0;
  double c_ij = 0;
  double r_ij = 0;  // c_ij when retained, else 0

  bool retained() const { return r_ij > 0; }
  bool operator==(const TmcPair&) const = default;
};

struct Coverage {
  std::size_t docs_with_both = 0;
  std::size_t docs_methods_only = 0;  // methods but no topic
  std::size_t docs_topic_only = 0;    // topic but no method record
};

struct TmcTable {
  double sigma = kDefaultSigma;
  std::vector<TmcPair> pairs;  // canonical order
  std::size_t corpus_size = 0;
  std::size_t retained_count = 0;
  Coverage coverage;

  std::vector<TmcPair> retained() const;
};

std::map<std::string, std::int64_t> count_method_docs(const Extractions& extractions);
std::map<int, std::int64_t> count_topic_docs(const Assignments& assignments);
std::map<std::pair<std::string, int>, std::int64_t> cooccurrence_counts(const Extractions& extractions,
                                                                        const Assignments& assignments);

// d_ij / (d_i * d_j). Throws std::logic_error when d_i or d_j is zero or d_ij is out of range.
double intensity(std::int64_t d_ij, std::int64_t d_i, std::int64_t d_j);

// Descending d_ij, descending c_ij, ascending method, ascending topic.
bool canonical_less(const TmcPair& a, const TmcPair& b);

// Every pair with d_ij >= 1; retained iff c_ij > sigma (strict). Throws ConfigError on
// negative sigma.
TmcTable build_tmc_table(const Extractions& extractions, const Assignments& assignments,
                         double sigma = kDefaultSigma);

struct BipartiteNode {
  enum class Kind { topic, method };
  Kind kind;
  std::string label;
  std::int64_t doc_count = 0;
};

struct BipartiteEdge {
  std::size_t topic_node = 0;
  std::size_t method_node = 0;
  double weight = 0;
};

// Topic nodes first (ascending id), then method nodes (ascending name).
struct BipartiteGraph {
  std::vector<BipartiteNode> nodes;
  std::vector<BipartiteEdge> edges;
};

BipartiteGraph export_bipartite(const TmcTable& table);

std::string topic_label(int topic);

// method,topic_id,d_i,d_j,d_ij,c_ij,retained
void write_tmc_csv(const std::filesystem::path& path, const TmcTable& table);
// Reads a table written by write_tmc_csv; sigma and corpus size are not stored in the CSV
// and are passed through. Throws InputError on malformed rows.
TmcTable read_tmc_csv(const std::filesystem::path& path, double sigma = kDefaultSigma);

void write_bipartite_graphml(const std::filesystem::path& path, const BipartiteGraph& graph);
void write_bipartite_gexf(const std::filesystem::path& path, const BipartiteGraph& graph);

}  // namespace tmc::core
