#pragma once

#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "tmc/tmc_core.hpp"

namespace tmc::network {

inline constexpr std::size_t kDefaultTopN = 35;

enum class Shared { topic, method };
std::string_view to_string(Shared s);

enum class EdgeWeighting { unweighted, shared_intensity };

struct NetEdge {
  std::size_t a = 0, b = 0;  // a < b
  Shared shared = Shared::topic;
  double weight = 1.0;
};

// Nodes are the retained TMC pairs in canonical table order; two nodes are joined iff they
// share their topic or their method.
struct TmcNetwork {
  std::vector<core::TmcPair> nodes;
  std::vector<NetEdge> edges;  // sorted by (a, b)
  std::vector<std::vector<std::size_t>> adjacency;
};

// Throws InputError when the table has no retained pairs.
TmcNetwork build_network(const core::TmcTable& table, EdgeWeighting weighting = EdgeWeighting::unweighted);

std::string tmc_label(const core::TmcPair& p);

// Retained pairs by descending d_ij, descending c_ij, then ascending (method, topic).
std::vector<core::TmcPair> rank_popularity(const core::TmcTable& table, std::size_t n = kDefaultTopN);

struct WeightedEdge {
  std::size_t a = 0, b = 0;
  double weight = 1.0;
};

// Simple undirected graph without self-loops, the input of the modularity routines.
struct Graph {
  std::size_t node_count = 0;
  std::vector<WeightedEdge> edges;
};

Graph to_graph(const TmcNetwork& network);
Graph to_graph(const core::BipartiteGraph& bipartite, bool weighted = false);

// Q = sum_c (e_cc - a_c^2). Throws std::invalid_argument on an edgeless graph or an
// assignment that does not cover every node.
double modularity(const Graph& graph, const std::vector<int>& assignment);

struct MergeStep {
  int a = 0, b = 0;  // b merged into a
  double delta_q = 0;
  double q_after = 0;
};

struct CommunityPartition {
  std::vector<int> assignment;  // contiguous ids from 0, numbered by first node
  double q = 0;
  double q_initial = 0;  // singleton partition
  std::vector<MergeStep> merge_history;
  std::size_t merges_applied = 0;  // prefix of merge_history behind `assignment`
  std::size_t community_count() const;
};

// Agglomerative greedy modularity maximization from singletons; the pair with the largest
// delta Q is merged first, ties by (smaller id, larger id). The returned partition is the
// best point in the full history, ties going to fewer merges.
CommunityPartition greedy_communities(const Graph& graph);

struct CommunitySummary {
  int id = 0;
  std::vector<std::size_t> members;
  std::set<int> topics;
  std::set<std::string> methods;
  double internal_edge_fraction = 0;  // internal edge weight over total edge weight
};

// Communities sorted by descending size, ties by id.
std::vector<CommunitySummary> community_report(const CommunityPartition& partition, const TmcNetwork& network);

// tmc_label, d_ij and community node attributes (community = -1 when `partition` is null);
// shared edge attribute. Format chosen by extension (.gexf or GraphML).
void write_network_graph(const std::filesystem::path& path, const TmcNetwork& network,
                         const CommunityPartition* partition = nullptr);
void write_communities_csv(const std::filesystem::path& path, const TmcNetwork& network,
                           const CommunityPartition& partition);
void write_history_csv(const std::filesystem::path& path, const CommunityPartition& partition);
void write_popularity_csv(const std::filesystem::path& path, const std::vector<core::TmcPair>& ranked);

}  // namespace tmc::network
