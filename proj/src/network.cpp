#include "tmc/network.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <numeric>
#include <stdexcept>
#include <tuple>

#include "tmc/csv.hpp"
#include "tmc/error.hpp"
#include "tmc/graph_io.hpp"
#include "tmc/text.hpp"

namespace tmc::network {

std::string_view to_string(Shared s) { return s == Shared::topic ? "topic" : "method"; }

std::string tmc_label(const core::TmcPair& p) { return p.method + " @ " + core::topic_label(p.topic); }

TmcNetwork build_network(const core::TmcTable& table, EdgeWeighting weighting) {
  TmcNetwork net;
  for (const auto& p : table.pairs)
    if (p.retained()) net.nodes.push_back(p);
  if (net.nodes.empty())
    throw InputError("no retained TMC pairs at sigma " + text::format_double(table.sigma) +
                     "; lower --sigma to retain more pairs");
  std::sort(net.nodes.begin(), net.nodes.end(), core::canonical_less);

  // Shared-element buckets; a pair of nodes can share at most one element.
  std::map<int, std::vector<std::size_t>> by_topic;
  std::map<std::string, std::vector<std::size_t>> by_method;
  for (std::size_t i = 0; i < net.nodes.size(); ++i) {
    by_topic[net.nodes[i].topic].push_back(i);
    by_method[net.nodes[i].method].push_back(i);
  }
  auto connect = [&](const std::vector<std::size_t>& members, Shared kind) {
    for (std::size_t x = 0; x < members.size(); ++x) {
      for (std::size_t y = x + 1; y < members.size(); ++y) {
        const auto a = members[x], b = members[y];
        const double w = weighting == EdgeWeighting::shared_intensity
                             ? std::min(net.nodes[a].c_ij, net.nodes[b].c_ij)
                             : 1.0;
        net.edges.push_back({a, b, kind, w});
      }
    }
  };
  for (const auto& [t, members] : by_topic) connect(members, Shared::topic);
  for (const auto& [m, members] : by_method) connect(members, Shared::method);
  std::sort(net.edges.begin(), net.edges.end(),
            [](const NetEdge& x, const NetEdge& y) { return std::tie(x.a, x.b) < std::tie(y.a, y.b); });

  net.adjacency.resize(net.nodes.size());
  for (const auto& e : net.edges) {
    net.adjacency[e.a].push_back(e.b);
    net.adjacency[e.b].push_back(e.a);
  }
  for (auto& adj : net.adjacency) std::sort(adj.begin(), adj.end());
  return net;
}

std::vector<core::TmcPair> rank_popularity(const core::TmcTable& table, std::size_t n) {
  if (n < 1) throw ConfigError("popularity list size must be >= 1");
  auto ranked = table.retained();
  std::sort(ranked.begin(), ranked.end(), core::canonical_less);
  if (ranked.size() > n) ranked.resize(n);
  return ranked;
}

Graph to_graph(const TmcNetwork& network) {
  Graph g;
  g.node_count = network.nodes.size();
  for (const auto& e : network.edges) g.edges.push_back({e.a, e.b, e.weight});
  return g;
}

Graph to_graph(const core::BipartiteGraph& bipartite, bool weighted) {
  Graph g;
  g.node_count = bipartite.nodes.size();
  for (const auto& e : bipartite.edges) g.edges.push_back({e.topic_node, e.method_node, weighted ? e.weight : 1.0});
  return g;
}

double modularity(const Graph& graph, const std::vector<int>& assignment) {
  if (assignment.size() != graph.node_count)
    throw std::invalid_argument("community assignment does not cover every node");
  double total = 0;
  for (const auto& e : graph.edges) {
    if (e.a == e.b) throw std::invalid_argument("modularity is defined for graphs without self-loops");
    total += e.weight;
  }
  if (graph.edges.empty() || !(total > 0)) throw std::invalid_argument("modularity is undefined on an edgeless graph");

  std::map<int, double> internal, degree;
  for (const auto& e : graph.edges) {
    const int ca = assignment[e.a], cb = assignment[e.b];
    if (ca == cb) internal[ca] += e.weight;
    degree[ca] += e.weight;
    degree[cb] += e.weight;
  }
  double q = 0;
  for (const auto& [c, k] : degree) {
    const double a = k / (2.0 * total);
    const auto it = internal.find(c);
    q += (it == internal.end() ? 0.0 : it->second / total) - a * a;
  }
  return q;
}

std::size_t CommunityPartition::community_count() const {
  return assignment.empty() ? 0 : static_cast<std::size_t>(*std::max_element(assignment.begin(), assignment.end())) + 1;
}

CommunityPartition greedy_communities(const Graph& graph) {
  double total = 0;
  for (const auto& e : graph.edges) total += e.weight;
  if (graph.edges.empty() || !(total > 0)) throw std::invalid_argument("modularity is undefined on an edgeless graph");

  const std::size_t n = graph.node_count;
  // e[i][j]: fraction of edge ends joining communities i and j (each direction stored).
  std::vector<std::map<int, double>> e(n);
  std::vector<double> a(n, 0.0);
  const double half = 1.0 / (2.0 * total);
  for (const auto& edge : graph.edges) {
    if (edge.a == edge.b) throw std::invalid_argument("modularity is defined for graphs without self-loops");
    const int x = static_cast<int>(edge.a), y = static_cast<int>(edge.b);
    e[x][y] += edge.weight * half;
    e[y][x] += edge.weight * half;
    a[x] += edge.weight * half;
    a[y] += edge.weight * half;
  }

  // Candidate merges ordered by descending delta Q, then (smaller id, larger id).
  using Key = std::tuple<double, int, int>;
  std::set<Key> queue;
  std::map<std::pair<int, int>, double> current;
  auto delta = [&](int i, int j) { return 2.0 * (e[i].at(j) - a[i] * a[j]); };
  auto push = [&](int i, int j) {
    if (i > j) std::swap(i, j);
    const double dq = delta(i, j);
    current[{i, j}] = dq;
    queue.emplace(-dq, i, j);
  };
  auto drop = [&](int i, int j) {
    if (i > j) std::swap(i, j);
    const auto it = current.find({i, j});
    if (it == current.end()) return;
    queue.erase(Key{-it->second, i, j});
    current.erase(it);
  };
  for (std::size_t i = 0; i < n; ++i)
    for (const auto& [j, v] : e[i])
      if (static_cast<int>(i) < j) push(static_cast<int>(i), j);

  CommunityPartition result;
  double q = 0;
  for (double ai : a) q -= ai * ai;
  result.q_initial = q;
  double best_q = q;
  std::size_t best_step = 0;

  while (!queue.empty()) {
    const auto [neg_dq, i, j] = *queue.begin();
    const double dq = -neg_dq;

    for (const auto& [k, v] : e[i]) drop(i, k);
    for (const auto& [k, v] : e[j]) drop(j, k);

    // Fold j into i.
    for (const auto& [k, v] : e[j]) {
      if (k == i) continue;
      e[i][k] += v;
      e[k][i] += v;
      e[k].erase(j);
    }
    e[i].erase(j);
    e[j].clear();
    a[i] += a[j];
    a[j] = 0;
    for (const auto& [k, v] : e[i]) push(i, k);

    q += dq;
    result.merge_history.push_back({i, j, dq, q});
    // Ties, up to rounding, keep the earlier (fewer-merge) partition.
    if (q > best_q + 1e-12) {
      best_q = q;
      best_step = result.merge_history.size();
    }
  }

  std::vector<int> owner(n);
  std::iota(owner.begin(), owner.end(), 0);
  for (std::size_t s = 0; s < best_step; ++s) {
    const auto& m = result.merge_history[s];
    for (auto& o : owner)
      if (o == m.b) o = m.a;
  }
  std::map<int, int> relabel;
  result.assignment.resize(n);
  for (std::size_t v = 0; v < n; ++v) {
    const auto [it, fresh] = relabel.emplace(owner[v], static_cast<int>(relabel.size()));
    result.assignment[v] = it->second;
  }
  result.q = best_q;
  result.merges_applied = best_step;
  return result;
}

std::vector<CommunitySummary> community_report(const CommunityPartition& partition, const TmcNetwork& network) {
  if (partition.assignment.size() != network.nodes.size())
    throw std::invalid_argument("partition does not match the network");
  std::vector<CommunitySummary> out(partition.community_count());
  for (std::size_t c = 0; c < out.size(); ++c) out[c].id = static_cast<int>(c);
  for (std::size_t v = 0; v < network.nodes.size(); ++v) {
    auto& s = out[static_cast<std::size_t>(partition.assignment[v])];
    s.members.push_back(v);
    s.topics.insert(network.nodes[v].topic);
    s.methods.insert(network.nodes[v].method);
  }
  double total = 0;
  for (const auto& e : network.edges) total += e.weight;
  if (total > 0) {
    for (const auto& e : network.edges) {
      const int ca = partition.assignment[e.a];
      if (ca == partition.assignment[e.b]) out[static_cast<std::size_t>(ca)].internal_edge_fraction += e.weight / total;
    }
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const CommunitySummary& x, const CommunitySummary& y) { return x.members.size() > y.members.size(); });
  return out;
}

void write_network_graph(const std::filesystem::path& path, const TmcNetwork& network,
                         const CommunityPartition* partition) {
  graph_io::Document doc;
  doc.node_keys = {{"tmc_label", graph_io::AttrType::string},
                   {"d_ij", graph_io::AttrType::integer},
                   {"community", graph_io::AttrType::integer}};
  doc.edge_keys = {{"shared", graph_io::AttrType::string}};
  for (std::size_t v = 0; v < network.nodes.size(); ++v) {
    const auto& p = network.nodes[v];
    const int community = partition ? partition->assignment.at(v) : -1;
    doc.nodes.push_back({"n" + std::to_string(v), "", "",
                         {tmc_label(p), std::to_string(p.d_ij), std::to_string(community)}});
  }
  for (std::size_t i = 0; i < network.edges.size(); ++i) {
    const auto& e = network.edges[i];
    doc.edges.push_back({"e" + std::to_string(i), "n" + std::to_string(e.a), "n" + std::to_string(e.b),
                         {std::string(to_string(e.shared))}});
  }
  graph_io::write_graph_file(path, doc);
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  return out;
}

}  // namespace

void write_communities_csv(const std::filesystem::path& path, const TmcNetwork& network,
                           const CommunityPartition& partition) {
  auto out = open_out(path);
  out << "node,community\n";
  for (std::size_t v = 0; v < network.nodes.size(); ++v)
    csv::write_row(out, {tmc_label(network.nodes[v]), std::to_string(partition.assignment.at(v))});
}

void write_history_csv(const std::filesystem::path& path, const CommunityPartition& partition) {
  auto out = open_out(path);
  out << "step,a,b,delta_q,q_after\n";
  for (std::size_t s = 0; s < partition.merge_history.size(); ++s) {
    const auto& m = partition.merge_history[s];
    csv::write_row(out, {std::to_string(s + 1), std::to_string(m.a), std::to_string(m.b),
                         text::format_double(m.delta_q), text::format_double(m.q_after)});
  }
}

void write_popularity_csv(const std::filesystem::path& path, const std::vector<core::TmcPair>& ranked) {
  auto out = open_out(path);
  out << "rank,method,topic_id,d_ij,c_ij\n";
  for (std::size_t r = 0; r < ranked.size(); ++r) {
    const auto& p = ranked[r];
    csv::write_row(out, {std::to_string(r + 1), p.method, std::to_string(p.topic), std::to_string(p.d_ij),
                         text::format_double(p.c_ij)});
  }
}

}  // namespace tmc::network
