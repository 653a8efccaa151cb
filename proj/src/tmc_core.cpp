#include "tmc/tmc_core.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <stdexcept>

#include "tmc/csv.hpp"
#include "tmc/error.hpp"
#include "tmc/graph_io.hpp"
#include "tmc/text.hpp"

namespace tmc::core {

std::vector<TmcPair> TmcTable::retained() const {
  std::vector<TmcPair> out;
  std::copy_if(pairs.begin(), pairs.end(), std::back_inserter(out), [](const TmcPair& p) { return p.retained(); });
  return out;
}

std::map<std::string, std::int64_t> count_method_docs(const Extractions& extractions) {
  std::map<std::string, std::int64_t> counts;
  for (const auto& [doc, methods] : extractions)
    for (const auto& m : methods) ++counts[m];
  return counts;
}

std::map<int, std::int64_t> count_topic_docs(const Assignments& assignments) {
  std::map<int, std::int64_t> counts;
  for (const auto& [doc, topic] : assignments) ++counts[topic];
  return counts;
}

std::map<std::pair<std::string, int>, std::int64_t> cooccurrence_counts(const Extractions& extractions,
                                                                        const Assignments& assignments) {
  std::map<std::pair<std::string, int>, std::int64_t> counts;
  for (const auto& [doc, methods] : extractions) {
    const auto it = assignments.find(doc);
    if (it == assignments.end()) continue;
    for (const auto& m : methods) ++counts[{m, it->second}];
  }
  return counts;
}

double intensity(std::int64_t d_ij, std::int64_t d_i, std::int64_t d_j) {
  if (d_i <= 0 || d_j <= 0) throw std::logic_error("intensity needs positive document counts");
  if (d_ij < 0 || d_ij > std::min(d_i, d_j)) throw std::logic_error("co-occurrence count out of range");
  // One correctly rounded division, so equal rationals always give the same double.
  return static_cast<double>(d_ij) / static_cast<double>(d_i * d_j);
}

bool canonical_less(const TmcPair& a, const TmcPair& b) {
  if (a.d_ij != b.d_ij) return a.d_ij > b.d_ij;
  if (a.c_ij != b.c_ij) return a.c_ij > b.c_ij;
  if (a.method != b.method) return a.method < b.method;
  return a.topic < b.topic;
}

TmcTable build_tmc_table(const Extractions& extractions, const Assignments& assignments, double sigma) {
  if (!(sigma >= 0)) throw ConfigError("sigma must be >= 0");
  const auto d_i = count_method_docs(extractions);
  const auto d_j = count_topic_docs(assignments);

  TmcTable table;
  table.sigma = sigma;
  for (const auto& [key, d_ij] : cooccurrence_counts(extractions, assignments)) {
    TmcPair p;
    p.method = key.first;
    p.topic = key.second;
    p.d_i = d_i.at(p.method);
    p.d_j = d_j.at(p.topic);
    p.d_ij = d_ij;
    p.c_ij = intensity(p.d_ij, p.d_i, p.d_j);
    p.r_ij = p.c_ij > sigma ? p.c_ij : 0.0;
    table.retained_count += p.retained();
    table.pairs.push_back(std::move(p));
  }
  std::sort(table.pairs.begin(), table.pairs.end(), canonical_less);

  std::set<std::string> docs;
  for (const auto& [doc, methods] : extractions) {
    docs.insert(doc);
    (assignments.count(doc) ? table.coverage.docs_with_both : table.coverage.docs_methods_only) += 1;
  }
  for (const auto& [doc, topic] : assignments) {
    docs.insert(doc);
    if (!extractions.count(doc)) ++table.coverage.docs_topic_only;
  }
  table.corpus_size = docs.size();
  return table;
}

std::string topic_label(int topic) { return "topic " + std::to_string(topic); }

BipartiteGraph export_bipartite(const TmcTable& table) {
  std::map<int, std::int64_t> topics;
  std::map<std::string, std::int64_t> methods;
  for (const auto& p : table.pairs) {
    if (!p.retained()) continue;
    topics[p.topic] = p.d_j;
    methods[p.method] = p.d_i;
  }
  BipartiteGraph g;
  std::map<int, std::size_t> topic_node;
  std::map<std::string, std::size_t> method_node;
  for (const auto& [t, count] : topics) {
    topic_node[t] = g.nodes.size();
    g.nodes.push_back({BipartiteNode::Kind::topic, topic_label(t), count});
  }
  for (const auto& [m, count] : methods) {
    method_node[m] = g.nodes.size();
    g.nodes.push_back({BipartiteNode::Kind::method, m, count});
  }
  for (const auto& p : table.pairs)
    if (p.retained()) g.edges.push_back({topic_node.at(p.topic), method_node.at(p.method), p.r_ij});
  if (g.edges.empty()) std::cerr << "warning: no retained topic-method pairs; bipartite graph is empty\n";
  return g;
}

void write_tmc_csv(const std::filesystem::path& path, const TmcTable& table) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  out << "method,topic_id,d_i,d_j,d_ij,c_ij,retained\n";
  for (const auto& p : table.pairs) {
    csv::write_row(out, {p.method, std::to_string(p.topic), std::to_string(p.d_i), std::to_string(p.d_j),
                         std::to_string(p.d_ij), text::format_double(p.c_ij), p.retained() ? "true" : "false"});
  }
}

TmcTable read_tmc_csv(const std::filesystem::path& path, double sigma) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open TMC table " + path.string());
  csv::Reader reader(in);
  TmcTable table;
  table.sigma = sigma;
  bool header = true;
  while (auto row = reader.next()) {
    if (header) {
      header = false;
      if (!row->fields.empty() && row->fields[0] == "method") continue;
    }
    const auto bad = [&](const std::string& why) {
      return InputError(path.string() + ":" + std::to_string(row->line) + ": " + why);
    };
    if (row->malformed || row->fields.size() != 7) throw bad("expected 7 columns");
    TmcPair p;
    try {
      p.method = row->fields[0];
      p.topic = std::stoi(row->fields[1]);
      p.d_i = std::stoll(row->fields[2]);
      p.d_j = std::stoll(row->fields[3]);
      p.d_ij = std::stoll(row->fields[4]);
      p.c_ij = std::stod(row->fields[5]);
    } catch (const std::exception&) {
      throw bad("non-numeric field");
    }
    const auto& flag = row->fields[6];
    if (flag != "true" && flag != "false") throw bad("retained must be true or false");
    p.r_ij = flag == "true" ? p.c_ij : 0.0;
    if (p.r_ij == 0 && flag == "true") throw bad("retained pair with zero intensity");
    table.retained_count += p.retained();
    table.pairs.push_back(std::move(p));
  }
  std::sort(table.pairs.begin(), table.pairs.end(), canonical_less);
  return table;
}

namespace {

graph_io::Document bipartite_document(const BipartiteGraph& g) {
  graph_io::Document doc;
  doc.node_keys = {{"kind", graph_io::AttrType::string},
                   {"label", graph_io::AttrType::string},
                   {"doc_count", graph_io::AttrType::integer}};
  doc.edge_keys = {{"weight", graph_io::AttrType::real}};
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    const auto& n = g.nodes[i];
    const bool topic = n.kind == BipartiteNode::Kind::topic;
    doc.nodes.push_back({(topic ? "t" : "m") + std::to_string(i), "", "",
                         {topic ? "topic" : "method", n.label, std::to_string(n.doc_count)}});
  }
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    const auto& e = g.edges[i];
    doc.edges.push_back({"e" + std::to_string(i), doc.nodes[e.topic_node].id, doc.nodes[e.method_node].id,
                         {text::format_double(e.weight)}});
  }
  return doc;
}

}  // namespace

void write_bipartite_graphml(const std::filesystem::path& path, const BipartiteGraph& graph) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  graph_io::write_graphml(out, bipartite_document(graph));
}

void write_bipartite_gexf(const std::filesystem::path& path, const BipartiteGraph& graph) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  graph_io::write_gexf(out, bipartite_document(graph));
}

}  // namespace tmc::core
