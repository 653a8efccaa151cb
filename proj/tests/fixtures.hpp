#pragma once
// Seeded synthetic inputs shared by the unit tests and the acceptance runner.

#include <filesystem>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "tmc/extract.hpp"
#include "tmc/ingest.hpp"
#include "tmc/network.hpp"
#include "tmc/topic_model.hpp"

namespace fixture {

namespace fs = std::filesystem;

inline fs::path scratch_dir(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("tmcflow_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

inline std::string two_digit(int i) { return (i < 10 ? "0" : "") + std::to_string(i); }

struct LabeledCorpus {
  tmc::topics::TokenCorpus corpus;
  std::vector<int> labels;
};

// Two generators with disjoint 20-word vocabularies; documents alternate between them.
inline LabeledCorpus two_generator_corpus(std::uint64_t seed, int docs = 100, int doc_len = 30) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(0, 19);
  std::vector<std::string> ids;
  std::vector<std::vector<std::string>> tokens;
  std::vector<int> labels;
  for (int d = 0; d < docs; ++d) {
    const int g = d % 2;
    std::vector<std::string> doc;
    for (int t = 0; t < doc_len; ++t) doc.push_back((g == 0 ? "river" : "ledger") + two_digit(pick(rng)));
    ids.push_back("g" + std::to_string(d));
    tokens.push_back(std::move(doc));
    labels.push_back(g);
  }
  return {tmc::topics::build_token_corpus(ids, tokens), labels};
}

// Best purity over topic relabelings: each topic votes for its majority label.
inline double purity(const std::vector<int>& assigned, const std::vector<int>& labels, int K) {
  std::map<int, std::map<int, int>> votes;
  for (std::size_t i = 0; i < assigned.size(); ++i) ++votes[assigned[i]][labels[i]];
  int correct = 0;
  for (int k = 0; k < K; ++k) {
    int best = 0;
    for (const auto& [label, n] : votes[k]) best = std::max(best, n);
    correct += best;
  }
  return static_cast<double>(correct) / static_cast<double>(assigned.size());
}

struct TmcInput {
  std::map<std::string, std::set<std::string>> methods;
  std::map<std::string, int> topics;
};

// Method usage skewed by topic so intensities spread across several orders of magnitude.
// Some documents lack a topic, some lack methods.
inline TmcInput tmc_corpus(std::uint64_t seed, int docs = 200, int n_methods = 10, int n_topics = 6) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  TmcInput in;
  for (int d = 0; d < docs; ++d) {
    const auto id = "doc" + std::to_string(d);
    const int topic = static_cast<int>(u(rng) * n_topics);
    if (u(rng) > 0.05) in.topics[id] = topic;
    std::set<std::string> ms;
    for (int m = 0; m < n_methods; ++m) {
      const double p = (m % n_topics == topic) ? 0.6 : 0.08;
      if (u(rng) < p) ms.insert("method" + two_digit(m));
    }
    if (!ms.empty() || u(rng) < 0.5) in.methods[id] = ms;
  }
  std::erase_if(in.methods, [](const auto& kv) { return kv.second.empty(); });
  return in;
}

inline std::map<std::string, std::vector<std::string>> method_lexicon_entries() {
  return {
      {"topic modeling", {"lda", "latent dirichlet allocation", "topic models"}},
      {"network analysis", {"social network analysis", "sna"}},
      {"geographic information system", {"gis", "spatial mapping"}},
      {"text mining", {"text analysis"}},
      {"stylometry", {"authorship attribution"}},
      {"optical character recognition", {"ocr"}},
  };
}

struct ExtractionFixture {
  std::vector<tmc::ingest::BiblioRecord> docs;
  tmc::extract::DocMethods gold;
  std::map<std::string, std::vector<std::string>> noisy_candidates;  // half of every list is noise
};

// 30 documents with planted method mentions in mixed surface forms.
inline ExtractionFixture extraction_fixture(std::uint64_t seed = 11) {
  std::mt19937_64 rng(seed);
  const auto entries = method_lexicon_entries();
  std::vector<std::pair<std::string, std::vector<std::string>>> lex(entries.begin(), entries.end());
  const std::vector<std::string> noise = {"close reading", "archival work", "deep learning pipeline",
                                          "qualitative coding", "crowdsourcing", "interviews"};
  const std::vector<std::string> filler = {"the archive of letters", "early modern print", "a corpus of novels",
                                           "regional newspapers", "parish registers"};
  ExtractionFixture fx;
  for (int d = 0; d < 30; ++d) {
    tmc::ingest::BiblioRecord r;
    r.id = "e" + two_digit(d);
    r.year = 2000 + d % 20;
    const std::size_t ia = rng() % lex.size();
    const std::size_t ib = (ia + 1 + rng() % (lex.size() - 1)) % lex.size();
    const auto& a = lex[ia];
    const auto& b = lex[ib];
    auto surface = [&](const auto& entry) {
      std::vector<std::string> forms = entry.second;
      forms.push_back(entry.first);
      auto s = forms[rng() % forms.size()];
      if (rng() % 2) for (auto& ch : s) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
      return s;
    };
    r.title = "Reading " + filler[rng() % filler.size()];
    r.abstract = "We study " + filler[rng() % filler.size()] + " with " + surface(a) + ". Results from " +
                 surface(b) + " are compared.";
    fx.gold[r.id] = {a.first, b.first};
    fx.noisy_candidates[r.id] = {surface(a), surface(b), noise[rng() % noise.size()], noise[rng() % noise.size()]};
    fx.docs.push_back(std::move(r));
  }
  return fx;
}

inline tmc::network::Graph make_graph(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
  tmc::network::Graph g;
  g.node_count = n;
  for (const auto& [a, b] : edges) g.edges.push_back({a, b, 1.0});
  return g;
}

inline std::vector<oracle::Edge> oracle_edges(const tmc::network::Graph& g) {
  std::vector<oracle::Edge> out;
  for (const auto& e : g.edges) out.push_back({e.a, e.b, e.weight});
  return out;
}

inline tmc::network::Graph two_triangles(bool bridge) {
  std::vector<std::pair<std::size_t, std::size_t>> e = {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}};
  if (bridge) e.push_back({2, 3});
  return make_graph(6, e);
}

// Simple random graph on 3..8 nodes with at least one edge.
inline tmc::network::Graph random_small_graph(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> size(3, 8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto n = static_cast<std::size_t>(size(rng));
  const double p = 0.2 + 0.5 * u(rng);
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      if (u(rng) < p) edges.push_back({a, b});
  if (edges.empty()) edges.push_back({0, 1});
  return make_graph(n, edges);
}

}  // namespace fixture
