#include <doctest.h>

#include <fstream>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "tmc/error.hpp"
#include "tmc/tmc_core.hpp"

using namespace tmc;
using namespace tmc::core;

TEST_CASE("document counts") {
  const Extractions ex = {{"d1", {"m1", "m2"}}, {"d2", {"m1"}}};
  CHECK(count_method_docs(ex) == std::map<std::string, std::int64_t>{{"m1", 2}, {"m2", 1}});
  CHECK(count_method_docs({}).empty());
  CHECK(count_topic_docs({{"d1", 0}, {"d2", 0}, {"d3", 2}}) == std::map<int, std::int64_t>{{0, 2}, {2, 1}});
}

TEST_CASE("co-occurrence ignores documents without a topic") {
  CHECK(cooccurrence_counts({{"d1", {"m1"}}}, {{"d1", 0}}) ==
        std::map<std::pair<std::string, int>, std::int64_t>{{{"m1", 0}, 1}});
  CHECK(cooccurrence_counts({{"d1", {"m1"}}}, {{"d2", 0}}).empty());
}

TEST_CASE("intensity") {
  CHECK(intensity(2, 4, 5) == 0.1);
  CHECK(intensity(0, 3, 4) == 0.0);
  CHECK(intensity(1, 1, 1) == 1.0);
  CHECK_THROWS_AS(intensity(1, 0, 3), std::logic_error);
  CHECK_THROWS_AS(intensity(4, 3, 5), std::logic_error);
}

TEST_CASE("table matches brute-force recount with exact rationals") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto in = fixture::tmc_corpus(seed, 10 + 40 * static_cast<int>(seed));
    const auto brute = oracle::brute_tmc(in.methods, in.topics);
    for (double sigma : {0.0, 0.001, 0.01, 0.05}) {
      const auto table = build_tmc_table(in.methods, in.topics, sigma);
      CHECK(table.pairs.size() == brute.d_ij.size());
      std::size_t retained = 0;
      for (const auto& p : table.pairs) {
        CHECK(p.d_i == brute.d_i.at(p.method));
        CHECK(p.d_j == brute.d_j.at(p.topic));
        CHECK(p.d_ij == brute.d_ij.at({p.method, p.topic}));
        const oracle::Rational exact(p.d_ij, p.d_i * p.d_j);
        CHECK(p.c_ij == exact.to_double());
        CHECK(std::abs(p.c_ij - static_cast<double>(exact.num) / static_cast<double>(exact.den)) <= 1e-12);
        const bool keep = oracle::rational_greater(p.d_ij, p.d_i * p.d_j, sigma);
        CHECK(p.retained() == keep);
        CHECK(p.r_ij == (keep ? p.c_ij : 0.0));
        retained += keep;
      }
      CHECK(table.retained_count == retained);
    }
  }
}

TEST_CASE("retention is strict and sigma validated") {
  // c = 1/2040, below the default
  Extractions ex;
  Assignments as;
  for (int i = 0; i < 40; ++i) as["t" + std::to_string(i)] = 0;
  for (int i = 0; i < 50; ++i) ex["m" + std::to_string(i)] = {"x"};
  ex["t0"] = {"x"};
  const auto t = build_tmc_table(ex, as);
  REQUIRE(t.pairs.size() == 1);
  CHECK(t.pairs[0].c_ij == 1.0 / (51.0 * 40.0));
  CHECK_FALSE(t.pairs[0].retained());
  CHECK(build_tmc_table(ex, as, 0.0).retained_count == 1);
  // boundary: c exactly equal to sigma is dropped
  CHECK(build_tmc_table({{"d1", {"m"}}, {"d2", {"m"}}}, {{"d1", 0}, {"d2", 0}}, 0.5).retained_count == 0);
  CHECK_THROWS_AS(build_tmc_table(ex, as, -1), ConfigError);
}

TEST_CASE("canonical order") {
  const auto in = fixture::tmc_corpus(5);
  const auto t = build_tmc_table(in.methods, in.topics);
  CHECK(std::is_sorted(t.pairs.begin(), t.pairs.end(), canonical_less));
  for (std::size_t i = 1; i < t.pairs.size(); ++i) {
    const auto& a = t.pairs[i - 1];
    const auto& b = t.pairs[i];
    CHECK(a.d_ij >= b.d_ij);
    if (a.d_ij == b.d_ij) CHECK(a.c_ij >= b.c_ij);
  }
}

TEST_CASE("retained sets shrink as sigma grows") {
  const auto in = fixture::tmc_corpus(9);
  std::set<std::pair<std::string, int>> prev;
  bool first = true;
  for (double sigma : {0.0, 0.0005, 0.001, 0.01, 0.1}) {
    std::set<std::pair<std::string, int>> now;
    for (const auto& p : build_tmc_table(in.methods, in.topics, sigma).retained()) now.insert({p.method, p.topic});
    if (!first) CHECK(std::includes(prev.begin(), prev.end(), now.begin(), now.end()));
    prev = now;
    first = false;
  }
}

TEST_CASE("duplicating every document k times divides intensity by k") {
  const auto in = fixture::tmc_corpus(4, 60);
  const auto base = build_tmc_table(in.methods, in.topics, 0);
  for (int k : {2, 3, 7}) {
    Extractions ex;
    Assignments as;
    for (int copy = 0; copy < k; ++copy) {
      for (const auto& [d, ms] : in.methods) ex[d + "#" + std::to_string(copy)] = ms;
      for (const auto& [d, t] : in.topics) as[d + "#" + std::to_string(copy)] = t;
    }
    const auto scaled = build_tmc_table(ex, as, 0);
    REQUIRE(scaled.pairs.size() == base.pairs.size());
    for (std::size_t i = 0; i < base.pairs.size(); ++i) {
      const auto& a = base.pairs[i];
      const auto& b = scaled.pairs[i];
      CHECK(b.d_ij == k * a.d_ij);
      CHECK(oracle::Rational(b.d_ij, b.d_i * b.d_j) == oracle::Rational(a.d_ij, a.d_i * a.d_j * k));
    }
    CHECK(scaled.corpus_size == static_cast<std::size_t>(k) * base.corpus_size);
  }
}

TEST_CASE("per-method co-occurrence never exceeds method count") {
  const auto in = fixture::tmc_corpus(12);
  const auto t = build_tmc_table(in.methods, in.topics, 0);
  std::map<std::string, std::int64_t> sum;
  for (const auto& p : t.pairs) sum[p.method] += p.d_ij;
  for (const auto& [m, s] : sum) {
    std::int64_t covered = 0;
    for (const auto& [d, ms] : in.methods) covered += ms.count(m) && in.topics.count(d);
    CHECK(s == covered);
    CHECK(s <= count_method_docs(in.methods).at(m));
  }
}

TEST_CASE("bipartite export") {
  SUBCASE("one retained pair") {
    const auto g = export_bipartite(build_tmc_table({{"d1", {"m"}}}, {{"d1", 0}}));
    CHECK(g.nodes.size() == 2);
    REQUIRE(g.edges.size() == 1);
    CHECK(g.edges[0].weight == 1.0);
  }
  SUBCASE("two pairs sharing a topic") {
    const auto g = export_bipartite(build_tmc_table({{"d1", {"a", "b"}}}, {{"d1", 0}}));
    CHECK(g.nodes.size() == 3);
    CHECK(g.edges.size() == 2);
  }
  SUBCASE("two-coloring holds on a larger table") {
    const auto in = fixture::tmc_corpus(8);
    const auto t = build_tmc_table(in.methods, in.topics);
    const auto g = export_bipartite(t);
    CHECK(g.edges.size() == t.retained_count);
    for (const auto& e : g.edges) {
      CHECK(g.nodes[e.topic_node].kind == BipartiteNode::Kind::topic);
      CHECK(g.nodes[e.method_node].kind == BipartiteNode::Kind::method);
    }
  }
}

TEST_CASE("table csv round-trip") {
  const auto dir = fixture::scratch_dir("tmc_csv");
  const auto in = fixture::tmc_corpus(6);
  const auto t = build_tmc_table(in.methods, in.topics);
  write_tmc_csv(dir / "tmc.csv", t);
  const auto back = read_tmc_csv(dir / "tmc.csv", t.sigma);
  CHECK(back.pairs == t.pairs);
  CHECK(back.retained_count == t.retained_count);
  std::ofstream(dir / "bad.csv") << "method,topic_id,d_i,d_j,d_ij,c_ij,retained\nm,0,1,1,x,1,true\n";
  CHECK_THROWS_AS(read_tmc_csv(dir / "bad.csv"), InputError);
}
