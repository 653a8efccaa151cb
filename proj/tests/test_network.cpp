#include <doctest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "tmc/error.hpp"
#include "tmc/network.hpp"

using namespace tmc;
using namespace tmc::network;

namespace {

core::TmcPair pair(std::string method, int topic, std::int64_t d_ij, double c) {
  core::TmcPair p;
  p.method = std::move(method);
  p.topic = topic;
  p.d_i = p.d_j = std::max<std::int64_t>(d_ij, 1);
  p.d_ij = d_ij;
  p.c_ij = p.r_ij = c;
  return p;
}

core::TmcTable table_of(std::vector<core::TmcPair> pairs) {
  core::TmcTable t;
  std::sort(pairs.begin(), pairs.end(), core::canonical_less);
  t.pairs = std::move(pairs);
  for (const auto& p : t.pairs) t.retained_count += p.retained();
  return t;
}

}  // namespace

TEST_CASE("shared-element edges") {
  SUBCASE("path of length two") {
    const auto net = build_network(table_of({pair("m1", 1, 3, 0.3), pair("m2", 1, 2, 0.2), pair("m2", 2, 1, 0.1)}));
    REQUIRE(net.edges.size() == 2);
    CHECK(net.edges[0].a == 0);
    CHECK(net.edges[0].b == 1);
    CHECK(net.edges[0].shared == Shared::topic);
    CHECK(net.edges[1].a == 1);
    CHECK(net.edges[1].b == 2);
    CHECK(net.edges[1].shared == Shared::method);
  }
  SUBCASE("single node") { CHECK(build_network(table_of({pair("m", 0, 1, 0.5)})).edges.empty()); }
  SUBCASE("disjoint pairs") {
    CHECK(build_network(table_of({pair("m1", 1, 2, 0.5), pair("m2", 2, 1, 0.5)})).edges.empty());
  }
  SUBCASE("nothing retained") {
    auto p = pair("m", 0, 1, 0.0005);
    p.r_ij = 0;
    CHECK_THROWS_AS(build_network(table_of({p})), InputError);
  }
}

TEST_CASE("network edges match exhaustive pair comparison and are order-free") {
  const auto in = fixture::tmc_corpus(21);
  const auto t = core::build_tmc_table(in.methods, in.topics, 0.005);
  const auto net = build_network(t);
  std::set<std::pair<std::size_t, std::size_t>> want;
  for (std::size_t a = 0; a < net.nodes.size(); ++a)
    for (std::size_t b = a + 1; b < net.nodes.size(); ++b)
      if (net.nodes[a].topic == net.nodes[b].topic || net.nodes[a].method == net.nodes[b].method) want.insert({a, b});
  std::set<std::pair<std::size_t, std::size_t>> got;
  for (const auto& e : net.edges) {
    CHECK(e.a < e.b);
    got.insert({e.a, e.b});
  }
  CHECK(got == want);
  CHECK(got.size() == net.edges.size());

  auto shuffled = t;
  std::mt19937_64 rng(4);
  std::shuffle(shuffled.pairs.begin(), shuffled.pairs.end(), rng);
  std::sort(shuffled.pairs.begin(), shuffled.pairs.end(), core::canonical_less);
  const auto again = build_network(shuffled);
  CHECK(again.nodes == net.nodes);
  REQUIRE(again.edges.size() == net.edges.size());
  for (std::size_t i = 0; i < net.edges.size(); ++i) CHECK(again.edges[i].b == net.edges[i].b);
}

TEST_CASE("weighted edges use the smaller endpoint intensity") {
  const auto net =
      build_network(table_of({pair("m1", 1, 3, 0.3), pair("m2", 1, 2, 0.2)}), EdgeWeighting::shared_intensity);
  REQUIRE(net.edges.size() == 1);
  CHECK(net.edges[0].weight == 0.2);
}

TEST_CASE("popularity ranking") {
  const auto t = table_of({pair("a", 0, 5, 0.05), pair("b", 0, 3, 0.1), pair("c", 1, 3, 0.2)});
  const auto r = rank_popularity(t, 35);
  REQUIRE(r.size() == 3);
  CHECK(r[0].method == "a");
  CHECK(r[1].method == "c");
  CHECK(r[2].method == "b");
  CHECK(rank_popularity(t, 1).size() == 1);
  CHECK(rank_popularity(t, 1)[0].d_ij == 5);
  CHECK(kDefaultTopN == 35);
}

TEST_CASE("modularity fixtures") {
  const auto split = std::vector<int>{0, 0, 0, 1, 1, 1};
  CHECK(modularity(fixture::two_triangles(false), split) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(std::abs(modularity(fixture::two_triangles(true), split) - 5.0 / 14.0) <= 1e-12);
  CHECK(modularity(fixture::two_triangles(true), std::vector<int>(6, 0)) == 0.0);
  CHECK_THROWS_AS(modularity(fixture::make_graph(3, {}), {0, 1, 2}), std::invalid_argument);
  CHECK_THROWS_AS(modularity(fixture::two_triangles(false), {0, 1}), std::invalid_argument);
}

TEST_CASE("greedy on two disconnected triangles") {
  const auto g = fixture::two_triangles(false);
  const auto p = greedy_communities(g);
  CHECK(p.community_count() == 2);
  CHECK(p.q == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(p.assignment == std::vector<int>{0, 0, 0, 1, 1, 1});
  CHECK(oracle::max_modularity(6, fixture::oracle_edges(g)) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("greedy on K4 keeps everything together") {
  const auto g = fixture::make_graph(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}});
  const auto p = greedy_communities(g);
  CHECK(p.community_count() == 1);
  CHECK(std::abs(p.q) <= 1e-15);
  CHECK(p.q <= oracle::max_modularity(4, fixture::oracle_edges(g)) + 1e-12);
}

TEST_CASE("singleton partition has negative modularity") {
  const auto g = fixture::two_triangles(true);
  const auto p = greedy_communities(g);
  std::vector<int> singletons(6);
  std::iota(singletons.begin(), singletons.end(), 0);
  CHECK(p.q_initial < 0);
  CHECK(std::abs(p.q_initial - oracle::modularity(6, fixture::oracle_edges(g), singletons)) <= 1e-12);
}

TEST_CASE("greedy against exhaustive search on small random graphs") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 30; ++trial) {
    const auto g = fixture::random_small_graph(rng);
    const auto edges = fixture::oracle_edges(g);
    const auto p = greedy_communities(g);
    CHECK(p.q <= oracle::max_modularity(g.node_count, edges) + 1e-12);
    CHECK(std::abs(p.q - oracle::modularity(g.node_count, edges, p.assignment)) <= 1e-12);
    CHECK(std::abs(p.q - modularity(g, p.assignment)) <= 1e-12);
    CHECK(modularity(g, std::vector<int>(g.node_count, 0)) == doctest::Approx(0.0).epsilon(1e-15));

    // contiguous ids numbered by first node
    int next = 0;
    for (int c : p.assignment) {
      CHECK(c <= next);
      if (c == next) ++next;
    }

    // every merge step reproduces from scratch
    std::vector<int> comm(g.node_count);
    std::iota(comm.begin(), comm.end(), 0);
    double q = p.q_initial;
    for (const auto& step : p.merge_history) {
      for (auto& c : comm)
        if (c == step.b) c = step.a;
      q += step.delta_q;
      CHECK(std::abs(oracle::modularity(g.node_count, edges, comm) - q) <= 1e-12);
      CHECK(std::abs(step.q_after - q) <= 1e-12);
    }
  }
}

TEST_CASE("community report") {
  const auto t = table_of({pair("a", 0, 3, 0.3), pair("b", 0, 2, 0.2), pair("a", 1, 2, 0.2), pair("c", 2, 1, 0.1),
                           pair("d", 2, 1, 0.1)});
  const auto net = build_network(t);
  const auto g = to_graph(net);
  const auto p = greedy_communities(g);
  const auto report = community_report(p, net);
  std::set<std::size_t> seen;
  double internal = 0;
  for (std::size_t i = 0; i < report.size(); ++i) {
    if (i) CHECK(report[i - 1].members.size() >= report[i].members.size());
    for (auto m : report[i].members) CHECK(seen.insert(m).second);
    internal += report[i].internal_edge_fraction;
  }
  CHECK(seen.size() == net.nodes.size());
  std::size_t inside = 0;
  for (const auto& e : g.edges) inside += p.assignment[e.a] == p.assignment[e.b];
  CHECK(internal == doctest::Approx(static_cast<double>(inside) / static_cast<double>(g.edges.size())));

  CommunityPartition all;
  all.assignment.assign(net.nodes.size(), 0);
  CHECK(community_report(all, net)[0].internal_edge_fraction == 1.0);
}

TEST_CASE("bipartite graph conversion") {
  const auto in = fixture::tmc_corpus(3);
  const auto b = core::export_bipartite(core::build_tmc_table(in.methods, in.topics));
  const auto g = to_graph(b, true);
  CHECK(g.node_count == b.nodes.size());
  CHECK(g.edges.size() == b.edges.size());
  const auto p = greedy_communities(g);
  CHECK(std::abs(p.q - modularity(g, p.assignment)) <= 1e-12);
}

TEST_CASE("csv writers") {
  const auto dir = fixture::scratch_dir("network_csv");
  const auto t = table_of({pair("a", 0, 3, 0.3), pair("b", 0, 2, 0.2)});
  const auto net = build_network(t);
  const auto p = greedy_communities(to_graph(net));
  write_communities_csv(dir / "comm.csv", net, p);
  write_history_csv(dir / "hist.csv", p);
  write_popularity_csv(dir / "top.csv", rank_popularity(t));
  auto slurp = [](const std::filesystem::path& f) {
    std::ifstream in(f);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  CHECK(slurp(dir / "comm.csv") == "node,community\na @ topic 0,0\nb @ topic 0,0\n");
  CHECK(slurp(dir / "hist.csv").rfind("step,a,b,delta_q,q_after\n1,0,1,", 0) == 0);
  CHECK(slurp(dir / "top.csv") == "rank,method,topic_id,d_ij,c_ij\n1,a,0,3,0.3\n2,b,0,2,0.2\n");
}
