#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <set>

#include "daaca/baselines.hpp"
#include "daaca/metrics.hpp"
#include "support.hpp"

using namespace daaca;
using testsupport::make_graph;

namespace {

bool connected(std::size_t n, const std::vector<Edge>& edges, const std::vector<char>& present) {
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
    return parent[x] == x ? x : parent[x] = find(parent[x]);
  };
  for (auto [a, b] : edges) parent[find(a)] = find(b);
  std::size_t root = n;
  for (std::size_t i = 0; i < n; ++i) {
    if (!present[i]) continue;
    if (root == n) root = find(i);
    if (find(i) != root) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("hop counts") {
  auto g = make_graph({{0, 0}, {8, 0}, {16, 0}, {24, 0}, {60, 60}});
  auto h = compute_hop_counts(g);
  CHECK(h[0] == 0);
  CHECK(h[1] == 1);
  CHECK(h[2] == 2);
  CHECK(h[3] == 3);
  CHECK(h[4] == kUnreachable);
  CHECK(h.eccentricity() == 3);
}

TEST_CASE("MST on a line keeps the short edges") {
  auto g = make_graph({{0, 0}, {1, 0}, {2, 0}});
  auto t = build_global_mst(g, pedap_weight(g, EnergyModelParams{}));
  CHECK(t.parent[1] == 0);
  CHECK(t.parent[2] == 1);
  CHECK(t.parent[0] == kNoNode);
}

TEST_CASE("MST matches exhaustive search") {
  EnergyModelParams em;
  RngStream rng(2024);
  int graphs = 0;
  while (graphs < 200) {
    const std::size_t n = 3 + rng.below(6);
    std::vector<Position> pts(n);
    for (auto& p : pts) p = {rng.uniform(0, 12), rng.uniform(0, 12)};
    NetworkGraph g(pts, 0, 10.0, 12, 12, 10.0);
    std::vector<Edge> all;
    for (NodeId i = 0; i < n; ++i) {
      for (NodeId j : g.neighbors(i)) {
        if (i < j) all.emplace_back(i, j);
      }
    }
    std::vector<char> present(n, 1);
    if (!connected(n, all, present)) continue;
    ++graphs;
    auto w = pedap_weight(g, em);
    // every subset of n-1 edges that connects the graph is a spanning tree
    double best = INFINITY;
    const std::size_t m = all.size();
    std::vector<char> pick(m, 0);
    std::fill(pick.end() - static_cast<std::ptrdiff_t>(n - 1), pick.end(), 1);
    do {
      std::vector<Edge> subset;
      double total = 0;
      for (std::size_t k = 0; k < m; ++k) {
        if (pick[k]) {
          subset.push_back(all[k]);
          total += w(all[k].first, all[k].second);
        }
      }
      if (total < best && connected(n, subset, present)) best = total;
    } while (std::next_permutation(pick.begin(), pick.end()));
    auto tree = build_global_mst(g, w);
    CHECK(tree.links().size() == n - 1);
    CHECK(tree.total_weight(w) == doctest::Approx(best).epsilon(1e-12));
  }
}

TEST_CASE("PEDAP-PA routes around a drained relay") {
  EnergyModelParams em;
  // Two relays between source 3 and the sink; relay 1 is slightly better placed.
  auto g = make_graph({{0, 0}, {7, 1}, {7, -1.5}, {14, 0}});
  auto w = pedap_pa_weight(g, em);
  const double base = w(1, 3);
  auto t = build_global_mst(g, w);
  CHECK(t.parent[3] == 1);
  g.node(1).energy = 5.0;
  CHECK(w(1, 3) == doctest::Approx(2 * base).epsilon(1e-12));
  t = build_global_mst(g, w);
  CHECK(t.parent[3] == 2);
}

TEST_CASE("LMST drops the longest edge of a triangle") {
  auto g = make_graph({{0, 0}, {3, 0}, {0, 4}});
  auto e = build_lmst(g, pedap_weight(g, EnergyModelParams{}));
  std::sort(e.begin(), e.end());
  CHECK(e == std::vector<Edge>{{0, 1}, {0, 2}});
}

TEST_CASE("RNG geometry") {
  SUBCASE("equilateral triangle keeps all edges") {
    auto g = make_graph({{0, 0}, {4, 0}, {2, 2 * std::sqrt(3.0)}});
    CHECK(build_rng(g).size() == 3);
  }
  SUBCASE("square loses its diagonals") {
    auto g = make_graph({{0, 0}, {5, 0}, {5, 5}, {0, 5}});
    auto e = build_rng(g);
    std::sort(e.begin(), e.end());
    CHECK(e == std::vector<Edge>{{0, 1}, {0, 3}, {1, 2}, {2, 3}});
  }
}

TEST_CASE("sparse structures stay connected") {
  EnergyModelParams em;
  int checked = 0;
  for (std::uint64_t seed = 1; checked < 50; ++seed) {
    RngStream rng(seed);
    auto g = deploy_random({30, 25, 25, 10, 10, SinkPlacement::Center}, rng);
    std::vector<Edge> vis;
    for (NodeId i = 0; i < g.size(); ++i) {
      for (NodeId j : g.neighbors(i)) {
        if (i < j) vis.emplace_back(i, j);
      }
    }
    std::vector<char> present(g.size(), 1);
    if (!connected(g.size(), vis, present)) continue;
    ++checked;
    auto rng_edges = build_rng(g);
    auto lmst = build_lmst(g, pedap_pa_weight(g, em));
    CHECK(connected(g.size(), rng_edges, present));
    CHECK(connected(g.size(), lmst, present));
    std::set<Edge> vis_set(vis.begin(), vis.end());
    for (auto e : lmst) CHECK(vis_set.count(e) == 1);
    // LMST is a subgraph of the RNG
    std::set<Edge> rng_set(rng_edges.begin(), rng_edges.end());
    for (auto e : lmst) CHECK(rng_set.count(e) == 1);

    auto topo = build_l_pedap(g, pedap_pa_weight(g, em));
    std::set<Edge> s(topo.structure.begin(), topo.structure.end());
    for (auto [c, p] : topo.tree.links()) CHECK(s.count(make_edge(c, p)) == 1);
    CHECK(topo.tree.links().size() == g.size() - 1);
  }
}

TEST_CASE("aggregation trees are sink-rooted forests") {
  EnergyModelParams em;
  RngStream rng(77);
  auto g = deploy_random({200, 40, 50, 10, 10, SinkPlacement::Center}, rng);
  auto w = pedap_pa_weight(g, em);
  for (const auto& tree : {build_global_mst(g, w), shortest_path_tree(g, build_lmst(g, w), w),
                           build_l_pedap(g, w).tree}) {
    CHECK(is_sink_forest(g, tree.links()));
    for (NodeId i = 0; i < g.size(); ++i) {
      if (i == g.sink()) continue;
      CHECK((tree.parent[i] != kNoNode) == static_cast<bool>(tree.reachable[i]));
    }
  }
}

TEST_CASE("ACA probabilities") {
  SUBCASE("hop weights") {
    // node 4 hears node 1 (hop 1) and node 3 (hop 3)
    auto g = make_graph({{0, 0}, {8, 0}, {16, 0}, {24, 0}, {16, 6}});
    AcaState st(g, AcaParams{});
    REQUIRE(st.hops[4] == 2);
    const auto c = aca_probability(g, 4, st, [](NodeId j) { return j == 2; });
    REQUIRE(c.size() == 2);
    CHECK(c[0].neighbor == 1);
    CHECK(c[0].prob == doctest::Approx(0.8).epsilon(1e-12));
    CHECK(c[1].prob == doctest::Approx(0.2).epsilon(1e-12));
  }
  SUBCASE("uniform when hops and pheromone match") {
    auto g = make_graph({{0, 0}, {5, 5}, {5, -5}, {10.5, 0}});
    AcaState st(g, AcaParams{});
    const auto c = aca_probability(g, 3, st);
    double sum = 0;
    for (const auto& x : c) sum += x.prob;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(c[0].prob == doctest::Approx(0.5));
  }
  SUBCASE("dead end") {
    auto g = make_graph({{0, 0}, {8, 0}});
    AcaState st(g, AcaParams{});
    CHECK_THROWS_AS(aca_probability(g, 1, st, [](NodeId) { return true; }), DeadEnd);
  }
}

TEST_CASE("ACA feedback") {
  auto g = make_graph({{24, 0}, {16, 0}, {8, 0}, {0, 0}});  // sink first, source 3
  SUBCASE("three hops, three deposits") {
    AcaState st(g, AcaParams{});
    REQUIRE(st.ttl == 6);
    const std::vector<NodeId> path = {3, 2, 1, 0};
    const auto links = aca_feedback_deposit(g, path, st);
    CHECK(links.size() == 3);
    CHECK(st.pheromone(g, 3, 2) == doctest::Approx(1.05));
    CHECK(st.pheromone(g, 1, 0) == doctest::Approx(1.05));
  }
  SUBCASE("no slack, no feedback") {
    AcaParams p;
    p.ttl = 3;
    AcaState st(g, p);
    const std::vector<NodeId> path = {3, 2, 1, 0};
    CHECK(aca_feedback_deposit(g, path, st).empty());
  }
  SUBCASE("idle links evaporate") {
    AcaState st(g, AcaParams{});
    std::vector<Link> used = {{3, 2}};
    std::size_t ev = 0;
    for (int r = 0; r < 4; ++r) ev = aca_idle_evaporation(g, used, st, 4);
    CHECK(ev > 0);
    CHECK(st.pheromone(g, 2, 1) == doctest::Approx(0.7));
    CHECK(st.pheromone(g, 3, 2) == doctest::Approx(1.0));
  }
}
