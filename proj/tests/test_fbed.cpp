#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "test_util.hpp"

using namespace effector;

namespace {

DistanceTable full_table(const IcNetwork& net, const ActivationState& state,
                         int k) {
  return compute_distance_table(net, state.active_nodes(),
                                testutil::all_nodes(net), k);
}

CutGraph explicit_cut_graph(const std::vector<NodeId>& nodes,
                            const std::vector<double>& w) {
  CutGraph g;
  g.nodes = nodes;
  g.w = w;
  return g;
}

}  // namespace

TEST_CASE("cut weights follow the distance formula") {
  std::mt19937_64 rng(67);
  IcNetwork net = testutil::strongly_connected_digraph(6, 0.3, rng);
  ActivationState state(6, {0, 1, 2});
  const std::vector<NodeId> x0 = state.inactive_nodes();
  for (int k : {1, 3}) {
    DistanceTable t = full_table(net, state, k);
    int b = 1;
    CutGraph g = build_cut_graph(state, b, 0.4, t);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        if (i == j) continue;
        double expect = 0.4 * t.at(g.nodes[i], g.nodes[j]) +
                        0.6 * t.node_to_set(g.nodes[j], x0) / b;
        CHECK(g.at(i, j) == Catch::Approx(expect).margin(1e-12));
      }
    // lambda = 1 collapses to the raw distances
    CutGraph pure = build_cut_graph(state, b, 1.0, t);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        if (i != j)
          CHECK(pure.at(i, j) ==
                Catch::Approx(t.at(g.nodes[i], g.nodes[j])).margin(1e-12));
  }
}

TEST_CASE("cut weight equals the objective for budget-sized sets") {
  std::mt19937_64 rng(71);
  for (int it = 0; it < 25; ++it) {
    int n = 6 + static_cast<int>(rng() % 4);
    int n1 = 4 + static_cast<int>(rng() % 2);
    IcNetwork net = testutil::strongly_connected_digraph(n, 0.25, rng);
    ActivationState state = testutil::random_state(n, n1, rng);
    int k = it % 2 == 0 ? 1 : 3;
    int b = 1 + static_cast<int>(rng() % (n1 - 1));
    double lambda = 0.5;
    DistanceTable t = full_table(net, state, k);
    CutGraph g = build_cut_graph(state, b, lambda, t);
    const std::vector<NodeId> x1 = state.active_nodes();
    std::vector<NodeId> s(x1.begin(), x1.begin() + b);
    double cut = g.cut_weight_of(s);
    double obj = testutil::gk_oracle(state, s, lambda, t);
    CHECK(std::abs(cut - obj) <= 1e-9);
  }
}

TEST_CASE("two-node global min cut picks the cheaper direction") {
  CutGraph g = explicit_cut_graph({0, 1}, {0, 3, 1, 0});
  Partition p = global_min_cut(g);
  CHECK(p.s1 == std::vector<NodeId>{1});
  CHECK(p.s2 == std::vector<NodeId>{0});
  CHECK(g.cut_weight_of(p.s1) == 1.0);
}

TEST_CASE("global min cut matches the bipartition oracle") {
  std::mt19937_64 rng(73);
  std::uniform_real_distribution<double> val(0.0, 5.0);
  for (int it = 0; it < 30; ++it) {
    int n = 3 + static_cast<int>(rng() % 6);
    std::vector<double> w(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j) w[static_cast<std::size_t>(i) * n + j] = val(rng);
    std::vector<NodeId> nodes(n);
    std::iota(nodes.begin(), nodes.end(), 0);
    CutGraph g = explicit_cut_graph(nodes, w);
    Partition p = global_min_cut(g);
    REQUIRE_FALSE(p.s1.empty());
    REQUIRE_FALSE(p.s2.empty());
    CHECK(g.cut_weight_of(p.s1) ==
          Catch::Approx(testutil::min_bipartition_oracle(g)).margin(1e-9));
  }
}

TEST_CASE("a node with zero outgoing weight forms a free cut") {
  std::vector<double> w{0, 0, 0,
                        4, 0, 4,
                        4, 4, 0};
  CutGraph g = explicit_cut_graph({0, 1, 2}, w);
  Partition p = global_min_cut(g);
  CHECK(g.cut_weight_of(p.s1) == 0.0);
  CHECK(p.s1 == std::vector<NodeId>{0});
}

TEST_CASE("repair leaves a correctly sized partition alone") {
  CutGraph g = explicit_cut_graph({0, 1}, {0, 1, 2, 0});
  Partition p{{0}, {1}};
  Partition q = repair_size(g, p, 1);
  CHECK(q.s1 == p.s1);
}

TEST_CASE("repair picks the single move the oracle picks") {
  std::mt19937_64 rng(79);
  std::uniform_real_distribution<double> val(0.0, 5.0);
  for (int it = 0; it < 30; ++it) {
    int n = 4 + static_cast<int>(rng() % 5);
    std::vector<double> w(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j) w[static_cast<std::size_t>(i) * n + j] = val(rng);
    std::vector<NodeId> nodes(n);
    std::iota(nodes.begin(), nodes.end(), 0);
    CutGraph g = explicit_cut_graph(nodes, w);
    int start = 2 + static_cast<int>(rng() % (n - 2));
    Partition p;
    for (int i = 0; i < n; ++i) (i < start ? p.s1 : p.s2).push_back(i);
    Partition q = repair_size(g, p, start - 1);
    REQUIRE(q.s1.size() == static_cast<std::size_t>(start - 1));
    // enumerate all single removals; the result must be one of the best
    double best = kInf;
    for (int drop = 0; drop < start; ++drop) {
      std::vector<NodeId> s1;
      for (int i = 0; i < start; ++i)
        if (i != drop) s1.push_back(i);
      best = std::min(best, g.cut_weight_of(s1));
    }
    CHECK(g.cut_weight_of(q.s1) == Catch::Approx(best).margin(1e-9));
  }
}

TEST_CASE("repair reaches the budget from far away") {
  std::mt19937_64 rng(83);
  std::uniform_real_distribution<double> val(0.0, 5.0);
  int n = 6;
  std::vector<double> w(36, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) w[static_cast<std::size_t>(i) * n + j] = val(rng);
  CutGraph g = explicit_cut_graph({0, 1, 2, 3, 4, 5}, w);
  Partition p{{0, 1, 2}, {3, 4, 5}};
  Partition q = repair_size(g, p, 1);
  CHECK(q.s1.size() == 1);
  CHECK(q.s2.size() == 5);
}

TEST_CASE("locally optimal partitions survive an exchange pass") {
  // strongly asymmetric weights: {0} vs {1,2} is optimal for B = 1
  std::vector<double> w{0, 0.1, 0.1,
                        5, 0,   5,
                        5, 5,   0};
  CutGraph g = explicit_cut_graph({0, 1, 2}, w);
  Partition p{{0}, {1, 2}};
  Partition q = exchange_improve(g, p);
  CHECK(q.s1 == p.s1);
}

TEST_CASE("an improving swap is committed") {
  // start from the bad side: swapping 1 for 0 reduces the cut
  std::vector<double> w{0, 0.1, 0.1,
                        5, 0,   5,
                        5, 5,   0};
  CutGraph g = explicit_cut_graph({0, 1, 2}, w);
  Partition p{{1}, {0, 2}};
  Partition q = exchange_improve(g, p);
  CHECK(q.s1 == std::vector<NodeId>{0});
  CHECK(g.cut_weight_of(q.s1) < g.cut_weight_of(p.s1));
}

TEST_CASE("prefix commits ride out a negative first gain") {
  // every single swap worsens the cut, yet the double swap is much better
  const double big = 6.0, out = 2.5, back = 0.25;
  std::vector<double> w{
      0,   big, out, out,
      big, 0,   out, out,
      back, back, 0,   big,
      back, back, big, 0,
  };
  CutGraph g = explicit_cut_graph({0, 1, 2, 3}, w);
  Partition p{{0, 1}, {2, 3}};
  REQUIRE(g.cut_weight_of(p.s1) == Catch::Approx(4 * out));
  // single swaps all worsen
  for (NodeId a : {0, 1})
    for (NodeId b : {2, 3}) {
      std::vector<NodeId> s1;
      for (NodeId u : p.s1)
        if (u != a) s1.push_back(u);
      s1.push_back(b);
      CHECK(g.cut_weight_of(s1) > g.cut_weight_of(p.s1));
    }
  Partition q = exchange_improve(g, p);
  std::sort(q.s1.begin(), q.s1.end());
  CHECK(q.s1 == std::vector<NodeId>{2, 3});
  CHECK(g.cut_weight_of(q.s1) == Catch::Approx(4 * back));
}

TEST_CASE("pipeline output is feasible, monotone and locally optimal") {
  std::mt19937_64 rng(89);
  for (int it = 0; it < 20; ++it) {
    int n = 7 + static_cast<int>(rng() % 4);
    int n1 = 4 + static_cast<int>(rng() % 3);
    IcNetwork net = testutil::strongly_connected_digraph(n, 0.3, rng);
    ActivationState state = testutil::random_state(n, n1, rng);
    int k = 3;
    int b = 1 + static_cast<int>(rng() % (n1 - 1));
    DistanceTable t = full_table(net, state, k);
    FbedTrace trace;
    EffectorResult res = fbed(state, b, 0.5, t, &trace);
    REQUIRE(static_cast<int>(res.members.size()) == b);
    for (NodeId u : res.members) CHECK(state.is_active(u));
    CHECK(trace.cut_after_exchange <= trace.cut_after_repair + 1e-9);
    CHECK_FALSE(trace.round_cap_hit);
    // no single swap improves by more than the tolerance
    CutGraph g = build_cut_graph(state, b, 0.5, t);
    std::vector<NodeId> s2;
    for (NodeId u : state.active_nodes())
      if (std::find(res.members.begin(), res.members.end(), u) ==
          res.members.end())
        s2.push_back(u);
    double final_cut = g.cut_weight_of(res.members);
    for (NodeId a : res.members)
      for (NodeId c : s2) {
        std::vector<NodeId> swapped;
        for (NodeId u : res.members)
          if (u != a) swapped.push_back(u);
        swapped.push_back(c);
        CHECK(g.cut_weight_of(swapped) >= final_cut - 1e-9);
      }
    // sanity: never better than the exhaustive optimum
    double best = kInf;
    testutil::for_each_subset(n1, b, [&](const auto& idx) {
      std::vector<NodeId> s;
      for (int i : idx) s.push_back(state.active_nodes()[i]);
      best = std::min(best, g.cut_weight_of(s));
    });
    CHECK(final_cut >= best - 1e-9);
  }
}

TEST_CASE("a node that cannot influence anything is left out") {
  // 3 reaches nothing cheaply, everyone reaches 3; optimum excludes it
  IcNetwork net = testutil::make_net(5, {{0, 1, 0.9}, {1, 0, 0.9},
                                         {1, 2, 0.9}, {2, 1, 0.9},
                                         {2, 0, 0.9}, {0, 2, 0.9},
                                         {0, 3, 0.9}, {1, 3, 0.9},
                                         {2, 3, 0.9},
                                         {3, 0, 0.01},
                                         {2, 4, 0.5}, {3, 4, 0.5}});
  ActivationState state(5, {0, 1, 2, 3});
  DistanceTable t = full_table(net, state, 3);
  CutGraph g = build_cut_graph(state, 3, 0.5, t);
  double best = kInf;
  std::vector<NodeId> best_s;
  testutil::for_each_subset(4, 3, [&](const auto& idx) {
    std::vector<NodeId> s;
    for (int i : idx) s.push_back(state.active_nodes()[i]);
    double c = g.cut_weight_of(s);
    if (c < best) {
      best = c;
      best_s = s;
    }
  });
  REQUIRE(best_s == std::vector<NodeId>{0, 1, 2});
  EffectorResult res = fbed(state, 3, 0.5, t);
  CHECK(res.members == std::vector<NodeId>{0, 1, 2});
}

TEST_CASE("budget equal to the active count is trivial") {
  IcNetwork net = testutil::make_net(3, {{0, 1, 0.5}, {1, 2, 0.5}});
  ActivationState state(3, {0, 1});
  DistanceTable t = full_table(net, state, 1);
  EffectorResult res = fbed(state, 2, 0.5, t);
  CHECK(res.members == std::vector<NodeId>{0, 1});
  CHECK(res.score == 0.0);
}
