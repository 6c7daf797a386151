#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>
#include <sstream>

#include "test_util.hpp"

using namespace effector;

TEST_CASE("max diffusion path prefers the higher product") {
  IcNetwork net =
      testutil::make_net(3, {{0, 1, 0.5}, {1, 2, 0.4}, {0, 2, 0.1}});
  auto path = max_diffusion_path(net, 0, 2);
  REQUIRE(path.has_value());
  CHECK(path->edges.size() == 2);  // 0.5 * 0.4 = 0.2 beats 0.1
  CHECK(path->prob == Catch::Approx(0.2).margin(1e-15));
}

TEST_CASE("unit probabilities tie-break on hop count") {
  IcNetwork net = testutil::make_net(
      3, {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}});
  auto path = max_diffusion_path(net, 0, 2);
  REQUIRE(path.has_value());
  CHECK(path->prob == 1.0);
  CHECK(path->edges.size() == 1);
}

TEST_CASE("unreachable target yields no path") {
  IcNetwork net = testutil::make_net(3, {{0, 1, 0.9}});
  CHECK_FALSE(max_diffusion_path(net, 0, 2).has_value());
  CHECK_FALSE(max_diffusion_path(net, 1, 0).has_value());
}

TEST_CASE("zero-probability edges are never used") {
  IcNetwork net = testutil::make_net(2, {{0, 1, 0.0}});
  CHECK_FALSE(max_diffusion_path(net, 0, 1).has_value());
}

TEST_CASE("k-max path set on the diamond") {
  IcNetwork net = testutil::make_net(
      4, {{0, 1, 0.5}, {1, 3, 0.5}, {0, 2, 0.5}, {2, 3, 0.5}});
  PathSet ps = k_max_path_set(net, 0, 3, 2);
  REQUIRE(ps.paths.size() == 2);
  CHECK(ps.paths[0].prob == Catch::Approx(0.25).margin(1e-15));
  CHECK(ps.paths[1].prob == Catch::Approx(0.25).margin(1e-15));
}

TEST_CASE("path set stops at exhaustion") {
  IcNetwork net = testutil::make_net(3, {{0, 1, 0.5}, {1, 2, 0.5}});
  PathSet ps = k_max_path_set(net, 0, 2, 3);
  CHECK(ps.paths.size() == 1);
  PathSet none = k_max_path_set(net, 2, 0, 3);
  CHECK(none.paths.empty());
}

TEST_CASE("influence distance of frozen path sets") {
  PathSet single;
  single.paths.push_back({{}, 0.25});
  CHECK(influence_distance(single) ==
        Catch::Approx(1.3862943611198906).margin(1e-12));

  PathSet twin;
  twin.paths.push_back({{}, 0.25});
  twin.paths.push_back({{}, 0.25});
  CHECK(influence_distance(twin) ==
        Catch::Approx(0.826678573184468).margin(1e-12));

  PathSet sure;
  sure.paths.push_back({{}, 1.0});
  CHECK(influence_distance(sure) == 0.0);

  PathSet empty;
  CHECK(influence_distance(empty) == kInf);
}

TEST_CASE("distance table basics and aggregates") {
  IcNetwork net = testutil::make_net(
      3, {{0, 2, std::exp(-1.0)}, {1, 2, std::exp(-1.0)}});
  DistanceTable t =
      compute_distance_table(net, {0, 1, 2}, {0, 1, 2}, 1);
  CHECK(t.at(0, 0) == 0.0);
  CHECK(t.at(0, 2) == Catch::Approx(1.0).margin(1e-12));
  CHECK(t.set_to_node({0, 1}, 2) == Catch::Approx(2.0).margin(1e-12));
  CHECK(t.at(0, 1) == kInf);
  CHECK(t.set_to_set({0, 1}, {1, 2}) == kInf);
}

TEST_CASE("triangle inequality holds at k = 1") {
  std::mt19937_64 rng(23);
  for (int it = 0; it < 20; ++it) {
    IcNetwork net = testutil::random_digraph(12, 0.25, rng);
    auto nodes = testutil::all_nodes(net);
    DistanceTable t = compute_distance_table(net, nodes, nodes, 1);
    for (NodeId u = 0; u < 12; ++u)
      for (NodeId v = 0; v < 12; ++v)
        for (NodeId w = 0; w < 12; ++w) {
          double lhs = t.at(u, v) + t.at(v, w);
          if (lhs == kInf) continue;
          CHECK(lhs >= t.at(u, w) - 1e-9);
        }
  }
}

TEST_CASE("deeper path sets never increase the distance") {
  std::mt19937_64 rng(29);
  for (int it = 0; it < 25; ++it) {
    IcNetwork net = testutil::random_digraph(10, 0.35, rng);
    std::uniform_int_distribution<int> pick(0, 9);
    NodeId u = pick(rng), v = pick(rng);
    if (u == v) continue;
    double prev = kInf;
    for (int k = 1; k <= 4; ++k) {
      double d = influence_distance(k_max_path_set(net, u, v, k));
      if (prev != kInf) CHECK(d <= prev + 1e-12);
      prev = d;
    }
  }
}

TEST_CASE("paths in a set share no edge") {
  std::mt19937_64 rng(31);
  for (int it = 0; it < 30; ++it) {
    IcNetwork net = testutil::random_digraph(10, 0.4, rng);
    std::uniform_int_distribution<int> pick(0, 9);
    PathSet ps = k_max_path_set(net, pick(rng), pick(rng), 4);
    std::set<int> seen;
    for (const auto& p : ps.paths)
      for (int e : p.edges) CHECK(seen.insert(e).second);
    for (std::size_t i = 1; i < ps.paths.size(); ++i)
      CHECK(ps.paths[i].prob <= ps.paths[i - 1].prob + 1e-12);
  }
}

TEST_CASE("success probability lower-bounds the activation probability") {
  std::mt19937_64 rng(37);
  int tested = 0;
  while (tested < 6) {
    IcNetwork net = testutil::random_digraph(5, 0.5, rng);
    if (net.edge_count() > 12 || net.edge_count() == 0) continue;
    ++tested;
    std::vector<double> alpha = estimate_alpha(net, {0}, 100000, tested);
    for (NodeId v = 1; v < net.node_count(); ++v) {
      double d = influence_distance(k_max_path_set(net, 0, v, 3));
      // exp(-d) is the probability that some path in the set fires
      double lower = d == kInf ? 0.0 : std::exp(-d);
      CHECK(lower <= alpha[v] + 0.01);
    }
  }
}

TEST_CASE("distance CSV uses the inf literal") {
  IcNetwork net = testutil::make_net(2, {{0, 1, std::exp(-2.0)}});
  DistanceTable t = compute_distance_table(net, {0, 1}, {0, 1}, 1);
  std::ostringstream os;
  dump_distances_csv(os, t, net);
  std::string text = os.str();
  CHECK(text.rfind("u,v,k,distance\n", 0) == 0);
  CHECK(text.find("0,1,1,2\n") != std::string::npos);
  CHECK(text.find("1,0,1,inf\n") != std::string::npos);
}
