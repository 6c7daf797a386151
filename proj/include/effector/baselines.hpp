#pragma once

#include <algorithm>
#include <random>
#include <vector>

#include "effector/common.hpp"
#include "effector/graph.hpp"

namespace effector {

// Rank X1 by out-degree within the X1-induced subgraph, take the top B.
// Ties break toward lower node index.
inline EffectorResult out_degree_detect(const IcNetwork& net,
                                        const ActivationState& state,
                                        int budget) {
  EffectorResult result;
  result.algorithm = "outdegree";
  result.budget = budget;
  const std::vector<NodeId> x1 = state.active_nodes();
  if (budget < 1 || budget > static_cast<int>(x1.size()))
    throw std::invalid_argument("budget must satisfy 1 <= B <= N1");
  std::vector<std::pair<int, NodeId>> ranked;
  ranked.reserve(x1.size());
  for (NodeId u : x1) {
    int deg = 0;
    for (int e : net.out_edges(u)) deg += state.is_active(net.edge(e).dst);
    ranked.emplace_back(-deg, u);
  }
  std::sort(ranked.begin(), ranked.end());
  for (int i = 0; i < budget; ++i) result.members.push_back(ranked[i].second);
  std::sort(result.members.begin(), result.members.end());
  result.score = static_cast<double>(-ranked[0].first);
  return result;
}

// Uniform sample of B distinct active nodes; deterministic given the seed.
inline EffectorResult random_detect(const ActivationState& state, int budget,
                                    std::uint64_t seed) {
  EffectorResult result;
  result.algorithm = "random";
  result.budget = budget;
  std::vector<NodeId> pool = state.active_nodes();
  if (budget < 1 || budget > static_cast<int>(pool.size()))
    throw std::invalid_argument("budget must satisfy 1 <= B <= N1");
  std::mt19937_64 rng(seed);
  for (int i = 0; i < budget; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, pool.size() - 1);
    std::swap(pool[i], pool[pick(rng)]);
  }
  result.members.assign(pool.begin(), pool.begin() + budget);
  std::sort(result.members.begin(), result.members.end());
  result.score = 0.0;
  return result;
}

}  // namespace effector
