#pragma once

#include <algorithm>
#include <vector>

#include "effector/common.hpp"
#include "effector/graph.hpp"
#include "effector/influence_distance.hpp"
#include "effector/matching.hpp"

namespace effector {

// g_k(S) = lambda * d^k(S, X1\S) + (1 - lambda) * d^k(X1\S, X0),
// evaluated from a distance table whose sources cover X1 and whose targets
// cover all of V. S must be a subset of X1.
inline double idbed_objective(const ActivationState& state,
                              const std::vector<NodeId>& s, double lambda,
                              const DistanceTable& dtable) {
  std::vector<char> in_s(state.size(), 0);
  for (NodeId u : s) {
    if (!state.is_active(u))
      throw std::invalid_argument("effector candidate outside X1");
    in_s[u] = 1;
  }
  std::vector<NodeId> rest;
  for (NodeId u : state.active_nodes())
    if (!in_s[u]) rest.push_back(u);
  const std::vector<NodeId> x0 = state.inactive_nodes();
  double to_active = dtable.set_to_set(s, rest);
  double to_inactive = dtable.set_to_set(rest, x0);
  double a = wmul(lambda, to_active);
  double b = wmul(1.0 - lambda, to_inactive);
  if (a == kInf || b == kInf) return kInf;
  return a + b;
}

// Complete bipartite instance for an anchor pair (u, v): rows are the nodes
// of X1, the first B columns charge lambda*(N1-B)*d1(w,u), the remaining
// columns charge lambda*B*d1(v,w) + (1-lambda)*d1(w,X0).
struct BipartiteInstance {
  std::vector<NodeId> rows;  // X1 in index order
  NodeId anchor_u = -1;
  NodeId anchor_v = -1;
  int budget = 0;
  std::vector<double> weights;  // n1 x n1 row-major, +inf allowed

  double at(int row, int col) const {
    return weights[static_cast<std::size_t>(row) * rows.size() + col];
  }
};

struct MatchingResult {
  bool feasible = false;
  std::vector<int> assignment;      // row index -> column index
  std::vector<NodeId> matched_set;  // rows matched to columns 0..B-1
  double weight = 0.0;
  double selection_score = 0.0;  // weight + lambda*B*(N1-B)*d1(u,v)
};

inline BipartiteInstance build_bipartite(const ActivationState& state,
                                         NodeId u, NodeId v, int budget,
                                         double lambda,
                                         const DistanceTable& dtable,
                                         const std::vector<double>& dist_to_x0) {
  BipartiteInstance inst;
  inst.rows = state.active_nodes();
  const int n1 = static_cast<int>(inst.rows.size());
  if (budget < 1 || budget >= n1)
    throw std::invalid_argument("budget must satisfy 1 <= B < N1");
  if (!state.is_active(u) || !state.is_active(v))
    throw std::invalid_argument("anchors must be active");
  inst.anchor_u = u;
  inst.anchor_v = v;
  inst.budget = budget;
  inst.weights.resize(static_cast<std::size_t>(n1) * n1);
  for (int r = 0; r < n1; ++r) {
    NodeId w = inst.rows[r];
    double left = wmul(lambda * (n1 - budget), dtable.at(w, u));
    double from_v = wmul(lambda * budget, dtable.at(v, w));
    double to_x0 = wmul(1.0 - lambda, dist_to_x0[r]);
    double right = (from_v == kInf || to_x0 == kInf) ? kInf : from_v + to_x0;
    for (int c = 0; c < n1; ++c)
      inst.weights[static_cast<std::size_t>(r) * n1 + c] =
          c < budget ? left : right;
  }
  return inst;
}

// Convenience overload computing d1(w, X0) row sums on the fly.
inline BipartiteInstance build_bipartite(const ActivationState& state,
                                         NodeId u, NodeId v, int budget,
                                         double lambda,
                                         const DistanceTable& dtable) {
  const std::vector<NodeId> x1 = state.active_nodes();
  const std::vector<NodeId> x0 = state.inactive_nodes();
  std::vector<double> dist_to_x0(x1.size());
  for (std::size_t i = 0; i < x1.size(); ++i)
    dist_to_x0[i] = dtable.node_to_set(x1[i], x0);
  return build_bipartite(state, u, v, budget, lambda, dtable, dist_to_x0);
}

inline MatchingResult solve_bipartite(const BipartiteInstance& inst,
                                      double anchor_distance, double lambda) {
  const int n1 = static_cast<int>(inst.rows.size());
  MatchingResult res;
  MatchingSolution sol = min_perfect_matching(inst.weights, n1);
  if (!sol.feasible) return res;
  res.feasible = true;
  res.assignment = sol.row_to_col;
  res.weight = sol.weight;
  for (int r = 0; r < n1; ++r)
    if (sol.row_to_col[r] < inst.budget)
      res.matched_set.push_back(inst.rows[r]);
  std::sort(res.matched_set.begin(), res.matched_set.end());
  double pair_term =
      wmul(lambda * inst.budget * (n1 - inst.budget), anchor_distance);
  res.selection_score =
      (res.weight == kInf || pair_term == kInf) ? kInf : res.weight + pair_term;
  return res;
}

// Matching-based effector detection: scan every ordered anchor pair in X1,
// solve the bipartite matching, keep the candidate set with the smallest
// selection score. Ties resolve to the lexicographically first (u, v) pair.
inline EffectorResult mbed(const ActivationState& state, int budget,
                           double lambda, const DistanceTable& dtable) {
  EffectorResult result;
  result.algorithm = "mbed";
  result.budget = budget;
  const std::vector<NodeId> x1 = state.active_nodes();
  const int n1 = static_cast<int>(x1.size());
  if (budget < 1 || budget > n1)
    throw std::invalid_argument("budget must satisfy 1 <= B <= N1");
  if (budget == n1) {  // empty complement: g1 = 0 trivially
    result.members = x1;
    result.score = 0.0;
    return result;
  }
  const std::vector<NodeId> x0 = state.inactive_nodes();
  std::vector<double> dist_to_x0(x1.size());
  for (std::size_t i = 0; i < x1.size(); ++i)
    dist_to_x0[i] = dtable.node_to_set(x1[i], x0);

  struct PairOutcome {
    double score = kInf;
    std::vector<NodeId> members;
    bool feasible = false;
  };
  std::vector<std::pair<NodeId, NodeId>> pairs;
  pairs.reserve(static_cast<std::size_t>(n1) * (n1 - 1));
  for (NodeId u : x1)
    for (NodeId v : x1)
      if (u != v) pairs.emplace_back(u, v);
  std::vector<PairOutcome> outcomes(pairs.size());
  parallel_for(
      pairs.size(),
      [&](std::size_t i) {
        auto [u, v] = pairs[i];
        BipartiteInstance inst =
            build_bipartite(state, u, v, budget, lambda, dtable, dist_to_x0);
        MatchingResult mr = solve_bipartite(inst, dtable.at(u, v), lambda);
        if (!mr.feasible || mr.selection_score == kInf) return;
        outcomes[i].feasible = true;
        outcomes[i].score = mr.selection_score;
        outcomes[i].members = std::move(mr.matched_set);
      },
      /*grain=*/4);

  // Deterministic reduction: pairs are ordered by (u, v); strict improvement
  // keeps the first minimizer.
  std::size_t best = pairs.size();
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (!outcomes[i].feasible) continue;
    if (best == pairs.size() || outcomes[i].score < outcomes[best].score)
      best = i;
  }
  if (best == pairs.size()) {
    // Every anchor pair was infeasible (disconnected X1). Fall back to the B
    // nodes with the smallest row sums d1(w, X1\{w}).
    result.note = "no finite perfect matching for any anchor pair; "
                  "row-sum fallback used";
    std::vector<std::pair<double, NodeId>> ranked;
    for (NodeId w : x1) {
      double s = 0.0;
      for (NodeId v : x1) {
        if (v == w) continue;
        double d = dtable.at(w, v);
        if (d == kInf) {
          s = kInf;
          break;
        }
        s += d;
      }
      ranked.emplace_back(s, w);
    }
    std::sort(ranked.begin(), ranked.end());
    for (int i = 0; i < budget; ++i) result.members.push_back(ranked[i].second);
    std::sort(result.members.begin(), result.members.end());
    result.score = idbed_objective(state, result.members, lambda, dtable);
    return result;
  }
  result.members = outcomes[best].members;
  result.score = outcomes[best].score;
  return result;
}

}  // namespace effector
