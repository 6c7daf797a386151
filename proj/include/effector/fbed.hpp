#pragma once

#include <algorithm>
#include <vector>

#include "effector/common.hpp"
#include "effector/graph.hpp"
#include "effector/influence_distance.hpp"
#include "effector/mincut.hpp"

namespace effector {

// Complete weighted graph over X1 with
//   w(u,v) = lambda * d^k(u,v) + (1-lambda) * d^k(v, X0) / B.
// Summing over the cut (S, X1\S) with |S| = B reproduces the k-IDBED
// objective g_k(S) exactly: the /B cancels against the B rows of S.
struct CutGraph {
  std::vector<NodeId> nodes;  // X1 in index order
  std::vector<double> w;      // n x n row-major, +inf allowed, zero diagonal

  int size() const { return static_cast<int>(nodes.size()); }
  double at(int i, int j) const {
    return w[static_cast<std::size_t>(i) * nodes.size() + j];
  }

  // Saturating one-directional cut weight for a membership mask over local
  // indices (true = S1 side).
  double cut_weight(const std::vector<char>& in_s1) const {
    const int n = size();
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
      if (!in_s1[i]) continue;
      for (int j = 0; j < n; ++j) {
        if (in_s1[j]) continue;
        double x = at(i, j);
        if (x == kInf) return kInf;
        total += x;
      }
    }
    return total;
  }

  double cut_weight_of(const std::vector<NodeId>& s1) const {
    std::vector<char> mask(size(), 0);
    for (NodeId u : s1) mask[local(u)] = 1;
    return cut_weight(mask);
  }

  int local(NodeId u) const {
    auto it = std::lower_bound(nodes.begin(), nodes.end(), u);
    if (it == nodes.end() || *it != u)
      throw std::invalid_argument("node not in the cut graph");
    return static_cast<int>(it - nodes.begin());
  }
};

struct Partition {
  std::vector<NodeId> s1;
  std::vector<NodeId> s2;
};

inline CutGraph build_cut_graph(const ActivationState& state, int budget,
                                double lambda, const DistanceTable& dtable) {
  CutGraph g;
  g.nodes = state.active_nodes();
  const int n = g.size();
  if (budget < 1) throw std::invalid_argument("budget must be >= 1");
  const std::vector<NodeId> x0 = state.inactive_nodes();
  std::vector<double> to_x0(n);
  for (int j = 0; j < n; ++j) to_x0[j] = dtable.node_to_set(g.nodes[j], x0);
  g.w.assign(static_cast<std::size_t>(n) * n, 0.0);
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t i) {
    for (int j = 0; j < n; ++j) {
      if (static_cast<int>(i) == j) continue;
      double a = wmul(lambda, dtable.at(g.nodes[i], g.nodes[j]));
      double b = wmul((1.0 - lambda) / budget, to_x0[j]);
      g.w[i * n + j] = (a == kInf || b == kInf) ? kInf : a + b;
    }
  });
  return g;
}

namespace detail {

// Working state shared by the repair and exchange phases. Infinite weights
// are replaced with a sentinel strictly larger than the sum of all finite
// weights, so they behave as "avoid at all cost" inside the arithmetic.
struct CutSolver {
  int n = 0;
  double sentinel = 0.0;
  std::vector<double> ws;        // sentinel-domain weights
  std::vector<char> in_s1;
  int s1_count = 0;
  double cut = 0.0;              // maintained incrementally
  std::vector<double> out_to_s2;  // per node: sum of w(x, b), b in S2
  std::vector<double> in_from_s1; // per node: sum of w(a, x), a in S1

  CutSolver(const CutGraph& g, const std::vector<char>& mask) {
    n = g.size();
    double finite_sum = 0.0;
    for (double x : g.w)
      if (x != kInf) finite_sum += x;
    sentinel = finite_sum + 1.0;
    ws.resize(g.w.size());
    for (std::size_t i = 0; i < g.w.size(); ++i)
      ws[i] = g.w[i] == kInf ? sentinel : g.w[i];
    in_s1 = mask;
    recompute();
  }

  double at(int i, int j) const {
    return ws[static_cast<std::size_t>(i) * n + j];
  }

  void recompute() {
    s1_count = 0;
    cut = 0.0;
    out_to_s2.assign(n, 0.0);
    in_from_s1.assign(n, 0.0);
    for (int i = 0; i < n; ++i) s1_count += in_s1[i];
    for (int x = 0; x < n; ++x) {
      for (int b = 0; b < n; ++b)
        if (!in_s1[b]) out_to_s2[x] += at(x, b);
      for (int a = 0; a < n; ++a)
        if (in_s1[a]) in_from_s1[x] += at(a, x);
    }
    for (int i = 0; i < n; ++i)
      if (in_s1[i]) cut += out_to_s2[i];
  }

  double move_delta(int u) const {
    return in_s1[u] ? in_from_s1[u] - out_to_s2[u]
                    : out_to_s2[u] - in_from_s1[u];
  }

  void move(int u) {
    cut += move_delta(u);
    if (in_s1[u]) {
      in_s1[u] = 0;
      --s1_count;
      for (int x = 0; x < n; ++x) {
        out_to_s2[x] += at(x, u);
        in_from_s1[x] -= at(u, x);
      }
    } else {
      in_s1[u] = 1;
      ++s1_count;
      for (int x = 0; x < n; ++x) {
        out_to_s2[x] -= at(x, u);
        in_from_s1[x] += at(u, x);
      }
    }
  }

  // Cut-weight reduction from exchanging u1 (in S1) with u2 (in S2).
  double swap_gain(int u1, int u2) const {
    return out_to_s2[u1] - out_to_s2[u2] + in_from_s1[u2] - in_from_s1[u1] -
           at(u1, u2) - at(u2, u1);
  }

  void swap(int u1, int u2) {
    move(u1);
    move(u2);
  }
};

inline std::vector<char> partition_mask(const CutGraph& g, const Partition& p) {
  std::vector<char> mask(g.size(), 0);
  for (NodeId u : p.s1) mask[g.local(u)] = 1;
  return mask;
}

inline Partition mask_to_partition(const CutGraph& g,
                                   const std::vector<char>& mask) {
  Partition p;
  for (int i = 0; i < g.size(); ++i)
    (mask[i] ? p.s1 : p.s2).push_back(g.nodes[i]);
  return p;
}

}  // namespace detail

// Directed global minimum cut of the complete cut graph: pin node 0 and take
// the best of the s->t and t->s minimum cuts over every other node t
// (2(n-1) max-flow computations). Both sides of the result are non-empty.
inline Partition global_min_cut(const CutGraph& g) {
  const int n = g.size();
  if (n < 2) throw std::invalid_argument("min cut needs at least two nodes");
  detail::CutSolver solver(g, std::vector<char>(n, 0));
  DenseMaxFlow flow(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) flow.set_capacity(i, j, solver.at(i, j));

  std::vector<char> best_mask;
  double best = kInf;
  auto consider = [&](int src, int snk) {
    flow.max_flow(src, snk);
    std::vector<char> side = flow.source_side(src);
    // Evaluate the cut directly from the weights; the flow value itself is
    // only used to carve the partition.
    double value = 0.0;
    for (int i = 0; i < n; ++i) {
      if (!side[i]) continue;
      for (int j = 0; j < n; ++j)
        if (!side[j]) value += solver.at(i, j);
    }
    if (best_mask.empty() || value < best) {
      best = value;
      best_mask = std::move(side);
    }
  };
  for (int t = 1; t < n; ++t) {
    consider(0, t);
    consider(t, 0);
  }
  return detail::mask_to_partition(g, best_mask);
}

// Greedily move single nodes between sides, each step taking the move that
// minimizes the resulting cut weight, until |S1| == B.
inline Partition repair_size(const CutGraph& g, const Partition& p,
                             int budget) {
  detail::CutSolver solver(g, detail::partition_mask(g, p));
  while (solver.s1_count != budget) {
    bool shrink = solver.s1_count > budget;
    int best = -1;
    double best_delta = kInf;
    for (int u = 0; u < solver.n; ++u) {
      if (static_cast<bool>(solver.in_s1[u]) != shrink) continue;
      double d = solver.move_delta(u);
      if (best < 0 || d < best_delta) {
        best_delta = d;
        best = u;
      }
    }
    solver.move(best);
  }
  return detail::mask_to_partition(g, solver.in_s1);
}

// One improvement pass in the style of Kernighan-Lin: build a sequence of
// greedy locked pair swaps, commit the prefix with the best cumulative gain,
// repeat until no prefix improves. Only strictly positive gains (beyond
// kGainEps) are committed, so every round strictly decreases the cut.
inline constexpr double kFbedGainEps = 1e-9;

inline Partition exchange_improve(const CutGraph& g, const Partition& p,
                                  int* rounds_out = nullptr,
                                  bool* cap_hit_out = nullptr) {
  detail::CutSolver solver(g, detail::partition_mask(g, p));
  const int n = solver.n;
  const int b = solver.s1_count;
  const int seq_len = std::min(b, n - b);
  int rounds = 0;
  bool cap_hit = false;
  const int round_cap = n * n;
  if (seq_len > 0) {
    while (true) {
      if (rounds >= round_cap) {
        cap_hit = true;
        break;
      }
      std::vector<char> start_mask = solver.in_s1;
      std::vector<std::pair<int, int>> seq;
      std::vector<double> cum;
      std::vector<char> locked(n, 0);
      double running = 0.0;
      for (int step = 0; step < seq_len; ++step) {
        int bu = -1, bv = -1;
        double bg = -kInf;
        for (int u1 = 0; u1 < n; ++u1) {
          if (!solver.in_s1[u1] || locked[u1]) continue;
          for (int u2 = 0; u2 < n; ++u2) {
            if (solver.in_s1[u2] || locked[u2]) continue;
            double gain = solver.swap_gain(u1, u2);
            if (gain > bg) {
              bg = gain;
              bu = u1;
              bv = u2;
            }
          }
        }
        if (bu < 0) break;
        locked[bu] = locked[bv] = 1;
        solver.swap(bu, bv);
        seq.emplace_back(bu, bv);
        running += bg;
        cum.push_back(running);
      }
      int kstar = -1;
      double best_gain = 0.0;
      for (std::size_t i = 0; i < cum.size(); ++i) {
        if (cum[i] > best_gain) {
          best_gain = cum[i];
          kstar = static_cast<int>(i);
        }
      }
      // Rewind the speculative swaps, then re-apply the committed prefix.
      solver.in_s1 = start_mask;
      solver.recompute();
      if (kstar < 0 || best_gain <= kFbedGainEps) break;
      for (int i = 0; i <= kstar; ++i) solver.swap(seq[i].first, seq[i].second);
      ++rounds;
    }
  }
  if (rounds_out) *rounds_out = rounds;
  if (cap_hit_out) *cap_hit_out = cap_hit;
  return detail::mask_to_partition(g, solver.in_s1);
}

struct FbedTrace {
  double cut_after_mincut = kInf;  // saturating weights, +inf possible
  double cut_after_repair = kInf;
  double cut_after_exchange = kInf;
  int exchange_rounds = 0;
  bool round_cap_hit = false;
};

// Flow-based effector detection: min cut -> size repair -> pair exchange.
inline EffectorResult fbed(const ActivationState& state, int budget,
                           double lambda, const DistanceTable& dtable,
                           FbedTrace* trace = nullptr) {
  EffectorResult result;
  result.algorithm = "fbed";
  result.budget = budget;
  const std::vector<NodeId> x1 = state.active_nodes();
  const int n1 = static_cast<int>(x1.size());
  if (budget < 1 || budget > n1)
    throw std::invalid_argument("budget must satisfy 1 <= B <= N1");
  if (budget == n1) {  // empty complement
    result.members = x1;
    result.score = 0.0;
    return result;
  }
  CutGraph g = build_cut_graph(state, budget, lambda, dtable);
  Partition p = global_min_cut(g);
  if (trace) trace->cut_after_mincut = g.cut_weight_of(p.s1);
  p = repair_size(g, p, budget);
  if (trace) trace->cut_after_repair = g.cut_weight_of(p.s1);
  int rounds = 0;
  bool cap_hit = false;
  p = exchange_improve(g, p, &rounds, &cap_hit);
  result.members = p.s1;
  std::sort(result.members.begin(), result.members.end());
  result.score = g.cut_weight_of(result.members);
  if (trace) {
    trace->cut_after_exchange = result.score;
    trace->exchange_rounds = rounds;
    trace->round_cap_hit = cap_hit;
  }
  return result;
}

}  // namespace effector
