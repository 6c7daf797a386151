#pragma once

#include <algorithm>
#include <queue>
#include <vector>

#include "effector/common.hpp"

namespace effector {

// Dinic max-flow on a dense capacity matrix (the cut graphs here are
// complete and tiny, so adjacency-matrix residuals are the simplest form).
class DenseMaxFlow {
 public:
  explicit DenseMaxFlow(int n) : n_(n), cap_(n * n, 0.0) {}

  void set_capacity(int u, int v, double c) { cap_[idx(u, v)] = c; }

  double max_flow(int s, int t) {
    res_ = cap_;
    double flow = 0.0;
    while (bfs_levels(s, t)) {
      iter_.assign(n_, 0);
      while (true) {
        double pushed = dfs_push(s, t, kInf);
        if (pushed <= 0.0) break;
        flow += pushed;
      }
    }
    return flow;
  }

  // Source side of the minimum cut after max_flow: nodes reachable from s in
  // the residual network.
  std::vector<char> source_side(int s) const {
    std::vector<char> seen(n_, 0);
    std::queue<int> q;
    q.push(s);
    seen[s] = 1;
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      for (int v = 0; v < n_; ++v) {
        if (!seen[v] && res_[idx(u, v)] > kResidualEps) {
          seen[v] = 1;
          q.push(v);
        }
      }
    }
    return seen;
  }

 private:
  static constexpr double kResidualEps = 1e-12;

  int idx(int u, int v) const { return u * n_ + v; }

  bool bfs_levels(int s, int t) {
    level_.assign(n_, -1);
    std::queue<int> q;
    level_[s] = 0;
    q.push(s);
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      for (int v = 0; v < n_; ++v) {
        if (level_[v] < 0 && res_[idx(u, v)] > kResidualEps) {
          level_[v] = level_[u] + 1;
          q.push(v);
        }
      }
    }
    return level_[t] >= 0;
  }

  double dfs_push(int u, int t, double limit) {
    if (u == t) return limit;
    for (int& v = iter_[u]; v < n_; ++v) {
      if (level_[v] != level_[u] + 1 || res_[idx(u, v)] <= kResidualEps)
        continue;
      double pushed = dfs_push(v, t, std::min(limit, res_[idx(u, v)]));
      if (pushed > 0.0) {
        res_[idx(u, v)] -= pushed;
        res_[idx(v, u)] += pushed;
        return pushed;
      }
    }
    return 0.0;
  }

  int n_;
  std::vector<double> cap_;
  std::vector<double> res_;
  std::vector<int> level_;
  std::vector<int> iter_;
};

}  // namespace effector
