#pragma once

#include <vector>

#include "effector/common.hpp"

namespace effector {

// Square cost matrix, row-major; +inf marks a forbidden assignment.
struct MatchingSolution {
  bool feasible = false;
  double weight = 0.0;
  std::vector<int> row_to_col;
  std::vector<int> col_to_row;
};

// Minimum-weight perfect matching on a complete bipartite graph via the
// shortest-augmenting-path formulation with dual potentials, O(n^3).
// Infeasible (every perfect matching hits a forbidden entry) is reported
// rather than priced.
inline MatchingSolution min_perfect_matching(const std::vector<double>& cost,
                                             int n) {
  MatchingSolution sol;
  if (n == 0) {
    sol.feasible = true;
    return sol;
  }
  auto a = [&](int i, int j) -> double {
    return cost[static_cast<std::size_t>(i - 1) * n + (j - 1)];
  };
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, kInf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      int i0 = p[j0], j1 = -1;
      double delta = kInf;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        double c = a(i0, j);
        double cur = c == kInf ? kInf : c - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      if (j1 < 0) return sol;  // no augmenting path avoids forbidden entries
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    for (int j1; j0 != 0; j0 = j1) {
      j1 = way[j0];
      p[j0] = p[j1];
    }
  }
  sol.feasible = true;
  sol.row_to_col.assign(n, -1);
  sol.col_to_row.assign(n, -1);
  for (int j = 1; j <= n; ++j) {
    sol.col_to_row[j - 1] = p[j] - 1;
    sol.row_to_col[p[j] - 1] = j - 1;
    sol.weight += a(p[j], j);
  }
  return sol;
}

}  // namespace effector
