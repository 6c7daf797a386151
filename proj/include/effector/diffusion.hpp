#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "effector/common.hpp"
#include "effector/graph.hpp"

namespace effector {

struct DiffusionOutcome {
  ActivationState final_state;
  int rounds = 0;
};

struct MetricEstimate {
  double mean = 0.0;
  double stderr_ = 0.0;
  int trials = 0;
};

// Edge coins are a pure function of (stream seed, edge index): an edge gets
// the same outcome no matter when its tail activates, which is equivalent to
// pre-flipping every coin. This makes runs with a shared seed comparable
// across seed sets (identical coins => the active set of S is contained in
// the active set of any superset of S).
inline bool edge_coin(std::uint64_t stream_seed, int edge_index, double p) {
  return u01(splitmix64(stream_seed ^
                        (static_cast<std::uint64_t>(edge_index) *
                         0x9e3779b97f4a7c15ULL))) < p;
}

// One IC realization: newly activated nodes try each out-edge to an inactive
// neighbor exactly once; stops when a round activates nobody.
inline DiffusionOutcome simulate_once(const IcNetwork& net,
                                      const std::vector<NodeId>& seeds,
                                      std::uint64_t stream_seed) {
  DiffusionOutcome out;
  out.final_state = ActivationState(net.node_count());
  std::vector<NodeId> frontier;
  for (NodeId s : seeds) {
    if (!out.final_state.bits[s]) {
      out.final_state.bits[s] = 1;
      frontier.push_back(s);
    }
  }
  std::vector<NodeId> next;
  while (!frontier.empty()) {
    next.clear();
    for (NodeId u : frontier) {
      for (int e : net.out_edges(u)) {
        const Edge& ed = net.edge(e);
        if (out.final_state.bits[ed.dst]) continue;
        if (edge_coin(stream_seed, e, ed.prob)) {
          out.final_state.bits[ed.dst] = 1;
          next.push_back(ed.dst);
        }
      }
    }
    if (next.empty()) break;
    ++out.rounds;
    frontier.swap(next);
  }
  return out;
}

// Empirical activation frequency per node; exactly 1 for seeds.
// Trial t uses the stream derive_seed(master_seed, t); tallies are integers
// merged in chunk order, so parallel and serial runs agree bit-for-bit.
inline std::vector<double> estimate_alpha(const IcNetwork& net,
                                          const std::vector<NodeId>& seeds,
                                          int trials,
                                          std::uint64_t master_seed) {
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  std::vector<std::uint64_t> counts(net.node_count(), 0);
  int nthreads =
      std::max<std::size_t>(1, std::thread::hardware_concurrency());
  std::vector<std::vector<std::uint64_t>> partial(
      nthreads, std::vector<std::uint64_t>(net.node_count(), 0));
  parallel_for(static_cast<std::size_t>(nthreads), [&](std::size_t chunk) {
    auto& local = partial[chunk];
    for (int t = static_cast<int>(chunk); t < trials; t += nthreads) {
      DiffusionOutcome out =
          simulate_once(net, seeds, derive_seed(master_seed, t));
      for (NodeId u = 0; u < net.node_count(); ++u)
        local[u] += out.final_state.bits[u];
    }
  });
  for (auto& local : partial)
    for (NodeId u = 0; u < net.node_count(); ++u) counts[u] += local[u];
  std::vector<double> alpha(net.node_count());
  for (NodeId u = 0; u < net.node_count(); ++u)
    alpha[u] = static_cast<double>(counts[u]) / trials;
  return alpha;
}

// f1(S): mean Hamming distance between the target state and the realized
// final state, over `trials` simulations.
inline MetricEstimate estimate_f1(const IcNetwork& net,
                                  const ActivationState& target,
                                  const std::vector<NodeId>& seeds, int trials,
                                  std::uint64_t master_seed) {
  if (target.size() != net.node_count())
    throw std::invalid_argument("activation state length != node count");
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  int nthreads =
      std::max<std::size_t>(1, std::thread::hardware_concurrency());
  std::vector<std::uint64_t> sums(nthreads, 0), sqsums(nthreads, 0);
  parallel_for(static_cast<std::size_t>(nthreads), [&](std::size_t chunk) {
    std::uint64_t s = 0, s2 = 0;
    for (int t = static_cast<int>(chunk); t < trials; t += nthreads) {
      DiffusionOutcome out =
          simulate_once(net, seeds, derive_seed(master_seed, t));
      std::uint64_t ham = 0;
      for (NodeId u = 0; u < net.node_count(); ++u)
        ham += target.bits[u] != out.final_state.bits[u];
      s += ham;
      s2 += ham * ham;
    }
    sums[chunk] = s;
    sqsums[chunk] = s2;
  });
  std::uint64_t sum = 0, sq = 0;
  for (int c = 0; c < nthreads; ++c) {
    sum += sums[c];
    sq += sqsums[c];
  }
  MetricEstimate est;
  est.trials = trials;
  est.mean = static_cast<double>(sum) / trials;
  if (trials > 1) {
    double var = (static_cast<double>(sq) - trials * est.mean * est.mean) /
                 (trials - 1);
    est.stderr_ = std::sqrt(std::max(0.0, var) / trials);
  }
  return est;
}

// f2(S) = sum_u |a*_u - alpha(S,u)|. The stderr is the sum of per-node
// binomial standard-error bounds.
inline MetricEstimate estimate_f2(const IcNetwork& net,
                                  const ActivationState& target,
                                  const std::vector<NodeId>& seeds, int trials,
                                  std::uint64_t master_seed) {
  if (target.size() != net.node_count())
    throw std::invalid_argument("activation state length != node count");
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  std::vector<double> alpha = estimate_alpha(net, seeds, trials, master_seed);
  MetricEstimate est;
  est.trials = trials;
  for (NodeId u = 0; u < net.node_count(); ++u) {
    est.mean += std::abs(static_cast<double>(target.bits[u]) - alpha[u]);
    est.stderr_ += std::sqrt(alpha[u] * (1.0 - alpha[u]) / trials);
  }
  return est;
}

}  // namespace effector
