#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <vector>

#include "effector/common.hpp"
#include "effector/graph.hpp"

namespace effector {

// -p ln p, with the limit convention 0 at p = 0 (and ln 1 = 0 at p = 1).
inline double edge_entropy(double p) {
  if (p < 0.0 || p > 1.0)
    throw std::invalid_argument("probability outside [0,1]");
  if (p == 0.0 || p == 1.0) return 0.0;
  return -p * std::log(p);
}

struct LayeredPartition {
  std::vector<std::vector<NodeId>> layers;  // F0 .. Fm
};

namespace detail {

struct InducedDigraph {
  std::vector<NodeId> nodes;            // sorted
  std::vector<int> local;               // node id -> local index, -1 outside
  std::vector<std::vector<int>> out;    // local adjacency (local indices)
  std::vector<std::vector<int>> in;

  InducedDigraph(NodeId n, const std::vector<NodeId>& members)
      : nodes(members), local(n, -1) {
    std::sort(nodes.begin(), nodes.end());
    for (std::size_t i = 0; i < nodes.size(); ++i)
      local[nodes[i]] = static_cast<int>(i);
    out.resize(nodes.size());
    in.resize(nodes.size());
  }

  void add(NodeId u, NodeId v) {
    out[local[u]].push_back(local[v]);
    in[local[v]].push_back(local[u]);
  }

  bool reaches(int from, int to) const {
    if (from == to) return true;
    std::vector<char> seen(nodes.size(), 0);
    std::vector<int> stack{from};
    seen[from] = 1;
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (int v : out[u]) {
        if (v == to) return true;
        if (!seen[v]) {
          seen[v] = 1;
          stack.push_back(v);
        }
      }
    }
    return false;
  }
};

inline LayeredPartition layer_partition(const InducedDigraph& g) {
  const int n = static_cast<int>(g.nodes.size());
  LayeredPartition part;
  std::vector<int> unresolved(n, 0);  // parents not yet placed in a layer
  std::vector<char> placed(n, 0);
  for (int u = 0; u < n; ++u) unresolved[u] = static_cast<int>(g.in[u].size());
  int remaining = n;
  while (remaining > 0) {
    std::vector<NodeId> layer;
    for (int u = 0; u < n; ++u)
      if (!placed[u] && unresolved[u] == 0) layer.push_back(g.nodes[u]);
    if (layer.empty())
      throw DataError("induced subgraph contains a directed cycle");
    for (NodeId id : layer) {
      int u = g.local[id];
      placed[u] = 1;
      for (int v : g.out[u]) --unresolved[v];
    }
    remaining -= static_cast<int>(layer.size());
    part.layers.push_back(std::move(layer));
  }
  return part;
}

}  // namespace detail

// Layers F0..Fm of a DAG component: F0 holds the parentless nodes, each
// later layer the nodes whose in-component parents all sit in earlier
// layers. An empty candidate layer with nodes left over means a cycle.
inline LayeredPartition hierarchical_partition(
    const IcNetwork& net, const std::vector<NodeId>& component) {
  detail::InducedDigraph g(net.node_count(), component);
  for (NodeId u : component)
    for (int e : net.out_edges(u))
      if (g.local[net.edge(e).dst] >= 0) g.add(u, net.edge(e).dst);
  return detail::layer_partition(g);
}

inline LayeredPartition hierarchical_partition(
    const IcNetwork& net, const std::vector<NodeId>& component,
    const std::vector<int>& edges) {
  detail::InducedDigraph g(net.node_count(), component);
  for (int e : edges) {
    const Edge& ed = net.edge(e);
    if (g.local[ed.src] >= 0 && g.local[ed.dst] >= 0) g.add(ed.src, ed.dst);
  }
  return detail::layer_partition(g);
}

// ln Pr(A* | S) for an acyclic edge set over X1:
//   ln Pr(X0bar | X1, S): original-graph edges from X1 into X0 stay dead;
//   ln Pr(X1 | S): each non-seed u in X1 is activated by its DAG parents,
//     contributing ln(1 - prod over parents of (1 - p)).
// -inf results are meaningful (impossible states), never an error.
inline double log_likelihood(const IcNetwork& net, const ActivationState& state,
                             const std::vector<int>& dag_edges,
                             const std::vector<NodeId>& s) {
  std::vector<char> seed(net.node_count(), 0);
  for (NodeId u : s) {
    if (!state.is_active(u))
      throw std::invalid_argument("seed candidate outside X1");
    seed[u] = 1;
  }
  // Activation within X1 must be explainable by the DAG layers.
  hierarchical_partition(net, state.active_nodes(), dag_edges);

  double ll = 0.0;
  for (NodeId u = 0; u < net.node_count(); ++u) {
    if (!state.is_active(u)) continue;
    for (int e : net.out_edges(u))
      if (!state.is_active(net.edge(e).dst))
        ll += std::log(1.0 - net.edge(e).prob);
  }
  std::vector<double> miss(net.node_count(), 1.0);  // prod (1 - p) of parents
  for (int e : dag_edges) {
    const Edge& ed = net.edge(e);
    if (state.is_active(ed.src) && state.is_active(ed.dst))
      miss[ed.dst] *= 1.0 - ed.prob;
  }
  for (NodeId u = 0; u < net.node_count(); ++u) {
    if (!state.is_active(u) || seed[u]) continue;
    ll += std::log(1.0 - miss[u]);
  }
  return ll;
}

// q(u) = 1 - prod over DAG parents of (1 - p); parentless nodes have q = 0
// and can only be explained as seeds.
inline std::vector<double> activation_scores(const IcNetwork& net,
                                             const ActivationState& state,
                                             const std::vector<int>& dag_edges) {
  std::vector<double> miss(net.node_count(), 1.0);
  for (int e : dag_edges) {
    const Edge& ed = net.edge(e);
    if (state.is_active(ed.src) && state.is_active(ed.dst))
      miss[ed.dst] *= 1.0 - ed.prob;
  }
  std::vector<double> q(net.node_count(), 0.0);
  for (NodeId u = 0; u < net.node_count(); ++u)
    if (state.is_active(u)) q[u] = 1.0 - miss[u];
  return q;
}

// Exact MLE on a DAG: the B nodes with the smallest q maximize Pr(A*|S).
// If the budget cannot cover every q = 0 node the optimum is degenerate
// (likelihood zero); flagged, not an error.
inline EffectorResult mle_select_on_dag(const IcNetwork& net,
                                        const ActivationState& state,
                                        const std::vector<int>& dag_edges,
                                        int budget) {
  EffectorResult result;
  result.algorithm = "mlbed";
  result.budget = budget;
  const std::vector<NodeId> x1 = state.active_nodes();
  if (budget < 1 || budget > static_cast<int>(x1.size()))
    throw std::invalid_argument("budget must satisfy 1 <= B <= N1");
  std::vector<double> q = activation_scores(net, state, dag_edges);
  std::vector<std::pair<double, NodeId>> ranked;
  ranked.reserve(x1.size());
  int zero_count = 0;
  for (NodeId u : x1) {
    ranked.emplace_back(q[u], u);
    if (q[u] == 0.0) ++zero_count;
  }
  std::sort(ranked.begin(), ranked.end());
  for (int i = 0; i < budget; ++i) result.members.push_back(ranked[i].second);
  std::sort(result.members.begin(), result.members.end());
  result.zero_likelihood = zero_count > budget;
  result.score = log_likelihood(net, state, dag_edges, result.members);
  return result;
}

struct ExtractedDag {
  std::vector<NodeId> nodes;
  std::vector<int> kept_edges;  // indices into the network's edge list
  double entropy = 0.0;
};

// Permutation-based DAG extraction: split the induced edges by the order,
// keep the higher-entropy side, then greedily re-add edges from the other
// side (largest -p ln p first) whenever acyclicity survives.
inline ExtractedDag pbde_extract(const IcNetwork& net,
                                 const std::vector<NodeId>& component,
                                 const std::vector<NodeId>& order) {
  if (order.size() != component.size())
    throw std::invalid_argument("order must be a permutation of the component");
  std::vector<int> rank(net.node_count(), -1);
  for (std::size_t i = 0; i < order.size(); ++i)
    rank[order[i]] = static_cast<int>(i);
  for (NodeId u : component)
    if (rank[u] < 0)
      throw std::invalid_argument("order must cover the whole component");

  ExtractedDag dag;
  dag.nodes = component;
  std::sort(dag.nodes.begin(), dag.nodes.end());
  std::vector<int> left, right;
  double h_left = 0.0, h_right = 0.0;
  std::vector<char> member(net.node_count(), 0);
  for (NodeId u : dag.nodes) member[u] = 1;
  for (NodeId u : dag.nodes) {
    for (int e : net.out_edges(u)) {
      const Edge& ed = net.edge(e);
      if (!member[ed.dst]) continue;
      if (rank[ed.src] > rank[ed.dst]) {
        left.push_back(e);
        h_left += edge_entropy(ed.prob);
      } else {
        right.push_back(e);
        h_right += edge_entropy(ed.prob);
      }
    }
  }
  bool left_base = h_left >= h_right;
  std::vector<int>& base = left_base ? left : right;
  std::vector<int>& rest = left_base ? right : left;

  detail::InducedDigraph g(net.node_count(), dag.nodes);
  for (int e : base) {
    g.add(net.edge(e).src, net.edge(e).dst);
    dag.kept_edges.push_back(e);
    dag.entropy += edge_entropy(net.edge(e).prob);
  }
  std::sort(rest.begin(), rest.end(), [&](int a, int b) {
    double ha = edge_entropy(net.edge(a).prob);
    double hb = edge_entropy(net.edge(b).prob);
    if (ha != hb) return ha > hb;
    return a < b;
  });
  for (int e : rest) {
    int u = g.local[net.edge(e).src];
    int v = g.local[net.edge(e).dst];
    if (g.reaches(v, u)) continue;  // would close a cycle
    g.add(net.edge(e).src, net.edge(e).dst);
    dag.kept_edges.push_back(e);
    dag.entropy += edge_entropy(net.edge(e).prob);
  }
  std::sort(dag.kept_edges.begin(), dag.kept_edges.end());
  return dag;
}

struct MlbedDetail {
  std::vector<std::vector<NodeId>> components;
  std::vector<int> dag_edges;  // pooled kept edges over all components
};

// Maximum-likelihood effector detection on general graphs: extract a DAG per
// weakly-connected part of X1, then select the B globally smallest-q nodes.
// The default extraction order is by node index; a seed swaps in a random
// permutation per component.
inline EffectorResult mlbed(const IcNetwork& net, const ActivationState& state,
                            int budget,
                            std::optional<std::uint64_t> order_seed = {},
                            MlbedDetail* detail_out = nullptr) {
  const std::vector<NodeId> x1 = state.active_nodes();
  if (budget < 1 || budget > static_cast<int>(x1.size()))
    throw std::invalid_argument("budget must satisfy 1 <= B <= N1");

  // Weakly-connected components of the X1-induced subgraph.
  std::vector<int> comp_of(net.node_count(), -1);
  std::vector<std::vector<NodeId>> components;
  std::vector<char> active(net.node_count(), 0);
  for (NodeId u : x1) active[u] = 1;
  for (NodeId root : x1) {
    if (comp_of[root] >= 0) continue;
    int c = static_cast<int>(components.size());
    components.emplace_back();
    std::vector<NodeId> stack{root};
    comp_of[root] = c;
    while (!stack.empty()) {
      NodeId u = stack.back();
      stack.pop_back();
      components[c].push_back(u);
      auto visit = [&](NodeId v) {
        if (active[v] && comp_of[v] < 0) {
          comp_of[v] = c;
          stack.push_back(v);
        }
      };
      for (int e : net.out_edges(u)) visit(net.edge(e).dst);
      for (int e : net.in_edges(u)) visit(net.edge(e).src);
    }
    std::sort(components[c].begin(), components[c].end());
  }

  std::vector<int> dag_edges;
  for (std::size_t c = 0; c < components.size(); ++c) {
    std::vector<NodeId> order = components[c];
    if (order_seed) {
      std::mt19937_64 rng(derive_seed(*order_seed, c));
      std::shuffle(order.begin(), order.end(), rng);
    }
    ExtractedDag dag = pbde_extract(net, components[c], order);
    dag_edges.insert(dag_edges.end(), dag.kept_edges.begin(),
                     dag.kept_edges.end());
  }
  std::sort(dag_edges.begin(), dag_edges.end());
  if (detail_out) {
    detail_out->components = components;
    detail_out->dag_edges = dag_edges;
  }
  return mle_select_on_dag(net, state, dag_edges, budget);
}

}  // namespace effector
