#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <ostream>
#include <queue>
#include <vector>

#include "effector/common.hpp"
#include "effector/graph.hpp"

namespace effector {

// A simple directed path as a list of edge indices, with the product of its
// edge probabilities.
struct DiffusionPath {
  std::vector<int> edges;
  double prob = 1.0;  // product of edge probabilities
};

// Up to k pairwise edge-disjoint maximum diffusion paths from source to
// target, in non-increasing probability order.
struct PathSet {
  NodeId source = -1;
  NodeId target = -1;
  std::vector<DiffusionPath> paths;
};

namespace detail {

// Dijkstra under edge length -ln p (p = 0 edges dropped, removed edges
// masked). Ties on distance break by fewer hops, then by lower predecessor
// index, which pins down a unique deterministic path tree.
struct ShortestPaths {
  std::vector<double> dist;   // -ln of best path probability; +inf unreachable
  std::vector<int> hops;
  std::vector<int> pred_edge;  // edge index into the node, -1 at source
};

inline ShortestPaths neglog_dijkstra(const IcNetwork& net, NodeId src,
                                     const std::vector<char>* removed = nullptr,
                                     NodeId stop_at = -1) {
  const NodeId n = net.node_count();
  ShortestPaths sp;
  sp.dist.assign(n, kInf);
  sp.hops.assign(n, 0);
  sp.pred_edge.assign(n, -1);
  sp.dist[src] = 0.0;
  using Item = std::pair<std::pair<double, int>, NodeId>;  // ((dist,hops),node)
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
  pq.push({{0.0, 0}, src});
  std::vector<char> done(n, 0);
  while (!pq.empty()) {
    auto [key, u] = pq.top();
    pq.pop();
    if (done[u]) continue;
    done[u] = 1;
    if (u == stop_at) break;
    for (int e : net.out_edges(u)) {
      if (removed && (*removed)[e]) continue;
      const Edge& ed = net.edge(e);
      if (ed.prob <= 0.0 || done[ed.dst]) continue;
      double nd = key.first - std::log(ed.prob);
      int nh = key.second + 1;
      NodeId v = ed.dst;
      bool better = nd < sp.dist[v] ||
                    (nd == sp.dist[v] &&
                     (nh < sp.hops[v] ||
                      (nh == sp.hops[v] && sp.pred_edge[v] >= 0 &&
                       u < net.edge(sp.pred_edge[v]).src)));
      if (better) {
        sp.dist[v] = nd;
        sp.hops[v] = nh;
        sp.pred_edge[v] = e;
        pq.push({{nd, nh}, v});
      }
    }
  }
  return sp;
}

inline DiffusionPath extract_path(const IcNetwork& net,
                                  const ShortestPaths& sp, NodeId src,
                                  NodeId dst) {
  DiffusionPath p;
  NodeId v = dst;
  while (v != src) {
    int e = sp.pred_edge[v];
    p.edges.push_back(e);
    p.prob *= net.edge(e).prob;
    v = net.edge(e).src;
  }
  std::reverse(p.edges.begin(), p.edges.end());
  return p;
}

}  // namespace detail

// The simple path from u to v maximizing the product of edge probabilities,
// or nothing when v is unreachable through positive-probability edges.
// u == v yields the empty path with probability 1.
inline std::optional<DiffusionPath> max_diffusion_path(const IcNetwork& net,
                                                       NodeId u, NodeId v) {
  if (u == v) return DiffusionPath{};
  auto sp = detail::neglog_dijkstra(net, u, nullptr, v);
  if (sp.dist[v] == kInf) return std::nullopt;
  return detail::extract_path(net, sp, u, v);
}

// Greedy k-max path set: repeatedly take the maximum diffusion path in the
// current graph and remove its edges, up to k paths or exhaustion.
inline PathSet k_max_path_set(const IcNetwork& net, NodeId u, NodeId v,
                              int k) {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  PathSet ps;
  ps.source = u;
  ps.target = v;
  if (u == v) {
    ps.paths.push_back(DiffusionPath{});  // empty path, probability 1
    return ps;
  }
  std::vector<char> removed(net.edge_count(), 0);
  for (int i = 0; i < k; ++i) {
    auto sp = detail::neglog_dijkstra(net, u, &removed, v);
    if (sp.dist[v] == kInf) break;
    DiffusionPath p = detail::extract_path(net, sp, u, v);
    for (int e : p.edges) removed[e] = 1;
    ps.paths.push_back(std::move(p));
  }
  return ps;
}

// d^k(u,v) = -ln(1 - prod over paths of (1 - Pr[path])); +inf when the path
// set is empty.
inline double influence_distance(const PathSet& ps) {
  if (ps.paths.empty()) return kInf;
  double miss = 1.0;  // probability that every path fails
  for (const auto& p : ps.paths) miss *= 1.0 - p.prob;
  if (miss <= 0.0) return 0.0;
  double q = 1.0 - miss;
  if (q <= 0.0) return kInf;
  return -std::log(q);
}

// k-th influence distances over sources x targets, with saturating +inf
// aggregates. Rows are filled per source in parallel; read-only afterwards.
class DistanceTable {
 public:
  DistanceTable(int k, std::vector<NodeId> sources, std::vector<NodeId> targets,
                NodeId node_count)
      : k_(k),
        sources_(std::move(sources)),
        targets_(std::move(targets)),
        src_pos_(node_count, -1),
        tgt_pos_(node_count, -1),
        vals_(sources_.size() * targets_.size(), kInf) {
    for (std::size_t i = 0; i < sources_.size(); ++i) src_pos_[sources_[i]] = i;
    for (std::size_t j = 0; j < targets_.size(); ++j) tgt_pos_[targets_[j]] = j;
  }

  int k() const { return k_; }
  const std::vector<NodeId>& sources() const { return sources_; }
  const std::vector<NodeId>& targets() const { return targets_; }

  double at(NodeId u, NodeId v) const {
    if (u == v) return 0.0;
    int i = src_pos_[u];
    int j = tgt_pos_[v];
    if (i < 0 || j < 0)
      throw std::invalid_argument("pair not covered by the distance table");
    return vals_[static_cast<std::size_t>(i) * targets_.size() + j];
  }

  // d^k(V', u) = sum over v' in V' of d^k(v', u).
  double set_to_node(const std::vector<NodeId>& srcs, NodeId u) const {
    double s = 0.0;
    for (NodeId v : srcs) {
      double d = at(v, u);
      if (d == kInf) return kInf;
      s += d;
    }
    return s;
  }

  double node_to_set(NodeId u, const std::vector<NodeId>& tgts) const {
    double s = 0.0;
    for (NodeId v : tgts) {
      double d = at(u, v);
      if (d == kInf) return kInf;
      s += d;
    }
    return s;
  }

  double set_to_set(const std::vector<NodeId>& srcs,
                    const std::vector<NodeId>& tgts) const {
    double s = 0.0;
    for (NodeId u : srcs) {
      double d = node_to_set(u, tgts);
      if (d == kInf) return kInf;
      s += d;
    }
    return s;
  }

  void set(NodeId u, NodeId v, double d) {
    vals_[static_cast<std::size_t>(src_pos_[u]) * targets_.size() +
          tgt_pos_[v]] = d;
  }

 private:
  int k_;
  std::vector<NodeId> sources_;
  std::vector<NodeId> targets_;
  std::vector<int> src_pos_;
  std::vector<int> tgt_pos_;
  std::vector<double> vals_;
};

inline DistanceTable compute_distance_table(const IcNetwork& net,
                                            const std::vector<NodeId>& sources,
                                            const std::vector<NodeId>& targets,
                                            int k) {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  DistanceTable table(k, sources, targets, net.node_count());
  const auto& tgts = table.targets();
  parallel_for(table.sources().size(), [&](std::size_t i) {
    NodeId u = table.sources()[i];
    // One Dijkstra covers every target at k = 1; deeper k needs the
    // iterated edge-removal construction per pair, so unreachable pairs
    // (infinite already at k = 1) are skipped.
    auto sp = detail::neglog_dijkstra(net, u);
    for (NodeId v : tgts) {
      if (v == u) {
        table.set(u, v, 0.0);
        continue;
      }
      if (sp.dist[v] == kInf) continue;  // stays +inf for every k
      if (k == 1) {
        table.set(u, v, sp.dist[v]);
      } else {
        table.set(u, v, influence_distance(k_max_path_set(net, u, v, k)));
      }
    }
  });
  return table;
}

// CSV dump: u,v,k,distance with the literal `inf` for unreachable pairs.
inline void dump_distances_csv(std::ostream& os, const DistanceTable& table,
                               const IcNetwork& net) {
  os << "u,v,k,distance\n";
  char buf[64];
  for (NodeId u : table.sources()) {
    for (NodeId v : table.targets()) {
      double d = table.at(u, v);
      if (d == kInf) {
        os << net.label(u) << ',' << net.label(v) << ',' << table.k()
           << ",inf\n";
      } else {
        std::snprintf(buf, sizeof buf, "%.17g", d);
        os << net.label(u) << ',' << net.label(v) << ',' << table.k() << ','
           << buf << '\n';
      }
    }
  }
}

}  // namespace effector
