#pragma once

#include <algorithm>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "effector/common.hpp"

namespace effector {

struct Edge {
  NodeId src;
  NodeId dst;
  double prob;  // propagation probability in [0, 1]
};

// Directed graph with per-edge propagation probability. Nodes are dense
// 0..N-1 indices; the original text identifiers are kept for I/O.
// Immutable once built; safe to share across threads.
class IcNetwork {
 public:
  NodeId add_node(const std::string& label) {
    auto it = label_to_id_.find(label);
    if (it != label_to_id_.end()) return it->second;
    NodeId id = static_cast<NodeId>(labels_.size());
    labels_.push_back(label);
    label_to_id_.emplace(label, id);
    out_.emplace_back();
    in_.emplace_back();
    return id;
  }

  // Returns false if the edge already exists (duplicates are dropped).
  bool add_edge(NodeId u, NodeId v, double prob = 0.0) {
    if (u == v) throw std::invalid_argument("self-loop");
    if (u < 0 || v < 0 || u >= node_count() || v >= node_count())
      throw std::invalid_argument("edge endpoint out of range");
    if (prob < 0.0 || prob > 1.0)
      throw std::invalid_argument("edge probability outside [0,1]");
    std::uint64_t key =
        (static_cast<std::uint64_t>(u) << 32) | static_cast<std::uint32_t>(v);
    if (!edge_keys_.insert(key).second) return false;
    int e = static_cast<int>(edges_.size());
    edges_.push_back({u, v, prob});
    out_[u].push_back(e);
    in_[v].push_back(e);
    return true;
  }

  NodeId node_count() const { return static_cast<NodeId>(labels_.size()); }
  int edge_count() const { return static_cast<int>(edges_.size()); }

  const Edge& edge(int e) const { return edges_[e]; }
  const std::vector<int>& out_edges(NodeId u) const { return out_[u]; }
  const std::vector<int>& in_edges(NodeId v) const { return in_[v]; }

  const std::string& label(NodeId u) const { return labels_[u]; }
  NodeId find_node(const std::string& label) const {
    auto it = label_to_id_.find(label);
    return it == label_to_id_.end() ? -1 : it->second;
  }

  bool has_edge(NodeId u, NodeId v) const {
    std::uint64_t key =
        (static_cast<std::uint64_t>(u) << 32) | static_cast<std::uint32_t>(v);
    return edge_keys_.count(key) > 0;
  }

  void set_prob(int e, double p) { edges_[e].prob = p; }

  // Number of edges that carried an explicit probability in the input file.
  int explicit_prob_count = 0;
  // Input lines dropped because src == dst.
  int self_loops_skipped = 0;

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, NodeId> label_to_id_;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> out_;
  std::vector<std::vector<int>> in_;
  std::unordered_set<std::uint64_t> edge_keys_;
};

// Binary activation vector over the network's nodes. bits[i] == 1 iff node i
// is active. Partitions V into X1 (active) and X0 (inactive).
struct ActivationState {
  std::vector<std::uint8_t> bits;

  ActivationState() = default;
  explicit ActivationState(NodeId n) : bits(n, 0) {}
  ActivationState(NodeId n, const std::vector<NodeId>& active) : bits(n, 0) {
    for (NodeId u : active) bits.at(u) = 1;
  }

  NodeId size() const { return static_cast<NodeId>(bits.size()); }
  bool is_active(NodeId u) const { return bits[u] != 0; }

  std::vector<NodeId> active_nodes() const {
    std::vector<NodeId> r;
    for (NodeId u = 0; u < size(); ++u)
      if (bits[u]) r.push_back(u);
    return r;
  }
  std::vector<NodeId> inactive_nodes() const {
    std::vector<NodeId> r;
    for (NodeId u = 0; u < size(); ++u)
      if (!bits[u]) r.push_back(u);
    return r;
  }
  NodeId n1() const {
    NodeId c = 0;
    for (auto b : bits) c += b;
    return c;
  }
};

struct ProbabilityModel {
  enum class Kind { Uniform, WeightedCascade, Explicit };
  Kind kind = Kind::Explicit;
  double p = 0.0;  // for Uniform

  static ProbabilityModel uniform(double p) {
    if (p < 0.0 || p > 1.0)
      throw std::invalid_argument("uniform probability outside [0,1]");
    return {Kind::Uniform, p};
  }
  static ProbabilityModel weighted_cascade() {
    return {Kind::WeightedCascade, 0.0};
  }
  static ProbabilityModel explicit_probs() { return {Kind::Explicit, 0.0}; }

  // Accepts "uniform:P", "wc" or "explicit".
  static ProbabilityModel parse(const std::string& s) {
    if (s == "wc") return weighted_cascade();
    if (s == "explicit") return explicit_probs();
    if (s.rfind("uniform:", 0) == 0) {
      double p = 0.0;
      try {
        p = std::stod(s.substr(8));
      } catch (const std::exception&) {
        throw std::invalid_argument("bad probability model: " + s);
      }
      return uniform(p);
    }
    throw std::invalid_argument("bad probability model: " + s);
  }

  std::string to_string() const {
    switch (kind) {
      case Kind::Uniform: {
        char buf[48];
        std::snprintf(buf, sizeof buf, "uniform:%.17g", p);
        return buf;
      }
      case Kind::WeightedCascade:
        return "wc";
      default:
        return "explicit";
    }
  }
};

// Selected effector set together with the algorithm's internal objective.
struct EffectorResult {
  std::vector<NodeId> members;  // subset of X1, |members| == budget
  int budget = 0;
  std::string algorithm;
  double score = 0.0;
  // mlbed: the budget was too small to cover all parentless nodes, so the
  // reported likelihood is zero (score == -inf).
  bool zero_likelihood = false;
  std::string note;
};

// ---------------------------------------------------------------------------
// Edge-list ingestion. One edge per line, "<src> <dst>" or "<src> <dst> <p>";
// lines starting with '#' are ignored. Identifiers are arbitrary tokens and
// are mapped to dense indices in first-appearance order. With `undirected`,
// each pair yields both directed edges. Duplicates are dropped, self-loops
// are skipped and counted.

inline IcNetwork load_edge_list(std::istream& is, bool undirected = false) {
  IcNetwork net;
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string a, b, c, extra;
    ls >> a >> b;
    if (a.empty() || b.empty())
      throw ParseError(line_no, "expected two node identifiers");
    bool has_prob = static_cast<bool>(ls >> c);
    if (has_prob && (ls >> extra))
      throw ParseError(line_no, "too many fields");
    double prob = 0.0;
    if (has_prob) {
      try {
        std::size_t pos = 0;
        prob = std::stod(c, &pos);
        if (pos != c.size()) throw std::invalid_argument(c);
      } catch (const std::exception&) {
        throw ParseError(line_no, "bad probability '" + c + "'");
      }
      if (prob < 0.0 || prob > 1.0)
        throw ParseError(line_no, "probability outside [0,1]");
    }
    NodeId u = net.add_node(a);
    NodeId v = net.add_node(b);
    if (u == v) {
      ++net.self_loops_skipped;
      continue;
    }
    if (net.add_edge(u, v, prob) && has_prob) ++net.explicit_prob_count;
    if (undirected && net.add_edge(v, u, prob) && has_prob)
      ++net.explicit_prob_count;
  }
  return net;
}

inline IcNetwork load_edge_list(const std::string& text,
                                bool undirected = false) {
  std::istringstream is(text);
  return load_edge_list(is, undirected);
}

// Edge-list-with-probability text; reloading with the Explicit model gives
// back the same labeled graph.
inline void save_edge_list(std::ostream& os, const IcNetwork& net) {
  std::vector<int> order(net.edge_count());
  for (int e = 0; e < net.edge_count(); ++e) order[e] = e;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const Edge& ea = net.edge(a);
    const Edge& eb = net.edge(b);
    if (net.label(ea.src) != net.label(eb.src))
      return net.label(ea.src) < net.label(eb.src);
    return net.label(ea.dst) < net.label(eb.dst);
  });
  char buf[64];
  for (int e : order) {
    const Edge& ed = net.edge(e);
    std::snprintf(buf, sizeof buf, " %.17g", ed.prob);
    os << net.label(ed.src) << ' ' << net.label(ed.dst) << buf << '\n';
  }
}

inline IcNetwork assign_probabilities(IcNetwork net,
                                      const ProbabilityModel& model) {
  switch (model.kind) {
    case ProbabilityModel::Kind::Uniform:
      for (int e = 0; e < net.edge_count(); ++e) net.set_prob(e, model.p);
      break;
    case ProbabilityModel::Kind::WeightedCascade:
      // Pr[(u,v)] = 1 / indeg(v); in-edges are deduplicated, so indeg counts
      // distinct in-neighbors.
      for (NodeId v = 0; v < net.node_count(); ++v) {
        const auto& in = net.in_edges(v);
        if (in.empty()) continue;
        double p = 1.0 / static_cast<double>(in.size());
        for (int e : in) net.set_prob(e, p);
      }
      break;
    case ProbabilityModel::Kind::Explicit:
      if (net.explicit_prob_count < net.edge_count())
        throw DataError(
            "explicit probability model requires a probability on every edge");
      break;
  }
  return net;
}

// {v in restrict : (v,u) in E}. `u` must itself belong to `restrict`.
inline std::vector<NodeId> parents_within(const IcNetwork& net, NodeId u,
                                          const std::vector<NodeId>& restrict) {
  std::vector<char> in_set(net.node_count(), 0);
  bool u_ok = false;
  for (NodeId v : restrict) {
    in_set[v] = 1;
    if (v == u) u_ok = true;
  }
  if (!u_ok) throw std::invalid_argument("node not in the restriction set");
  std::vector<NodeId> parents;
  for (int e : net.in_edges(u))
    if (in_set[net.edge(e).src]) parents.push_back(net.edge(e).src);
  std::sort(parents.begin(), parents.end());
  return parents;
}

// Activation-state file: one active node id per line (all others inactive).
inline ActivationState load_activation_state(std::istream& is,
                                             const IcNetwork& net) {
  ActivationState state(net.node_count());
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) continue;
    if (tok[0] == '#') continue;
    NodeId u = net.find_node(tok);
    if (u < 0)
      throw DataError("unknown node id '" + tok + "' at line " +
                      std::to_string(line_no));
    state.bits[u] = 1;
  }
  return state;
}

inline std::vector<NodeId> load_node_list(std::istream& is,
                                          const IcNetwork& net) {
  std::vector<NodeId> nodes;
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) continue;
    if (tok[0] == '#') continue;
    NodeId u = net.find_node(tok);
    if (u < 0)
      throw DataError("unknown node id '" + tok + "' at line " +
                      std::to_string(line_no));
    nodes.push_back(u);
  }
  return nodes;
}

}  // namespace effector
