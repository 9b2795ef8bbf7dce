#pragma once

// Undirected weighted graph with per-edge removal costs, simple paths, and
// single-source shortest paths with a deterministic tie-break.

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <queue>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace pathattack {

using NodeId = std::int32_t;

/// Raised for malformed input: invalid node ids, missing edges, bad params.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Absolute tolerance for comparing path lengths built from real weights.
inline constexpr double kLengthTolerance = 1e-9;

/// a < b beyond the length tolerance.
inline bool length_less(double a, double b) {
  return a < b - kLengthTolerance;
}
/// a <= b up to the length tolerance.
inline bool length_leq(double a, double b) {
  return a <= b + kLengthTolerance;
}
inline bool length_equal(double a, double b) {
  return std::fabs(a - b) <= kLengthTolerance;
}

/// Canonical undirected edge key: the sorted endpoint pair.
struct EdgeKey {
  NodeId u = 0;
  NodeId v = 0;

  EdgeKey() = default;
  EdgeKey(NodeId a, NodeId b) : u(std::min(a, b)), v(std::max(a, b)) {}

  friend auto operator<=>(const EdgeKey&, const EdgeKey&) = default;
  friend bool operator==(const EdgeKey&, const EdgeKey&) = default;
};

struct EdgeKeyHash {
  std::size_t operator()(const EdgeKey& e) const noexcept {
    return std::hash<std::uint64_t>{}(
        (static_cast<std::uint64_t>(static_cast<std::uint32_t>(e.u)) << 32) |
        static_cast<std::uint32_t>(e.v));
  }
};

using EdgeSet = std::set<EdgeKey>;

/// Immutable-after-construction undirected graph. Node ids are dense
/// integers in [0, node_count). Edges are addressed by EdgeKey; lookups
/// accept either endpoint order.
class Graph {
 public:
  struct Neighbor {
    NodeId node;
    std::int32_t edge;  // index into edges()
  };

  struct Edge {
    EdgeKey key;
    double weight;
    double cost;
  };

  Graph() = default;
  explicit Graph(NodeId node_count) : adjacency_(check_count(node_count)) {}

  /// Adds an undirected edge. Rejects self-loops, duplicates, negative
  /// weights or costs.
  void add_edge(NodeId a, NodeId b, double weight, double cost) {
    check_node(a);
    check_node(b);
    if (a == b) {
      throw InputError("self-loop on node " + std::to_string(a));
    }
    if (!(weight >= 0.0) || !(cost >= 0.0) || !std::isfinite(weight) ||
        !std::isfinite(cost)) {
      throw InputError("edge weights and costs must be finite and >= 0");
    }
    const EdgeKey key(a, b);
    if (index_.contains(key)) {
      throw InputError("duplicate edge (" + std::to_string(key.u) + "," +
                       std::to_string(key.v) + ")");
    }
    const auto idx = static_cast<std::int32_t>(edges_.size());
    edges_.push_back({key, weight, cost});
    index_.emplace(key, idx);
    adjacency_[key.u].push_back({key.v, idx});
    adjacency_[key.v].push_back({key.u, idx});
  }

  /// Same as add_edge with cost equal to weight.
  void add_edge(NodeId a, NodeId b, double weight) {
    add_edge(a, b, weight, weight);
  }

  NodeId node_count() const { return static_cast<NodeId>(adjacency_.size()); }
  std::size_t edge_count() const { return edges_.size(); }

  std::span<const Edge> edges() const { return edges_; }
  std::span<const Neighbor> neighbors(NodeId n) const {
    check_node(n);
    return adjacency_[n];
  }

  bool is_node(NodeId n) const { return n >= 0 && n < node_count(); }
  bool has_edge(NodeId a, NodeId b) const {
    return is_node(a) && is_node(b) && index_.contains(EdgeKey(a, b));
  }
  bool has_edge(const EdgeKey& e) const { return index_.contains(e); }

  const Edge& edge(const EdgeKey& e) const {
    const auto it = index_.find(e);
    if (it == index_.end()) {
      throw InputError("no edge (" + std::to_string(e.u) + "," +
                       std::to_string(e.v) + ")");
    }
    return edges_[it->second];
  }
  const Edge& edge(NodeId a, NodeId b) const { return edge(EdgeKey(a, b)); }

  double weight(const EdgeKey& e) const { return edge(e).weight; }
  double cost(const EdgeKey& e) const { return edge(e).cost; }

  /// Sum of costs over `edges`.
  double total_cost(const EdgeSet& edges) const {
    double total = 0.0;
    for (const auto& e : edges) total += cost(e);
    return total;
  }

  void check_node(NodeId n) const {
    if (!is_node(n)) {
      throw InputError("invalid node id " + std::to_string(n));
    }
  }

  /// Graph equality: same node count and identical edge records, compared
  /// independently of insertion order.
  friend bool operator==(const Graph& a, const Graph& b) {
    if (a.node_count() != b.node_count() || a.edge_count() != b.edge_count()) {
      return false;
    }
    for (const auto& e : a.edges_) {
      const auto it = b.index_.find(e.key);
      if (it == b.index_.end()) return false;
      const auto& other = b.edges_[it->second];
      if (other.weight != e.weight || other.cost != e.cost) return false;
    }
    return true;
  }

 private:
  static std::size_t check_count(NodeId n) {
    if (n < 0) throw InputError("node count must be non-negative");
    return static_cast<std::size_t>(n);
  }

  std::vector<Edge> edges_;
  std::unordered_map<EdgeKey, std::int32_t, EdgeKeyHash> index_;
  std::vector<std::vector<Neighbor>> adjacency_;
};

/// A simple path given by its node sequence.
class Path {
 public:
  Path() = default;
  explicit Path(std::vector<NodeId> nodes) : nodes_(std::move(nodes)) {
    std::vector<NodeId> sorted = nodes_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw InputError("path repeats a node");
    }
  }
  Path(std::initializer_list<NodeId> nodes)
      : Path(std::vector<NodeId>(nodes)) {}

  const std::vector<NodeId>& nodes() const { return nodes_; }
  bool empty() const { return nodes_.empty(); }
  std::size_t hops() const { return nodes_.empty() ? 0 : nodes_.size() - 1; }
  NodeId source() const { return nodes_.front(); }
  NodeId target() const { return nodes_.back(); }

  std::vector<EdgeKey> edges() const {
    std::vector<EdgeKey> out;
    for (std::size_t i = 1; i < nodes_.size(); ++i) {
      out.emplace_back(nodes_[i - 1], nodes_[i]);
    }
    return out;
  }

  EdgeSet edge_set() const {
    const auto list = edges();
    return EdgeSet(list.begin(), list.end());
  }

  Path reversed() const {
    return Path(std::vector<NodeId>(nodes_.rbegin(), nodes_.rend()));
  }

  friend auto operator<=>(const Path&, const Path&) = default;
  friend bool operator==(const Path&, const Path&) = default;

 private:
  std::vector<NodeId> nodes_;
};

/// Sum of edge weights along `p`; 0 for a single-node path.
inline double path_length(const Graph& g, const Path& p) {
  double total = 0.0;
  const auto& nodes = p.nodes();
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    total += g.edge(nodes[i - 1], nodes[i]).weight;
  }
  return total;
}

/// Checks that `p` is a path of `g` (every hop is an edge).
inline bool is_path_in(const Graph& g, const Path& p) {
  const auto& nodes = p.nodes();
  if (nodes.empty()) return false;
  for (auto n : nodes) {
    if (!g.is_node(n)) return false;
  }
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    if (!g.has_edge(nodes[i - 1], nodes[i])) return false;
  }
  return true;
}

/// Returns `g` without the edges in `removed`. Survivors keep their
/// weights and costs.
inline Graph remove_edges(const Graph& g, const EdgeSet& removed) {
  for (const auto& e : removed) {
    if (!g.has_edge(e)) {
      throw InputError("cannot remove missing edge (" + std::to_string(e.u) +
                       "," + std::to_string(e.v) + ")");
    }
  }
  Graph out(g.node_count());
  for (const auto& e : g.edges()) {
    if (!removed.contains(e.key)) out.add_edge(e.key.u, e.key.v, e.weight, e.cost);
  }
  return out;
}

/// Result of an attack: removed edges plus bookkeeping about how they were
/// found.
struct CutPlan {
  EdgeSet removed_edges;
  double total_cost = 0.0;
  std::string method_tag;
  int iterations = 0;
  int rounding_retries = 0;
  int constraints_generated = 0;
  Path protected_path;
  std::uint64_t seed = 0;
  bool lp_integral = false;
  double lp_objective = 0.0;
  std::optional<bool> within_budget;
};

/// Restrictions applied during a shortest-path search. Empty vectors mean
/// "no restriction".
struct SearchFilter {
  std::vector<char> blocked_nodes;   // indexed by node id
  std::vector<char> blocked_edges;   // indexed by Graph edge index
  const std::vector<char>* allowed_nodes = nullptr;  // optional node mask

  bool node_ok(NodeId n) const {
    if (!blocked_nodes.empty() && blocked_nodes[n]) return false;
    if (allowed_nodes != nullptr && !(*allowed_nodes)[n]) return false;
    return true;
  }
  bool edge_ok(std::int32_t idx) const {
    return blocked_edges.empty() || !blocked_edges[idx];
  }
};

namespace detail {

struct SearchTree {
  std::vector<double> dist;
  std::vector<NodeId> pred;  // -1 for the root and unreached nodes
};

inline SearchTree dijkstra(const Graph& g, NodeId source,
                           const SearchFilter& filter) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  SearchTree tree{std::vector<double>(g.node_count(), kInf),
                  std::vector<NodeId>(g.node_count(), -1)};
  if (!filter.node_ok(source)) return tree;
  using Item = std::pair<double, NodeId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  tree.dist[source] = 0.0;
  heap.emplace(0.0, source);
  while (!heap.empty()) {
    const auto [d, u] = heap.top();
    heap.pop();
    if (d > tree.dist[u]) continue;
    for (const auto& nb : g.neighbors(u)) {
      if (!filter.edge_ok(nb.edge) || !filter.node_ok(nb.node)) continue;
      const double nd = d + g.edges()[nb.edge].weight;
      if (nd < tree.dist[nb.node]) {
        tree.dist[nb.node] = nd;
        tree.pred[nb.node] = u;
        heap.emplace(nd, nb.node);
      }
    }
  }
  return tree;
}

}  // namespace detail

/// Minimum-length s-t path avoiding the filtered nodes/edges. Among paths of
/// equal length (within kLengthTolerance) the lexicographically smallest
/// node sequence is returned. Returns nullopt when t is unreachable.
inline std::optional<Path> shortest_path(const Graph& g, NodeId s, NodeId t,
                                         const SearchFilter& filter) {
  g.check_node(s);
  g.check_node(t);
  if (!filter.node_ok(s) || !filter.node_ok(t)) return std::nullopt;
  if (s == t) return Path{s};

  // Distances to t let us walk forward from s, always taking the smallest
  // neighbour that stays on some shortest path.
  const auto to_target = detail::dijkstra(g, t, filter).dist;
  const double best = to_target[s];
  if (!std::isfinite(best)) return std::nullopt;

  std::vector<char> visited(g.node_count(), 0);
  std::vector<NodeId> nodes{s};
  visited[s] = 1;
  double travelled = 0.0;
  NodeId at = s;
  while (at != t) {
    NodeId next = -1;
    double next_weight = 0.0;
    for (const auto& nb : g.neighbors(at)) {
      if (!filter.edge_ok(nb.edge) || !filter.node_ok(nb.node) ||
          visited[nb.node]) {
        continue;
      }
      const double w = g.edges()[nb.edge].weight;
      if (!length_equal(travelled + w + to_target[nb.node], best)) continue;
      if (next < 0 || nb.node < next) {
        next = nb.node;
        next_weight = w;
      }
    }
    if (next < 0) break;  // only reachable through zero-weight cycles
    visited[next] = 1;
    nodes.push_back(next);
    travelled += next_weight;
    at = next;
  }
  if (at == t) return Path(std::move(nodes));

  // Zero-weight edges can trap the greedy walk; fall back to the
  // predecessor tree of a plain search from s, which is always simple.
  const auto tree = detail::dijkstra(g, s, filter);
  nodes.assign(1, t);
  for (at = t; at != s; at = tree.pred[at]) nodes.push_back(tree.pred[at]);
  std::reverse(nodes.begin(), nodes.end());
  return Path(std::move(nodes));
}

inline std::optional<Path> shortest_path(const Graph& g, NodeId s, NodeId t) {
  return shortest_path(g, s, t, SearchFilter{});
}

/// Unweighted hop distances from `source`; -1 marks unreachable nodes.
inline std::vector<int> bfs_hops(const Graph& g, NodeId source) {
  g.check_node(source);
  std::vector<int> hops(g.node_count(), -1);
  std::vector<NodeId> frontier{source};
  hops[source] = 0;
  for (std::size_t head = 0; head < frontier.size(); ++head) {
    const NodeId u = frontier[head];
    for (const auto& nb : g.neighbors(u)) {
      if (hops[nb.node] < 0) {
        hops[nb.node] = hops[u] + 1;
        frontier.push_back(nb.node);
      }
    }
  }
  return hops;
}

}  // namespace pathattack
