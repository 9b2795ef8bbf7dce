#pragma once

// Ranked enumeration of simple s-t paths (root/spur deviation scheme) and the
// "next shortest path other than p*" oracle used for constraint generation.

#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "pathattack/graph.hpp"

namespace pathattack {

/// Lazily yields simple s-t paths in nondecreasing length order; equal
/// lengths are ordered by node sequence. Single consumer; the graph must
/// outlive the iterator.
class PathIterator {
 public:
  /// `allowed_nodes`, when given, restricts every path to nodes whose mask
  /// entry is nonzero. `removed_edges`, when nonempty, is indexed like
  /// Graph::edges() and hides the marked edges.
  PathIterator(const Graph& g, NodeId s, NodeId t,
               std::optional<std::vector<char>> allowed_nodes = std::nullopt,
               std::vector<char> removed_edges = {})
      : graph_(&g),
        source_(s),
        target_(t),
        mask_(std::move(allowed_nodes)),
        removed_(std::move(removed_edges)) {
    g.check_node(s);
    g.check_node(t);
    if (mask_ && mask_->size() != static_cast<std::size_t>(g.node_count())) {
      throw InputError("node mask size does not match the graph");
    }
    if (!removed_.empty() && removed_.size() != g.edge_count()) {
      throw InputError("removed-edge mask size does not match the graph");
    }
  }

  /// The next path, or nullopt once every simple s-t path has been yielded.
  std::optional<Path> next() {
    if (!started_) {
      started_ = true;
      if (auto first = shortest_path(*graph_, source_, target_, base_filter())) {
        add_candidate(path_length(*graph_, *first), std::move(*first));
      }
    } else if (!accepted_.empty()) {
      add_deviations(accepted_.back());
    }
    if (candidates_.empty()) return std::nullopt;
    auto best = candidates_.extract(candidates_.begin()).value();
    accepted_.push_back(best.second);
    return std::move(best.second);
  }

  /// Number of paths yielded so far.
  std::size_t yielded() const { return accepted_.size(); }

 private:
  using Candidate = std::pair<double, Path>;

  SearchFilter base_filter() const {
    SearchFilter f;
    if (mask_) f.allowed_nodes = &*mask_;
    f.blocked_edges = removed_;
    return f;
  }

  void add_candidate(double length, Path p) {
    if (!seen_.insert(p.nodes()).second) return;
    candidates_.emplace(length, std::move(p));
  }

  void add_deviations(const Path& last) {
    const Graph& g = *graph_;
    const auto& nodes = last.nodes();
    SearchFilter filter = base_filter();
    filter.blocked_nodes.assign(g.node_count(), 0);
    if (filter.blocked_edges.empty()) filter.blocked_edges.assign(g.edge_count(), 0);

    double root_length = 0.0;
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
      const NodeId spur = nodes[i];
      std::vector<std::int32_t> blocked;
      for (const auto& earlier : accepted_) {
        const auto& en = earlier.nodes();
        if (en.size() > i + 1 &&
            std::equal(nodes.begin(), nodes.begin() + i + 1, en.begin())) {
          for (const auto& nb : g.neighbors(spur)) {
            if (nb.node == en[i + 1]) blocked.push_back(nb.edge);
          }
        }
      }
      for (auto e : blocked) filter.blocked_edges[e] |= 2;

      if (auto tail = shortest_path(g, spur, target_, filter)) {
        std::vector<NodeId> full(nodes.begin(), nodes.begin() + i);
        full.insert(full.end(), tail->nodes().begin(), tail->nodes().end());
        const double length = root_length + path_length(g, *tail);
        add_candidate(length, Path(std::move(full)));
      }

      for (auto e : blocked) filter.blocked_edges[e] &= ~2;
      filter.blocked_nodes[spur] = 1;
      root_length += g.edge(nodes[i], nodes[i + 1]).weight;
    }
  }

  const Graph* graph_;
  NodeId source_;
  NodeId target_;
  std::optional<std::vector<char>> mask_;
  std::vector<char> removed_;
  bool started_ = false;
  std::vector<Path> accepted_;
  std::set<Candidate> candidates_;
  std::set<std::vector<NodeId>> seen_;
};

/// The first min(k, total) simple s-t paths in ranked order.
inline std::vector<Path> k_shortest_paths(
    const Graph& g, NodeId s, NodeId t, int k,
    std::optional<std::vector<char>> allowed_nodes = std::nullopt) {
  if (k < 1) throw InputError("k must be positive");
  if (s == t) throw InputError("source and target must differ");
  PathIterator it(g, s, t, std::move(allowed_nodes));
  std::vector<Path> out;
  while (static_cast<int>(out.size()) < k) {
    auto p = it.next();
    if (!p) break;
    out.push_back(std::move(*p));
  }
  return out;
}

/// Per-edge-index mask marking the edges of `removed`.
inline std::vector<char> edge_mask(const Graph& g, const EdgeSet& removed) {
  std::vector<char> mask(g.edge_count(), 0);
  for (std::size_t i = 0; i < g.edge_count(); ++i) {
    if (removed.contains(g.edges()[i].key)) mask[i] = 1;
  }
  return mask;
}

/// Shortest simple s-t path in `g` minus `removed` whose node sequence
/// differs from `p_star`. `p_star` need not be a path of `g`.
inline std::optional<Path> next_shortest_excluding(const Graph& g, NodeId s,
                                                   NodeId t,
                                                   const Path& p_star,
                                                   const EdgeSet& removed = {}) {
  PathIterator it(g, s, t, std::nullopt,
                  removed.empty() ? std::vector<char>{} : edge_mask(g, removed));
  while (auto p = it.next()) {
    if (*p != p_star) return p;
  }
  return std::nullopt;
}

}  // namespace pathattack
