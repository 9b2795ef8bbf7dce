#pragma once

// 3-Terminal Cut -> Force Path Cut instance transformation, the decision
// wrapper built on it, and exact brute-force oracles for both problems.

#include <array>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "pathattack/graph.hpp"

namespace pathattack {

/// Raised when an exhaustive oracle is asked to handle too many edges.
class SizeError : public InputError {
 public:
  using InputError::InputError;
};

inline constexpr std::size_t kMaxBruteForceEdges = 22;

/// 3-Terminal Cut input. Edge weights double as removal costs.
struct TerminalCutInstance {
  Graph graph;
  double budget = 0.0;
  std::array<NodeId, 3> terminals{};

  void validate() const {
    for (NodeId n : terminals) graph.check_node(n);
    if (terminals[0] == terminals[1] || terminals[1] == terminals[2] ||
        terminals[0] == terminals[2]) {
      throw InputError("terminals must be distinct");
    }
    if (budget < 0.0) throw InputError("budget must be non-negative");
  }
};

/// Force Path Cut input produced by the transformation; costs equal weights.
struct ForcePathInstance {
  Graph graph;
  Path p_star;
  double budget = 0.0;         // b minus the weight of pre_removed
  EdgeSet pre_removed;         // original edges joining two terminals
  double total_weight = 0.0;   // sum of all original weights
};

/// Removes the original inter-terminal edges and adds the heavy terminal
/// triangle: (s1,s2) and (s2,s3) weigh w_all + 2 eps, (s1,s3) weighs
/// 2 w_all + 3 eps. The target path is the single edge (s1,s3).
inline ForcePathInstance create_force_path_input(const TerminalCutInstance& inst,
                                                 double eps = 1.0) {
  inst.validate();
  if (!(eps > 0.0)) throw InputError("eps must be positive");
  const auto [s1, s2, s3] = inst.terminals;
  const EdgeSet terminal_pairs{{s1, s2}, {s2, s3}, {s1, s3}};

  ForcePathInstance out;
  out.graph = Graph(inst.graph.node_count());
  double removed_weight = 0.0;
  for (const auto& e : inst.graph.edges()) {
    out.total_weight += e.weight;
    if (terminal_pairs.contains(e.key)) {
      out.pre_removed.insert(e.key);
      removed_weight += e.weight;
    }
  }
  for (const auto& e : inst.graph.edges()) {
    if (!terminal_pairs.contains(e.key)) {
      out.graph.add_edge(e.key.u, e.key.v, e.weight, e.weight);
    }
  }
  const double side = out.total_weight + 2.0 * eps;
  const double direct = 2.0 * out.total_weight + 3.0 * eps;
  out.graph.add_edge(s1, s2, side, side);
  out.graph.add_edge(s2, s3, side, side);
  out.graph.add_edge(s1, s3, direct, direct);
  out.p_star = Path{s1, s3};
  out.budget = inst.budget - removed_weight;
  return out;
}

namespace detail {

struct RivalSearch {
  const Graph& g;
  const Path& p_star;
  const std::vector<char>& removed;  // by edge index
  const std::vector<char>& cuttable; // by edge index
  double limit;
  std::vector<NodeId> stack;
  std::vector<char> on_stack;
  std::optional<std::vector<NodeId>> best;
  int best_cuttable = 0;

  void dfs(NodeId at, double length, int cut_count) {
    if (at == p_star.target()) {
      if (stack != p_star.nodes() && (!best || cut_count < best_cuttable)) {
        best = stack;
        best_cuttable = cut_count;
      }
      return;
    }
    for (const auto& nb : g.neighbors(at)) {
      if (removed[nb.edge] || on_stack[nb.node]) continue;
      const double next = length + g.edges()[nb.edge].weight;
      if (!length_leq(next, limit)) continue;
      on_stack[nb.node] = 1;
      stack.push_back(nb.node);
      dfs(nb.node, next, cut_count + (cuttable[nb.edge] ? 1 : 0));
      stack.pop_back();
      on_stack[nb.node] = 0;
    }
  }
};

// A competing path no longer than p* in g minus `removed`, chosen with the
// fewest cuttable edges; found by depth-first enumeration.
inline std::optional<Path> find_rival(const Graph& g, const Path& p_star,
                                      const std::vector<char>& removed,
                                      const std::vector<char>& cuttable) {
  RivalSearch search{g, p_star, removed, cuttable, path_length(g, p_star),
                     {p_star.source()}, std::vector<char>(g.node_count(), 0),
                     std::nullopt, 0};
  search.on_stack[p_star.source()] = 1;
  search.dfs(p_star.source(), 0.0, 0);
  if (!search.best) return std::nullopt;
  return Path(std::move(*search.best));
}

// Ordering of optimal plans: cost, then cardinality, then sorted keys.
inline bool better_plan(double cost, const EdgeSet& edges, double best_cost,
                        const EdgeSet& best_edges) {
  if (length_less(cost, best_cost)) return true;
  if (length_less(best_cost, cost)) return false;
  if (edges.size() != best_edges.size()) return edges.size() < best_edges.size();
  return edges < best_edges;
}

inline std::vector<char> cuttable_mask(const Graph& g, const Path& p_star) {
  const EdgeSet protected_edges = p_star.edge_set();
  std::vector<char> mask(g.edge_count(), 0);
  std::size_t count = 0;
  for (std::size_t i = 0; i < g.edge_count(); ++i) {
    if (!protected_edges.contains(g.edges()[i].key)) {
      mask[i] = 1;
      ++count;
    }
  }
  if (count > kMaxBruteForceEdges) {
    throw SizeError("brute force supports at most " +
                    std::to_string(kMaxBruteForceEdges) + " cuttable edges, got " +
                    std::to_string(count));
  }
  return mask;
}

inline std::int32_t edge_index(const Graph& g, const EdgeKey& e) {
  for (const auto& nb : g.neighbors(e.u)) {
    if (nb.node == e.v) return nb.edge;
  }
  throw InputError("no such edge");
}

}  // namespace detail

/// Exact minimum-cost Force Path Cut by branch and bound: find a competing
/// path, branch on which of its cuttable edges to cut, prune on cost. Ties
/// are broken by fewer edges, then by the sorted edge keys.
inline CutPlan brute_force_force_path_cut(const Graph& g, const Path& p_star) {
  if (p_star.hops() < 1 || !is_path_in(g, p_star)) {
    throw InputError("target path is not an s-t path of the graph");
  }
  const auto cuttable = detail::cuttable_mask(g, p_star);
  std::vector<char> removed(g.edge_count(), 0);
  std::vector<char> forbidden(g.edge_count(), 0);
  EdgeSet current;
  double best_cost = std::numeric_limits<double>::infinity();
  EdgeSet best_edges;
  int explored = 0;

  std::function<void(double)> branch = [&](double cost) {
    ++explored;
    if (length_less(best_cost, cost)) return;
    const auto rival = detail::find_rival(g, p_star, removed, cuttable);
    if (!rival) {
      if (detail::better_plan(cost, current, best_cost, best_edges)) {
        best_cost = cost;
        best_edges = current;
      }
      return;
    }
    std::vector<std::int32_t> undo;
    for (const auto& e : rival->edge_set()) {
      const auto idx = detail::edge_index(g, e);
      if (!cuttable[idx] || forbidden[idx]) continue;
      removed[idx] = 1;
      current.insert(e);
      branch(cost + g.edges()[idx].cost);
      current.erase(e);
      removed[idx] = 0;
      forbidden[idx] = 1;
      undo.push_back(idx);
    }
    for (auto idx : undo) forbidden[idx] = 0;
  };
  branch(0.0);

  CutPlan plan;
  plan.method_tag = "brute-force";
  plan.protected_path = p_star;
  plan.removed_edges = std::move(best_edges);
  plan.total_cost = g.total_cost(plan.removed_edges);
  plan.iterations = explored;
  plan.lp_integral = true;
  return plan;
}

/// Unpruned reference: tries every subset of cuttable edges.
inline CutPlan exhaustive_force_path_cut(const Graph& g, const Path& p_star) {
  if (p_star.hops() < 1 || !is_path_in(g, p_star)) {
    throw InputError("target path is not an s-t path of the graph");
  }
  const auto cuttable = detail::cuttable_mask(g, p_star);
  std::vector<std::int32_t> candidates;
  for (std::size_t i = 0; i < cuttable.size(); ++i) {
    if (cuttable[i]) candidates.push_back(static_cast<std::int32_t>(i));
  }
  double best_cost = std::numeric_limits<double>::infinity();
  EdgeSet best_edges;
  std::vector<char> removed(g.edge_count(), 0);
  const std::uint64_t subsets = std::uint64_t{1} << candidates.size();
  for (std::uint64_t mask = 0; mask < subsets; ++mask) {
    EdgeSet chosen;
    double cost = 0.0;
    for (std::size_t b = 0; b < candidates.size(); ++b) {
      const bool on = (mask >> b) & 1U;
      removed[candidates[b]] = on ? 1 : 0;
      if (on) {
        chosen.insert(g.edges()[candidates[b]].key);
        cost += g.edges()[candidates[b]].cost;
      }
    }
    if (!detail::better_plan(cost, chosen, best_cost, best_edges)) continue;
    if (!detail::find_rival(g, p_star, removed, cuttable)) {
      best_cost = cost;
      best_edges = std::move(chosen);
    }
  }
  CutPlan plan;
  plan.method_tag = "exhaustive";
  plan.protected_path = p_star;
  plan.removed_edges = std::move(best_edges);
  plan.total_cost = g.total_cost(plan.removed_edges);
  plan.lp_integral = true;
  return plan;
}

namespace detail {

struct DisjointSets {
  std::vector<NodeId> parent;
  explicit DisjointSets(NodeId n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  NodeId find(NodeId x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(NodeId a, NodeId b) { parent[find(a)] = find(b); }
};

}  // namespace detail

/// True iff removing some edge set of total weight <= budget leaves the
/// three terminals pairwise disconnected. Exhaustive over edge subsets.
inline bool brute_force_3tc(const TerminalCutInstance& inst) {
  inst.validate();
  const auto& g = inst.graph;
  if (g.edge_count() > kMaxBruteForceEdges) {
    throw SizeError("brute force supports at most " +
                    std::to_string(kMaxBruteForceEdges) + " edges");
  }
  const auto [s1, s2, s3] = inst.terminals;
  const std::size_t m = g.edge_count();
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
    double cost = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      if ((mask >> i) & 1U) cost += g.edges()[i].weight;
    }
    if (!length_leq(cost, inst.budget)) continue;
    detail::DisjointSets sets(g.node_count());
    for (std::size_t i = 0; i < m; ++i) {
      if (!((mask >> i) & 1U)) sets.unite(g.edges()[i].key.u, g.edges()[i].key.v);
    }
    const NodeId r1 = sets.find(s1), r2 = sets.find(s2), r3 = sets.find(s3);
    if (r1 != r2 && r2 != r3 && r1 != r3) return true;
  }
  return false;
}

/// Decides a Force Path Cut instance: can p* be made the exclusive shortest
/// path within `budget`?
using ForcePathDecider =
    std::function<bool(const Graph& g, const Path& p_star, double budget)>;

/// Exact decider backed by brute_force_force_path_cut.
inline bool brute_force_fpc_decision(const Graph& g, const Path& p_star,
                                     double budget) {
  return length_leq(brute_force_force_path_cut(g, p_star).total_cost, budget);
}

/// Decides 3-Terminal Cut by transforming the instance and asking an exact
/// Force Path Cut decider. A negative residual budget answers false.
inline bool solve_3tc_via_fpc(const TerminalCutInstance& inst, double eps = 1.0,
                              const ForcePathDecider& decide = brute_force_fpc_decision) {
  const auto fpc = create_force_path_input(inst, eps);
  if (length_less(fpc.budget, 0.0)) return false;
  return decide(fpc.graph, fpc.p_star, fpc.budget);
}

}  // namespace pathattack
