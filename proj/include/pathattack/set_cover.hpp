#pragma once

// Weighted set cover over competing paths: each cuttable edge is a set
// containing the paths it lies on. Two approximations are provided: the
// greedy most-paths-per-cost rule and LP relaxation with randomized rounding.

#include <cmath>
#include <cstdint>
#include <queue>
#include <random>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "pathattack/graph.hpp"
#include "pathattack/lp.hpp"

namespace pathattack {

using PathSet = std::vector<Path>;

/// Seeded generator used for every randomized step in the library.
using Rng = std::mt19937_64;

/// Uniform double in [0, 1) from the top 53 bits of one draw; portable
/// across standard library implementations.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Per-invocation bookkeeping for the greedy cover. Tables are populated
/// only for edges that appear on some path.
class CoverState {
 public:
  CoverState(const Path& p_star, const PathSet& paths) {
    const EdgeSet protected_edges = p_star.edge_set();
    edges_of_path_.resize(paths.size());
    for (std::size_t p = 0; p < paths.size(); ++p) {
      for (const auto& e : paths[p].edges()) {
        if (protected_edges.contains(e)) continue;
        if (!edges_of_path_[p].insert(e).second) continue;
        paths_of_edge_[e].insert(static_cast<int>(p));
        ++path_count_[e];
      }
      if (edges_of_path_[p].empty()) {
        throw InputError("constraint path lies entirely on the protected path");
      }
    }
  }

  int path_count(const EdgeKey& e) const {
    const auto it = path_count_.find(e);
    return it == path_count_.end() ? 0 : it->second;
  }

  /// Marks every live path through `e` as cut.
  void cut(const EdgeKey& e) {
    const auto it = paths_of_edge_.find(e);
    if (it == paths_of_edge_.end()) return;
    const std::vector<int> covered(it->second.begin(), it->second.end());
    for (int p : covered) {
      for (const auto& other : edges_of_path_[p]) {
        --path_count_[other];
        paths_of_edge_[other].erase(p);
      }
      edges_of_path_[p].clear();
    }
  }

  /// Edges that currently lie on at least one live path.
  std::vector<EdgeKey> live_edges() const {
    std::vector<EdgeKey> out;
    for (const auto& [e, n] : path_count_) {
      if (n > 0) out.push_back(e);
    }
    return out;
  }

  /// Checks the table invariants; used by tests.
  bool consistent() const {
    for (const auto& [e, paths] : paths_of_edge_) {
      if (path_count(e) != static_cast<int>(paths.size())) return false;
      for (int p : paths) {
        if (!edges_of_path_[p].contains(e)) return false;
      }
    }
    for (std::size_t p = 0; p < edges_of_path_.size(); ++p) {
      for (const auto& e : edges_of_path_[p]) {
        const auto it = paths_of_edge_.find(e);
        if (it == paths_of_edge_.end() || !it->second.contains(static_cast<int>(p))) {
          return false;
        }
      }
    }
    return true;
  }

 private:
  std::unordered_map<EdgeKey, std::unordered_set<int>, EdgeKeyHash>
      paths_of_edge_;
  std::vector<std::unordered_set<EdgeKey, EdgeKeyHash>> edges_of_path_;
  std::unordered_map<EdgeKey, int, EdgeKeyHash> path_count_;
};

namespace detail {

struct HeapEntry {
  int count;
  double cost;
  EdgeKey edge;
};

// True when `a` is less cost-effective than `b`. Zero-cost edges rank above
// every finite ratio; ties go to the smaller edge key.
struct LessEffective {
  bool operator()(const HeapEntry& a, const HeapEntry& b) const {
    const bool a_free = a.cost == 0.0;
    const bool b_free = b.cost == 0.0;
    if (a_free != b_free) return b_free;
    if (!a_free) {
      // count/cost compared by cross-multiplication.
      const double lhs = static_cast<double>(a.count) * b.cost;
      const double rhs = static_cast<double>(b.count) * a.cost;
      if (lhs != rhs) return lhs < rhs;
    }
    return b.edge < a.edge;
  }
};

}  // namespace detail

/// Greedy weighted set cover: repeatedly cut the edge removing the most live
/// paths per unit cost until every path in `paths` is cut.
inline EdgeSet greedy_path_cover(const Graph& g, const Path& p_star,
                                 const PathSet& paths) {
  CoverState state(p_star, paths);
  std::priority_queue<detail::HeapEntry, std::vector<detail::HeapEntry>,
                      detail::LessEffective>
      heap;
  for (const auto& e : state.live_edges()) {
    heap.push({state.path_count(e), g.cost(e), e});
  }
  EdgeSet chosen;
  while (!heap.empty()) {
    const auto top = heap.top();
    heap.pop();
    const int live = state.path_count(top.edge);
    if (live == 0) continue;
    if (live != top.count) {
      // Stale entry: counts only decrease, so re-queue at the true value.
      heap.push({live, top.cost, top.edge});
      continue;
    }
    chosen.insert(top.edge);
    state.cut(top.edge);
  }
  return chosen;
}

/// Raised when randomized rounding keeps failing; carries the fractional
/// solution for diagnosis.
class RoundingFailure : public std::runtime_error {
 public:
  RoundingFailure(const std::string& what, LPSolution fractional)
      : std::runtime_error(what), fractional_(std::move(fractional)) {}
  const LPSolution& fractional() const { return fractional_; }

 private:
  LPSolution fractional_;
};

inline constexpr int kMaxRoundingAttempts = 64;

struct LPCoverResult {
  EdgeSet edges;
  LPSolution relaxed;
  int attempts = 0;      // rounding draws performed, >= 1
  double bound_factor = 0.0;  // 4 ln(4|P|)
  bool integral = false;
};

/// Number of Bernoulli rounds per edge: ceil(ln(4|P|)).
inline int rounding_rounds(std::size_t path_count) {
  return static_cast<int>(std::ceil(std::log(4.0 * static_cast<double>(path_count))));
}

/// Solves the relaxed LP over `paths` and rounds it: each edge is drawn
/// ceil(ln 4|P|) times with its fractional value as probability and cut if
/// any draw succeeds. Draws repeat until every path is cut and the cost is
/// within 4 ln(4|P|) of the fractional optimum. Columns within the
/// integrality tolerance of 0 or 1 consume no randomness.
inline LPCoverResult lp_path_cover(const Graph& g, const Path& p_star,
                                   const PathSet& paths, Rng& rng) {
  if (paths.empty()) throw InputError("LP path cover needs at least one path");
  const RelaxedCutLP lp = build_relaxed_lp(g, p_star, paths);
  LPCoverResult result;
  result.relaxed = solve_relaxed(lp);
  if (result.relaxed.status != LPStatus::kOptimal) {
    throw RoundingFailure("relaxed cut LP is infeasible", result.relaxed);
  }
  result.integral = is_integral(result.relaxed);
  result.bound_factor = 4.0 * std::log(4.0 * static_cast<double>(paths.size()));
  const double budget =
      result.bound_factor * result.relaxed.objective_value + kFeasibilityTolerance;
  const int rounds = rounding_rounds(paths.size());
  const auto& values = result.relaxed.values;

  std::vector<char> picked(lp.columns.size());
  for (int attempt = 1; attempt <= kMaxRoundingAttempts; ++attempt) {
    std::fill(picked.begin(), picked.end(), 0);
    for (int round = 0; round < rounds; ++round) {
      for (std::size_t j = 0; j < values.size(); ++j) {
        if (picked[j] || values[j] <= kIntegralityTolerance) continue;
        if (values[j] >= 1.0 - kIntegralityTolerance || uniform01(rng) < values[j]) picked[j] = 1;
      }
    }
    bool covered = true;
    for (const auto& row : lp.rows) {
      bool hit = false;
      for (int j : row) hit = hit || picked[j];
      if (!hit) {
        covered = false;
        break;
      }
    }
    double cost = 0.0;
    for (std::size_t j = 0; j < picked.size(); ++j) {
      if (picked[j]) cost += lp.costs[j];
    }
    if (covered && cost <= budget) {
      result.attempts = attempt;
      for (std::size_t j = 0; j < picked.size(); ++j) {
        if (picked[j]) result.edges.insert(lp.columns[j]);
      }
      return result;
    }
  }
  throw RoundingFailure("randomized rounding exceeded " +
                            std::to_string(kMaxRoundingAttempts) + " attempts",
                        result.relaxed);
}

/// True iff every path in `paths` has an edge in `cut`.
inline bool covers_all(const PathSet& paths, const EdgeSet& cut) {
  for (const auto& p : paths) {
    bool hit = false;
    for (const auto& e : p.edges()) hit = hit || cut.contains(e);
    if (!hit) return false;
  }
  return true;
}

}  // namespace pathattack
