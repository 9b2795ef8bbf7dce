#pragma once

// Force Path Cut attacks: the constraint-generation loop around the two
// set-cover approximations, and the GreedyCost / GreedyEigenscore baselines.

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "pathattack/graph.hpp"
#include "pathattack/lp.hpp"
#include "pathattack/path_enum.hpp"
#include "pathattack/set_cover.hpp"

namespace pathattack {

enum class Method { kPathAttackLP, kPathAttackGreedy, kGreedyCost, kGreedyEigenscore };

inline constexpr Method kAllMethods[] = {Method::kPathAttackLP,
                                         Method::kPathAttackGreedy,
                                         Method::kGreedyCost,
                                         Method::kGreedyEigenscore};

inline std::string_view method_name(Method m) {
  switch (m) {
    case Method::kPathAttackLP: return "pathattack-lp";
    case Method::kPathAttackGreedy: return "pathattack-greedy";
    case Method::kGreedyCost: return "greedy-cost";
    case Method::kGreedyEigenscore: return "greedy-eigenscore";
  }
  return "unknown";
}

inline Method parse_method(std::string_view name) {
  for (Method m : kAllMethods) {
    if (method_name(m) == name) return m;
  }
  throw InputError("unknown method '" + std::string(name) + "'");
}

struct AttackConfig {
  Method method = Method::kPathAttackLP;
  std::uint64_t rng_seed = 0;
  /// Compared against the final cost only; never changes the search.
  std::optional<double> budget;
  /// 0 selects the default of 10 * edge_count.
  int iteration_cap = 0;
  /// GreedyEigenscore: recompute the eigenvector after every cut.
  bool recompute_eigenscores = false;
};

/// An attack that could not finish; `partial()` holds the state reached.
class AttackFailure : public std::runtime_error {
 public:
  AttackFailure(const std::string& what, CutPlan partial)
      : std::runtime_error(what), partial_(std::move(partial)) {}
  const CutPlan& partial() const { return partial_; }

 private:
  CutPlan partial_;
};

class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// True iff every simple s-t path of `g` minus `removed`, other than
/// `p_star`, is strictly longer than `p_star`.
inline bool is_exclusive_shortest(const Graph& g, const Path& p_star,
                                  const EdgeSet& removed = {}) {
  const auto rival =
      next_shortest_excluding(g, p_star.source(), p_star.target(), p_star, removed);
  return !rival || length_less(path_length(g, p_star), path_length(g, *rival));
}

namespace detail {

inline void check_target_path(const Graph& g, const Path& p_star) {
  if (p_star.hops() < 1 || !is_path_in(g, p_star)) {
    throw InputError("target path is not an s-t path of the graph");
  }
}

inline int iteration_cap(const Graph& g, const AttackConfig& cfg) {
  return cfg.iteration_cap > 0 ? cfg.iteration_cap
                               : static_cast<int>(10 * std::max<std::size_t>(1, g.edge_count()));
}

inline void finish_plan(const Graph& g, const AttackConfig& cfg, CutPlan& plan) {
  plan.total_cost = g.total_cost(plan.removed_edges);
  if (cfg.budget) plan.within_budget = plan.total_cost <= *cfg.budget + kLengthTolerance;
}

}  // namespace detail

/// Constraint generation around GreedyPathCover or LP-PathCover: add the
/// shortest competing path while it is not longer than p*, re-solve the
/// cover over all generated paths, repeat.
inline CutPlan pathattack(const Graph& g, const Path& p_star,
                          const AttackConfig& cfg) {
  detail::check_target_path(g, p_star);
  const bool use_lp = cfg.method == Method::kPathAttackLP;
  if (!use_lp && cfg.method != Method::kPathAttackGreedy) {
    throw InputError("pathattack expects a pathattack-* method");
  }
  const NodeId s = p_star.source();
  const NodeId t = p_star.target();
  const double target_length = path_length(g, p_star);
  const int cap = detail::iteration_cap(g, cfg);

  CutPlan plan;
  plan.method_tag = std::string(method_name(cfg.method));
  plan.protected_path = p_star;
  plan.seed = cfg.rng_seed;
  plan.lp_integral = true;  // vacuous until an LP is solved
  Rng rng(cfg.rng_seed);
  PathSet constraints;

  auto rival = next_shortest_excluding(g, s, t, p_star);
  while (rival && length_leq(path_length(g, *rival), target_length)) {
    if (plan.iterations >= cap) {
      detail::finish_plan(g, cfg, plan);
      throw AttackFailure("iteration cap reached", plan);
    }
    constraints.push_back(std::move(*rival));
    if (use_lp) {
      auto cover = lp_path_cover(g, p_star, constraints, rng);
      plan.removed_edges = std::move(cover.edges);
      plan.rounding_retries += cover.attempts - 1;
      plan.lp_integral = cover.integral;
      plan.lp_objective = cover.relaxed.objective_value;
    } else {
      plan.removed_edges = greedy_path_cover(g, p_star, constraints);
    }
    ++plan.iterations;
    plan.constraints_generated = static_cast<int>(constraints.size());
    rival = next_shortest_excluding(g, s, t, p_star, plan.removed_edges);
  }
  detail::finish_plan(g, cfg, plan);
  return plan;
}

/// Principal eigenvector of the unweighted adjacency matrix by power
/// iteration on A + I (the shift keeps bipartite graphs from oscillating).
/// Returns a unit-norm nonnegative vector with ||Av - lambda v|| <= tol *
/// lambda, lambda being the Rayleigh quotient.
inline std::vector<double> principal_eigenvector(const Graph& g,
                                                 double tol = 1e-10,
                                                 int max_iter = 200000) {
  const auto n = static_cast<std::size_t>(g.node_count());
  if (n == 0) throw InputError("graph has no nodes");
  std::vector<double> v(n, 1.0 / std::sqrt(static_cast<double>(n)));
  std::vector<double> av(n);
  auto multiply = [&g](const std::vector<double>& x, std::vector<double>& out) {
    std::fill(out.begin(), out.end(), 0.0);
    for (const auto& e : g.edges()) {
      out[e.key.u] += x[e.key.v];
      out[e.key.v] += x[e.key.u];
    }
  };
  for (int iter = 0; iter <= max_iter; ++iter) {
    multiply(v, av);
    double lambda = 0.0;
    for (std::size_t i = 0; i < n; ++i) lambda += v[i] * av[i];
    double residual = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = av[i] - lambda * v[i];
      residual += r * r;
    }
    if (std::sqrt(residual) <= tol * lambda || lambda == 0.0) return v;
    double norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      av[i] += v[i];
      norm += av[i] * av[i];
    }
    norm = std::sqrt(norm);
    for (std::size_t i = 0; i < n; ++i) v[i] = av[i] / norm;
  }
  throw ConvergenceError("power iteration did not converge in " +
                         std::to_string(max_iter) + " iterations");
}

namespace detail {

// Shared loop of the greedy baselines: while the best rival is not longer
// than p*, cut the edge of the rival preferred by `better(a, b)`.
template <typename Prefer>
CutPlan greedy_baseline(const Graph& g, const Path& p_star,
                        const AttackConfig& cfg, Prefer&& better) {
  check_target_path(g, p_star);
  const NodeId s = p_star.source();
  const NodeId t = p_star.target();
  const double target_length = path_length(g, p_star);
  const EdgeSet protected_edges = p_star.edge_set();
  const int cap = iteration_cap(g, cfg);

  CutPlan plan;
  plan.method_tag = std::string(method_name(cfg.method));
  plan.protected_path = p_star;
  plan.seed = cfg.rng_seed;
  plan.lp_integral = true;

  auto rival = next_shortest_excluding(g, s, t, p_star);
  while (rival && length_leq(path_length(g, *rival), target_length)) {
    if (plan.iterations >= cap) {
      finish_plan(g, cfg, plan);
      throw AttackFailure("iteration cap reached", plan);
    }
    std::optional<EdgeKey> pick;
    for (const auto& e : rival->edges()) {
      if (protected_edges.contains(e)) continue;
      if (!pick || better(e, *pick, plan.removed_edges)) pick = e;
    }
    if (!pick) {
      finish_plan(g, cfg, plan);
      throw AttackFailure("competing path has no cuttable edge", plan);
    }
    plan.removed_edges.insert(*pick);
    ++plan.iterations;
    rival = next_shortest_excluding(g, s, t, p_star, plan.removed_edges);
  }
  finish_plan(g, cfg, plan);
  return plan;
}

}  // namespace detail

/// Baseline: cut the cheapest non-p* edge of the current shortest rival
/// (ties to the smaller edge key).
inline CutPlan greedy_cost(const Graph& g, const Path& p_star,
                           AttackConfig cfg = {}) {
  cfg.method = Method::kGreedyCost;
  return detail::greedy_baseline(
      g, p_star, cfg, [&g](const EdgeKey& a, const EdgeKey& b, const EdgeSet&) {
        const double ca = g.cost(a);
        const double cb = g.cost(b);
        return ca < cb || (ca == cb && a < b);
      });
}

/// Baseline: cut the rival edge with the largest eigenscore / cost, the
/// eigenscore being the product of principal-eigenvector entries at the
/// endpoints. Scores come from the input graph unless
/// cfg.recompute_eigenscores is set.
inline CutPlan greedy_eigenscore(const Graph& g, const Path& p_star,
                                 AttackConfig cfg = {}) {
  cfg.method = Method::kGreedyEigenscore;
  std::vector<double> vec = principal_eigenvector(g);
  EdgeSet scored_against;
  auto refresh = [&](const EdgeSet& removed) {
    if (!cfg.recompute_eigenscores || removed == scored_against) return;
    vec = principal_eigenvector(remove_edges(g, removed));
    scored_against = removed;
  };
  return detail::greedy_baseline(
      g, p_star, cfg,
      [&](const EdgeKey& a, const EdgeKey& b, const EdgeSet& removed) {
        refresh(removed);
        const double sa = vec[a.u] * vec[a.v];
        const double sb = vec[b.u] * vec[b.v];
        const double ca = g.cost(a);
        const double cb = g.cost(b);
        // sa/ca vs sb/cb with zero cost ranking first.
        if ((ca == 0.0) != (cb == 0.0)) return ca == 0.0;
        const double lhs = ca == 0.0 ? sa : sa * cb;
        const double rhs = cb == 0.0 ? sb : sb * ca;
        return lhs > rhs || (lhs == rhs && a < b);
      });
}

/// Dispatches on cfg.method.
inline CutPlan run_attack(const Graph& g, const Path& p_star,
                          const AttackConfig& cfg) {
  switch (cfg.method) {
    case Method::kPathAttackLP:
    case Method::kPathAttackGreedy:
      return pathattack(g, p_star, cfg);
    case Method::kGreedyCost:
      return greedy_cost(g, p_star, cfg);
    case Method::kGreedyEigenscore:
      return greedy_eigenscore(g, p_star, cfg);
  }
  throw InputError("unknown method");
}

}  // namespace pathattack
