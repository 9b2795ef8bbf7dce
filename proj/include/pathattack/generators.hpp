#pragma once

// Seeded synthetic graph families and edge-weight schemes. Every generator
// draws all of its randomness from one Rng seeded from the spec.

#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "pathattack/graph.hpp"
#include "pathattack/set_cover.hpp"

namespace pathattack {

enum class Family { kErdosRenyi, kBarabasiAlbert, kKronecker, kLattice, kComplete };

inline std::string_view family_name(Family f) {
  switch (f) {
    case Family::kErdosRenyi: return "er";
    case Family::kBarabasiAlbert: return "ba";
    case Family::kKronecker: return "kronecker";
    case Family::kLattice: return "lattice";
    case Family::kComplete: return "complete";
  }
  return "unknown";
}

inline Family parse_family(std::string_view name) {
  for (Family f : {Family::kErdosRenyi, Family::kBarabasiAlbert, Family::kKronecker,
                   Family::kLattice, Family::kComplete}) {
    if (family_name(f) == name) return f;
  }
  throw InputError("unknown graph family '" + std::string(name) + "'");
}

/// Parameters for one synthetic graph. Only the fields of `family` are read.
struct GeneratorSpec {
  Family family = Family::kErdosRenyi;
  int n = 0;                  // er, ba, complete
  double p = 0.0;             // er edge probability
  int m = 0;                  // ba attachment degree
  std::array<double, 3> initiator{0.9, 0.5, 0.1};  // kronecker [[a,b],[b,c]]
  int iterations = 0;         // kronecker: 2^iterations nodes
  double density = 0.0;       // kronecker expected edges / C(n,2)
  int rows = 0;               // lattice
  int cols = 0;               // lattice
  std::uint64_t seed = 0;

  static GeneratorSpec er(int n, double p, std::uint64_t seed) {
    GeneratorSpec s;
    s.family = Family::kErdosRenyi;
    s.n = n;
    s.p = p;
    s.seed = seed;
    return s;
  }
  static GeneratorSpec ba(int n, int m, std::uint64_t seed) {
    GeneratorSpec s;
    s.family = Family::kBarabasiAlbert;
    s.n = n;
    s.m = m;
    s.seed = seed;
    return s;
  }
  static GeneratorSpec kronecker(int iterations, double density, std::uint64_t seed) {
    GeneratorSpec s;
    s.family = Family::kKronecker;
    s.iterations = iterations;
    s.density = density;
    s.seed = seed;
    return s;
  }
  static GeneratorSpec lattice(int rows, int cols) {
    GeneratorSpec s;
    s.family = Family::kLattice;
    s.rows = rows;
    s.cols = cols;
    return s;
  }
  static GeneratorSpec complete(int n) {
    GeneratorSpec s;
    s.family = Family::kComplete;
    s.n = n;
    return s;
  }

  void validate() const {
    switch (family) {
      case Family::kErdosRenyi:
        if (n < 1 || !(p >= 0.0 && p <= 1.0)) throw InputError("er needs n >= 1 and 0 <= p <= 1");
        break;
      case Family::kBarabasiAlbert:
        if (m < 1 || n < m + 1) throw InputError("ba needs m >= 1 and n > m");
        break;
      case Family::kKronecker:
        if (iterations < 1 || iterations > 20) throw InputError("kronecker needs 1 <= iterations <= 20");
        if (!(density > 0.0 && density <= 1.0)) throw InputError("kronecker density must lie in (0, 1]");
        for (double x : initiator) {
          if (!(x > 0.0 && x <= 1.0)) throw InputError("initiator entries must lie in (0, 1]");
        }
        break;
      case Family::kLattice:
        if (rows < 1 || cols < 1) throw InputError("lattice needs rows, cols >= 1");
        break;
      case Family::kComplete:
        if (n < 1) throw InputError("complete needs n >= 1");
        break;
    }
  }
};

namespace detail {

// Unweighted placeholder: generators emit weight = cost = 1; assign_weights
// replaces both.
inline void add_unit_edge(Graph& g, NodeId a, NodeId b) { g.add_edge(a, b, 1.0, 1.0); }

inline Graph erdos_renyi(int n, double p, Rng& rng) {
  Graph g(n);
  if (p <= 0.0 || n < 2) return g;
  if (p >= 1.0) {
    for (NodeId u = 0; u < n; ++u) {
      for (NodeId v = u + 1; v < n; ++v) add_unit_edge(g, u, v);
    }
    return g;
  }
  // Geometric skipping over the pairs (v, w), w < v (Batagelj & Brandes).
  const double log_q = std::log(1.0 - p);
  std::int64_t v = 1;
  std::int64_t w = -1;
  while (v < n) {
    const double r = uniform01(rng);
    w += 1 + static_cast<std::int64_t>(std::floor(std::log(1.0 - r) / log_q));
    while (w >= v && v < n) {
      w -= v;
      ++v;
    }
    if (v < n) add_unit_edge(g, static_cast<NodeId>(w), static_cast<NodeId>(v));
  }
  return g;
}

// Seed with K_m; each new node links to m distinct existing nodes chosen
// proportionally to degree.
inline Graph barabasi_albert(int n, int m, Rng& rng) {
  Graph g(n);
  std::vector<NodeId> endpoints;  // node repeated once per incident edge
  for (NodeId u = 0; u < m; ++u) {
    for (NodeId v = u + 1; v < m; ++v) {
      add_unit_edge(g, u, v);
      endpoints.push_back(u);
      endpoints.push_back(v);
    }
  }
  for (NodeId fresh = m; fresh < n; ++fresh) {
    std::vector<NodeId> targets;
    std::unordered_set<NodeId> chosen;
    while (static_cast<int>(targets.size()) < m) {
      NodeId pick;
      if (endpoints.empty()) {
        pick = static_cast<NodeId>(rng() % static_cast<std::uint64_t>(fresh));
      } else {
        pick = endpoints[rng() % endpoints.size()];
      }
      if (chosen.insert(pick).second) targets.push_back(pick);
    }
    for (NodeId target : targets) {
      add_unit_edge(g, fresh, target);
      endpoints.push_back(fresh);
      endpoints.push_back(target);
    }
  }
  return g;
}

// Kronecker power of the symmetric initiator [[a,b],[b,c]] gives a base
// probability K(u,v); each pair is kept with probability min(1, scale * K)
// where scale is solved so the expected edge count is density * C(n,2).
inline double kronecker_entry(const std::array<double, 3>& init, int k, NodeId u, NodeId v) {
  double prob = 1.0;
  for (int level = 0; level < k; ++level) {
    const int bu = (u >> level) & 1;
    const int bv = (v >> level) & 1;
    prob *= (bu == 0 && bv == 0) ? init[0] : (bu == 1 && bv == 1) ? init[2] : init[1];
  }
  return prob;
}

// K(u,v) only depends on how many bit positions are (0,0), (1,1) or mixed,
// so the expected edge count is a sum over those classes: i (0,0) positions,
// j (1,1) positions and l >= 1 mixed positions cover k!/(i! j! l!) * 2^l / 2
// unordered pairs.
inline double kronecker_expected_edges(const std::array<double, 3>& init, int k,
                                       double scale) {
  double total = 0.0;
  for (int i = 0; i <= k; ++i) {
    for (int j = 0; i + j < k; ++j) {
      const int l = k - i - j;
      const double log_count = std::lgamma(k + 1.0) - std::lgamma(i + 1.0) -
                               std::lgamma(j + 1.0) - std::lgamma(l + 1.0) +
                               (l - 1) * std::log(2.0);
      const double prob = std::pow(init[0], i) * std::pow(init[2], j) * std::pow(init[1], l);
      total += std::exp(log_count) * std::min(1.0, scale * prob);
    }
  }
  return total;
}

inline double kronecker_scale(const std::array<double, 3>& init, int k, double target) {
  double lo = 0.0;
  double hi = 1.0;
  while (kronecker_expected_edges(init, k, hi) < target && hi < 1e300) hi *= 2.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (kronecker_expected_edges(init, k, mid) < target ? lo : hi) = mid;
  }
  return hi;
}

inline Graph kronecker(const GeneratorSpec& spec, Rng& rng) {
  const NodeId n = NodeId{1} << spec.iterations;
  Graph g(n);
  const double pairs = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
  const double scale = kronecker_scale(spec.initiator, spec.iterations, spec.density * pairs);
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = u + 1; v < n; ++v) {
      const double prob = std::min(1.0, scale * kronecker_entry(spec.initiator, spec.iterations, u, v));
      if (uniform01(rng) < prob) add_unit_edge(g, u, v);
    }
  }
  return g;
}

}  // namespace detail

/// Deterministic function of `spec` (including its seed). Edges carry unit
/// weight and cost until assign_weights is applied.
inline Graph generate(const GeneratorSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  switch (spec.family) {
    case Family::kErdosRenyi:
      return detail::erdos_renyi(spec.n, spec.p, rng);
    case Family::kBarabasiAlbert:
      return detail::barabasi_albert(spec.n, spec.m, rng);
    case Family::kKronecker:
      return detail::kronecker(spec, rng);
    case Family::kLattice: {
      Graph g(spec.rows * spec.cols);
      for (int r = 0; r < spec.rows; ++r) {
        for (int c = 0; c < spec.cols; ++c) {
          const NodeId id = r * spec.cols + c;
          if (c + 1 < spec.cols) detail::add_unit_edge(g, id, id + 1);
          if (r + 1 < spec.rows) detail::add_unit_edge(g, id, id + spec.cols);
        }
      }
      return g;
    }
    case Family::kComplete: {
      Graph g(spec.n);
      for (NodeId u = 0; u < spec.n; ++u) {
        for (NodeId v = u + 1; v < spec.n; ++v) detail::add_unit_edge(g, u, v);
      }
      return g;
    }
  }
  throw InputError("unknown family");
}

enum class WeightKind { kPoisson, kUniform, kEqual };

inline std::string_view weight_kind_name(WeightKind k) {
  switch (k) {
    case WeightKind::kPoisson: return "poisson";
    case WeightKind::kUniform: return "uniform";
    case WeightKind::kEqual: return "equal";
  }
  return "unknown";
}

inline WeightKind parse_weight_kind(std::string_view name) {
  for (WeightKind k : {WeightKind::kPoisson, WeightKind::kUniform, WeightKind::kEqual}) {
    if (weight_kind_name(k) == name) return k;
  }
  throw InputError("unknown weight scheme '" + std::string(name) + "'");
}

struct WeightScheme {
  WeightKind kind = WeightKind::kEqual;
  double poisson_rate = 20.0;
  int uniform_upper = 41;
  double equal_value = 1.0;
  std::uint64_t seed = 0;
};

/// Poisson(rate) by sequential inversion.
inline int sample_poisson(double rate, Rng& rng) {
  const double u = uniform01(rng);
  double term = std::exp(-rate);
  double cdf = term;
  int k = 0;
  while (u >= cdf && k < 10000) {
    ++k;
    term *= rate / k;
    cdf += term;
  }
  return k;
}

/// Uniform integer in [1, upper] by rejection.
inline int sample_uniform_int(int upper, Rng& rng) {
  const auto span = static_cast<std::uint64_t>(upper);
  const std::uint64_t limit = Rng::max() - (Rng::max() % span);
  std::uint64_t draw;
  do {
    draw = rng();
  } while (draw >= limit);
  return 1 + static_cast<int>(draw % span);
}

/// New graph with every edge weighted per `scheme` (in edge order) and its
/// cost set equal to the weight.
inline Graph assign_weights(const Graph& g, const WeightScheme& scheme) {
  if (scheme.kind == WeightKind::kPoisson && !(scheme.poisson_rate > 0.0)) {
    throw InputError("poisson rate must be positive");
  }
  if (scheme.kind == WeightKind::kUniform && scheme.uniform_upper < 1) {
    throw InputError("uniform upper bound must be >= 1");
  }
  if (scheme.kind == WeightKind::kEqual && !(scheme.equal_value > 0.0)) {
    throw InputError("equal weight must be positive");
  }
  Rng rng(scheme.seed);
  Graph out(g.node_count());
  for (const auto& e : g.edges()) {
    double w = scheme.equal_value;
    if (scheme.kind == WeightKind::kPoisson) {
      w = 1.0 + sample_poisson(scheme.poisson_rate, rng);
    } else if (scheme.kind == WeightKind::kUniform) {
      w = sample_uniform_int(scheme.uniform_upper, rng);
    }
    out.add_edge(e.key.u, e.key.v, w, w);
  }
  return out;
}

}  // namespace pathattack
