// Acceptance suite: one PASS/FAIL line per criterion. Exit status is
// nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <queue>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "pathattack/pathattack.hpp"

namespace pa = pathattack;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;
};

constexpr pa::Method kMethods[] = {pa::Method::kPathAttackLP, pa::Method::kPathAttackGreedy,
                                   pa::Method::kGreedyCost, pa::Method::kGreedyEigenscore};

// Plain Dijkstra distance, written independently of the library search.
double distance(const pa::Graph& g, pa::NodeId s, pa::NodeId t, const pa::EdgeSet& removed) {
  std::vector<double> dist(g.node_count(), INFINITY);
  using Item = std::pair<double, pa::NodeId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  dist[s] = 0;
  heap.push({0, s});
  while (!heap.empty()) {
    const auto [d, u] = heap.top();
    heap.pop();
    if (d > dist[u]) continue;
    if (u == t) return d;
    for (const auto& nb : g.neighbors(u)) {
      const auto& e = g.edges()[nb.edge];
      if (removed.contains(e.key)) continue;
      if (d + e.weight < dist[nb.node]) {
        dist[nb.node] = d + e.weight;
        heap.push({dist[nb.node], nb.node});
      }
    }
  }
  return dist[t];
}

// p* is the strict exclusive shortest path of g - cut iff it survives and,
// for each of its edges, every path avoiding that edge is strictly longer
// (any other simple s-t path misses at least one p* edge).
bool strictly_exclusive(const pa::Graph& g, const pa::Path& p_star, const pa::EdgeSet& cut) {
  double len = 0;
  for (const auto& e : p_star.edges()) {
    if (cut.contains(e)) return false;
    len += g.weight(e);
  }
  for (const auto& e : p_star.edges()) {
    auto without = cut;
    without.insert(e);
    if (!(distance(g, p_star.source(), p_star.target(), without) > len + pa::kLengthTolerance)) {
      return false;
    }
  }
  return true;
}

struct Instance {
  pa::Graph g;
  pa::Path p_star{{0}};
  std::string label;
};

// Builds a weighted instance; nullopt when terminals or the k-th path are
// unavailable.
std::optional<Instance> make_instance(const pa::GeneratorSpec& spec, pa::WeightKind kind, int k,
                                      std::uint64_t seed) {
  auto g = pa::generate(spec);
  pa::WeightScheme scheme;
  scheme.kind = kind;
  scheme.seed = pa::derive_seed(seed, 2);
  g = pa::assign_weights(g, scheme);
  try {
    const auto [s, t] = pa::select_terminals(g, {}, pa::derive_seed(seed, 3));
    auto p_star = pa::select_p_star(g, s, t, k);
    std::ostringstream label;
    label << pa::to_json(spec).dump() << " w=" << pa::weight_kind_name(kind) << " k=" << k;
    return Instance{std::move(g), std::move(p_star), label.str()};
  } catch (const pa::InstanceSkip&) {
    return std::nullopt;
  }
}

// Final-LP-integral runs, for the baseline-ordering criterion.
struct IntegralRun {
  double lp_cost;
  double greedy_cost;
};
std::vector<IntegralRun> integral_runs;

void fail(Verdict& v, const std::string& what) {
  if (v.pass) v.detail = what;
  v.pass = false;
}

Verdict feasibility_suite() {
  Verdict v;
  const std::vector<pa::GeneratorSpec> families = {
      pa::GeneratorSpec::er(100, 0.05, 0),  pa::GeneratorSpec::ba(100, 3, 0),
      pa::GeneratorSpec::lattice(10, 10),   pa::GeneratorSpec::complete(16),
      pa::GeneratorSpec::er(500, 0.012, 0), pa::GeneratorSpec::ba(500, 3, 0),
      pa::GeneratorSpec::lattice(20, 25),   pa::GeneratorSpec::complete(30)};
  const pa::WeightKind kinds[] = {pa::WeightKind::kPoisson, pa::WeightKind::kUniform,
                                  pa::WeightKind::kEqual};
  const int ranks[] = {5, 20, 50};
  int instances = 0;
  int runs = 0;
  int skipped = 0;
  for (std::uint64_t i = 0; instances < 504; ++i) {
    auto spec = families[i % families.size()];
    spec.seed = pa::derive_seed(1, i);
    const auto kind = kinds[(i / families.size()) % 3];
    const int k = ranks[(i / (3 * families.size())) % 3];
    const auto inst = make_instance(spec, kind, k, pa::derive_seed(1, i, 7));
    if (!inst) {
      ++skipped;
      continue;
    }
    ++instances;
    double lp_cost = -1;
    bool lp_integral = false;
    double greedy = -1;
    for (auto m : kMethods) {
      pa::AttackConfig cfg;
      cfg.method = m;
      cfg.rng_seed = i;
      ++runs;
      try {
        const auto plan = pa::run_attack(inst->g, inst->p_star, cfg);
        if (!strictly_exclusive(inst->g, inst->p_star, plan.removed_edges)) {
          fail(v, std::string(pa::method_name(m)) + " infeasible on " + inst->label);
        }
        if (m == pa::Method::kPathAttackLP) {
          lp_cost = plan.total_cost;
          lp_integral = plan.lp_integral;
        }
        if (m == pa::Method::kGreedyCost) greedy = plan.total_cost;
      } catch (const std::exception& e) {
        fail(v, std::string(pa::method_name(m)) + " threw '" + e.what() + "' on " + inst->label);
      }
    }
    if (lp_integral && greedy >= 0) integral_runs.push_back({lp_cost, greedy});
  }
  if (v.pass) {
    v.detail = std::to_string(instances) + " instances, " + std::to_string(runs) +
               " runs feasible (" + std::to_string(skipped) + " draws skipped)";
  }
  return v;
}

// Brute-forceable set shared by criteria 2 and 3.
struct SmallRun {
  double opt;
  double lp_cost;
  double lp_objective;
  int constraints;
  bool lp_integral;
  double greedy_cover_cost;
  std::size_t edges;
};
std::vector<SmallRun> small_runs;

void build_small_runs() {
  const pa::WeightKind kinds[] = {pa::WeightKind::kPoisson, pa::WeightKind::kUniform,
                                  pa::WeightKind::kEqual};
  const int ranks[] = {2, 3, 5, 8};
  for (std::uint64_t i = 0; small_runs.size() < 240; ++i) {
    const int n = 6 + static_cast<int>(i % 5);
    auto spec = pa::GeneratorSpec::er(n, 0.45, pa::derive_seed(2, i));
    const auto inst = make_instance(spec, kinds[i % 3], ranks[(i / 3) % 4], pa::derive_seed(2, i, 7));
    if (!inst) continue;
    const auto cuttable = inst->g.edge_count() - inst->p_star.hops();
    if (cuttable > 20) continue;
    const auto best = pa::brute_force_force_path_cut(inst->g, inst->p_star);
    pa::AttackConfig cfg;
    cfg.rng_seed = i;
    cfg.method = pa::Method::kPathAttackLP;
    const auto lp = pa::run_attack(inst->g, inst->p_star, cfg);
    cfg.method = pa::Method::kPathAttackGreedy;
    const auto greedy = pa::run_attack(inst->g, inst->p_star, cfg);
    small_runs.push_back({best.total_cost, lp.total_cost, lp.lp_objective, lp.constraints_generated,
                          lp.lp_integral, greedy.total_cost, inst->g.edge_count()});
    cfg.method = pa::Method::kGreedyCost;
    if (lp.lp_integral) {
      integral_runs.push_back({lp.total_cost, pa::run_attack(inst->g, inst->p_star, cfg).total_cost});
    }
  }
}

Verdict optimality_vs_brute_force() {
  Verdict v;
  int integral = 0;
  for (const auto& r : small_runs) {
    if (!r.lp_integral) continue;
    ++integral;
    if (!pa::length_equal(r.lp_cost, r.opt)) {
      fail(v, "integral LP cost " + std::to_string(r.lp_cost) + " != optimum " +
                  std::to_string(r.opt));
    }
  }
  const double fraction = static_cast<double>(integral) / static_cast<double>(small_runs.size());
  if (fraction < 0.90) fail(v, "LP-integral fraction " + std::to_string(fraction) + " < 0.90");
  if (small_runs.size() < 200) fail(v, "only " + std::to_string(small_runs.size()) + " instances");
  if (v.pass) {
    v.detail = std::to_string(small_runs.size()) + " instances, integral fraction " +
               std::to_string(fraction) + ", all integral runs optimal";
  }
  return v;
}

Verdict approximation_certificates() {
  Verdict v;
  for (const auto& r : small_runs) {
    if (r.greedy_cover_cost > oracle::harmonic(r.edges) * r.opt + 1e-9) {
      fail(v, "greedy exceeds H_M bound");
    }
    const double factor = 4.0 * std::log(4.0 * r.constraints);
    if (r.constraints > 0 && r.lp_cost > factor * r.lp_objective + 1e-9) {
      fail(v, "LP rounding exceeds 4 ln(4|P|) bound");
    }
    if (r.lp_objective > r.opt + 1e-9) fail(v, "LP fractional above optimum");
  }
  if (v.pass) v.detail = std::to_string(small_runs.size()) + " instances, all certificates hold";
  return v;
}

Verdict clique_regression() {
  Verdict v;
  int worst_constraints = 0;
  for (int n = 5; n <= 20; ++n) {
    const auto g = oracle::clique_instance(n, n);
    const pa::Path p_star({0, static_cast<pa::NodeId>(n - 1)});
    for (auto m : kMethods) {
      pa::AttackConfig cfg;
      cfg.method = m;
      const auto plan = pa::run_attack(g, p_star, cfg);
      if (plan.total_cost != n - 2) {
        fail(v, "N=" + std::to_string(n) + " " + std::string(pa::method_name(m)) + " cost " +
                    std::to_string(plan.total_cost));
      }
      if (!strictly_exclusive(g, p_star, plan.removed_edges)) fail(v, "infeasible clique plan");
      if (m == pa::Method::kPathAttackLP || m == pa::Method::kPathAttackGreedy) {
        const int bound = (n - 2) * (n - 2) + (n - 2);
        if (plan.constraints_generated > bound) {
          fail(v, "N=" + std::to_string(n) + " generated " +
                      std::to_string(plan.constraints_generated) + " > " + std::to_string(bound));
        }
        worst_constraints = std::max(worst_constraints, plan.constraints_generated);
      }
    }
  }
  if (v.pass) {
    v.detail = "N=5..20 all methods cost N-2; max constraints " + std::to_string(worst_constraints);
  }
  return v;
}

// Compares both deciders on one instance for every budget in the grid and
// each eps; the Force Path Cut optimum is computed once per eps.
void check_reduction(const pa::Graph& g, Verdict& v, long& comparisons) {
  pa::TerminalCutInstance inst;
  inst.graph = g;
  inst.terminals = {0, 1, 2};
  double w_all = 0;
  for (const auto& e : g.edges()) w_all += e.weight;
  std::map<double, double> optimum;  // eps -> min FPC cost
  for (double b = 0; b <= w_all + 0.5; b += 0.5) {
    inst.budget = b;
    const bool want = pa::brute_force_3tc(inst);
    for (double eps : {0.5, 1.0, 10.0}) {
      auto cached = [&](const pa::Graph& fg, const pa::Path& p, double budget) {
        auto it = optimum.find(eps);
        if (it == optimum.end()) {
          it = optimum.emplace(eps, pa::brute_force_force_path_cut(fg, p).total_cost).first;
        }
        return pa::length_leq(it->second, budget);
      };
      ++comparisons;
      if (pa::solve_3tc_via_fpc(inst, eps, cached) != want) {
        std::ostringstream out;
        pa::save_edge_list(out, g);
        fail(v, "mismatch at b=" + std::to_string(b) + " eps=" + std::to_string(eps) + " on " +
                    out.str());
      }
    }
  }
}

Verdict reduction_equivalence() {
  Verdict v;
  long graphs = 0;
  long comparisons = 0;
  for (int n = 3; n <= 5; ++n) {
    std::vector<pa::EdgeKey> pairs;
    for (pa::NodeId a = 0; a < n; ++a) {
      for (pa::NodeId b = a + 1; b < n; ++b) pairs.push_back({a, b});
    }
    const int m = static_cast<int>(pairs.size());
    for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
      pa::Graph shape(n);
      for (int i = 0; i < m; ++i) {
        if (mask >> i & 1) shape.add_edge(pairs[i].u, pairs[i].v, 1);
      }
      const auto hops = pa::bfs_hops(shape, 0);
      if (std::any_of(hops.begin(), hops.end(), [](int h) { return h < 0; })) continue;
      const int edges = static_cast<int>(shape.edge_count());
      for (std::uint32_t heavy = 0; heavy < (1u << edges); ++heavy) {
        pa::Graph g(n);
        for (int i = 0; i < edges; ++i) {
          const auto& e = shape.edges()[i];
          g.add_edge(e.key.u, e.key.v, heavy >> i & 1 ? 2 : 1);
        }
        ++graphs;
        check_reduction(g, v, comparisons);
      }
    }
  }
  std::mt19937_64 rng(6);
  for (int i = 0; i < 200; ++i) {
    check_reduction(oracle::random_connected_graph(6, 2 + static_cast<int>(rng() % 5), 3, rng), v,
                    comparisons);
    ++graphs;
  }
  if (v.pass) {
    v.detail = std::to_string(graphs) + " graphs, " + std::to_string(comparisons) +
               " (budget, eps) decisions agree";
  }
  return v;
}

Verdict constraint_parsimony() {
  Verdict v;
  const pa::WeightKind kinds[] = {pa::WeightKind::kPoisson, pa::WeightKind::kUniform,
                                  pa::WeightKind::kEqual};
  const int ranks[] = {5, 20, 50};
  int runs = 0;
  int lean = 0;
  for (std::uint64_t i = 0; i < 36; ++i) {
    auto spec = i % 2 ? pa::GeneratorSpec::ba(500, 10, 0) : pa::GeneratorSpec::er(500, 0.04, 0);
    spec.seed = pa::derive_seed(6, i);
    const auto inst = make_instance(spec, kinds[(i / 2) % 3], ranks[(i / 6) % 3], pa::derive_seed(6, i, 7));
    if (!inst) continue;
    for (auto m : {pa::Method::kPathAttackLP, pa::Method::kPathAttackGreedy}) {
      pa::AttackConfig cfg;
      cfg.method = m;
      cfg.rng_seed = i;
      const auto plan = pa::run_attack(inst->g, inst->p_star, cfg);
      ++runs;
      if (plan.constraints_generated <= 0.05 * static_cast<double>(inst->g.edge_count())) ++lean;
      if (m == pa::Method::kPathAttackLP && plan.lp_integral) {
        cfg.method = pa::Method::kGreedyCost;
        integral_runs.push_back({plan.total_cost, pa::run_attack(inst->g, inst->p_star, cfg).total_cost});
      }
    }
  }
  const double fraction = runs ? static_cast<double>(lean) / runs : 0.0;
  if (runs == 0 || fraction < 0.90) fail(v, "fraction " + std::to_string(fraction) + " < 0.90");
  if (v.pass) {
    v.detail = std::to_string(lean) + "/" + std::to_string(runs) +
               " runs with constraints <= 0.05 M";
  }
  return v;
}

Verdict rounding_behavior() {
  Verdict v;
  // Odd-cycle cover: three competing paths over three cuttable edges with
  // relaxed optimum 1.5 at (1/2, 1/2, 1/2).
  pa::Graph g(4);
  g.add_edge(0, 1, 1);
  g.add_edge(1, 3, 1);
  g.add_edge(1, 2, 1);
  g.add_edge(0, 2, 5);
  g.add_edge(2, 3, 5);
  const pa::Path p_star({0, 2, 3});
  const pa::PathSet paths{pa::Path({0, 1, 3}), pa::Path({0, 2, 1, 3}), pa::Path({0, 1, 2, 3})};
  double attempts = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    pa::Rng rng(seed);
    const auto res = pa::lp_path_cover(g, p_star, paths, rng);
    if (res.integral) fail(v, "instance unexpectedly integral");
    attempts += res.attempts;
  }
  const double mean_attempts = attempts / 100;
  const double mean_retries = mean_attempts - 1;
  if (mean_attempts > 3) fail(v, "mean attempts " + std::to_string(mean_attempts) + " > 3");
  if (v.pass) {
    v.detail = "mean attempts " + std::to_string(mean_attempts) + " (retries " +
               std::to_string(mean_retries) + ") over 100 seeds";
  }
  return v;
}

Verdict oracle_equivalence() {
  Verdict v;
  std::mt19937_64 rng(8);
  long paths = 0;
  for (int i = 0; i < 1000; ++i) {
    const int n = 2 + static_cast<int>(rng() % 7);
    const int m = static_cast<int>(rng() % (n * (n - 1) / 2 + 1));
    const auto g = oracle::random_graph(n, m, 1 + static_cast<int>(rng() % 6), rng);
    const auto s = static_cast<pa::NodeId>(rng() % n);
    const auto t = static_cast<pa::NodeId>((s + 1 + rng() % (n - 1)) % n);
    const auto want = oracle::all_simple_paths(g, s, t);
    const auto sp = pa::shortest_path(g, s, t);
    if (want.empty() != !sp || (sp && sp->nodes() != want.front().nodes)) {
      fail(v, "shortest_path mismatch on instance " + std::to_string(i));
    }
    pa::PathIterator it(g, s, t);
    std::vector<oracle::RankedPath> got;
    while (auto p = it.next()) got.push_back({pa::path_length(g, *p), p->nodes()});
    if (got.size() != want.size()) {
      fail(v, "path count mismatch on instance " + std::to_string(i));
      continue;
    }
    for (std::size_t j = 0; j < got.size(); ++j) {
      if (got[j].nodes != want[j].nodes || got[j].length != want[j].length) {
        fail(v, "ranked path mismatch on instance " + std::to_string(i));
      }
    }
    paths += static_cast<long>(got.size());
  }
  if (v.pass) v.detail = "1000 graphs, " + std::to_string(paths) + " ranked paths identical";
  return v;
}

Verdict baseline_ordering() {
  Verdict v;
  for (const auto& r : integral_runs) {
    const bool ok = r.greedy_cost > 0 ? r.lp_cost / r.greedy_cost <= 1.0 + 1e-12
                                      : r.lp_cost <= 0.0;
    if (!ok) {
      fail(v, "LP cost " + std::to_string(r.lp_cost) + " > greedy-cost " +
                  std::to_string(r.greedy_cost));
    }
  }
  if (integral_runs.empty()) fail(v, "no integral runs collected");
  if (v.pass) v.detail = std::to_string(integral_runs.size()) + " integral-LP instances, ratio <= 1";
  return v;
}

Verdict determinism() {
  Verdict v;
  const auto dir = std::filesystem::temp_directory_path() / "pathattack_acceptance";
  std::filesystem::create_directories(dir);
  auto run = [&](const std::string& name) {
    pa::ExperimentConfig cfg;
    cfg.generator = pa::GeneratorSpec::er(100, 0.05, 0);
    cfg.weights = pa::WeightKind::kPoisson;
    cfg.ranks = {5, 20};
    cfg.repetitions = 4;
    cfg.master_seed = 2024;
    cfg.output = (dir / name).string();
    pa::run_experiments(cfg);
    std::ifstream in(cfg.output + ".records.jsonl", std::ios::binary);
    std::ostringstream bytes;
    bytes << in.rdbuf();
    return bytes.str();
  };
  const auto a = run("first");
  const auto b = run("second");
  if (a.empty()) fail(v, "no records written");
  if (a != b) fail(v, "record files differ");
  if (v.pass) v.detail = std::to_string(a.size()) + " record bytes identical across runs";
  return v;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Verdict()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "feasibility suite", feasibility_suite},
      {2, "optimality vs brute force",
       [] {
         build_small_runs();
         return optimality_vs_brute_force();
       }},
      {3, "approximation certificates", approximation_certificates},
      {4, "clique regression", clique_regression},
      {5, "reduction equivalence", reduction_equivalence},
      {6, "constraint parsimony", constraint_parsimony},
      {7, "rounding behavior", rounding_behavior},
      {8, "oracle equivalence", oracle_equivalence},
      {9, "baseline ordering", baseline_ordering},
      {10, "determinism", determinism},
  };
  bool all = true;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s [%d] %s: %s (%.1fs)\n", v.pass ? "PASS" : "FAIL", c.id, c.name,
                v.detail.c_str(), secs);
    std::fflush(stdout);
    all = all && v.pass;
  }
  return all ? 0 : 1;
}
