#pragma once

// Experiment plumbing: edge-list files, terminal and target-path selection,
// batch runs over methods, and result records.

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <chrono>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "json.hpp"
#include "pathattack/attack.hpp"
#include "pathattack/generators.hpp"
#include "pathattack/graph.hpp"
#include "pathattack/path_enum.hpp"

namespace pathattack {

using json = nlohmann::json;

class ParseError : public InputError {
 public:
  ParseError(const std::string& what, int line)
      : InputError("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// The instance cannot be used (no qualifying terminals, too few paths).
/// Experiments record it and move on.
class InstanceSkip : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Graph plus the external node labels it was read with.
struct LabeledGraph {
  Graph graph;
  std::vector<std::string> labels;     // labels[id]
  std::vector<std::string> warnings;   // non-fatal ingestion notes

  NodeId id_of(const std::string& label) const {
    const auto it = std::find(labels.begin(), labels.end(), label);
    if (it == labels.end()) throw InputError("unknown node label '" + label + "'");
    return static_cast<NodeId>(it - labels.begin());
  }
};

namespace detail {

inline std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline std::optional<double> parse_number(const std::string& token) {
  double value = 0.0;
  const auto* end = token.data() + token.size();
  const auto res = std::from_chars(token.data(), end, value);
  if (res.ec != std::errc() || res.ptr != end) return std::nullopt;
  return value;
}

}  // namespace detail

/// Reads the edge-list format:
///
///   # comment                 (anything after '#' is ignored)
///   #! nodes N                (optional; declares nodes labelled 0..N-1)
///   u v [weight [cost]]       (weight defaults to 1, cost to weight)
///
/// Labels are arbitrary whitespace-free tokens mapped to dense ids in order
/// of first appearance. Duplicate edges keep the first record and self-loops
/// are dropped; both add a warning.
inline LabeledGraph load_edge_list(std::istream& in) {
  struct Record {
    NodeId u, v;
    double w, c;
  };
  LabeledGraph out;
  std::unordered_map<std::string, NodeId> ids;
  auto intern = [&](const std::string& label) {
    auto [it, fresh] = ids.try_emplace(label, static_cast<NodeId>(out.labels.size()));
    if (fresh) out.labels.push_back(label);
    return it->second;
  };
  std::vector<Record> records;
  std::map<EdgeKey, int> first_line;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.rfind("#!", 0) == 0) {
      std::istringstream directive(line.substr(2));
      std::string key;
      long long count = -1;
      directive >> key >> count;
      if (key != "nodes" || count < 0 || !records.empty() || !out.labels.empty()) {
        throw ParseError("bad directive '" + line + "'", line_no);
      }
      for (long long i = 0; i < count; ++i) intern(std::to_string(i));
      continue;
    }
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream fields(line);
    std::vector<std::string> tokens;
    for (std::string tok; fields >> tok;) tokens.push_back(tok);
    if (tokens.empty()) continue;
    if (tokens.size() < 2 || tokens.size() > 4) {
      throw ParseError("expected 'u v [weight [cost]]'", line_no);
    }
    double w = 1.0;
    if (tokens.size() >= 3) {
      const auto parsed = detail::parse_number(tokens[2]);
      if (!parsed || !(*parsed >= 0.0) || !std::isfinite(*parsed)) {
        throw ParseError("invalid weight '" + tokens[2] + "'", line_no);
      }
      w = *parsed;
    }
    double c = w;
    if (tokens.size() == 4) {
      const auto parsed = detail::parse_number(tokens[3]);
      if (!parsed || !(*parsed >= 0.0) || !std::isfinite(*parsed)) {
        throw ParseError("invalid cost '" + tokens[3] + "'", line_no);
      }
      c = *parsed;
    }
    const NodeId u = intern(tokens[0]);
    const NodeId v = intern(tokens[1]);
    if (u == v) {
      out.warnings.push_back("line " + std::to_string(line_no) + ": dropped self-loop on '" +
                             tokens[0] + "'");
      continue;
    }
    const auto [it, fresh] = first_line.try_emplace(EdgeKey(u, v), line_no);
    if (!fresh) {
      out.warnings.push_back("line " + std::to_string(line_no) +
                             ": duplicate edge, keeping line " + std::to_string(it->second));
      continue;
    }
    records.push_back({u, v, w, c});
  }
  out.graph = Graph(static_cast<NodeId>(out.labels.size()));
  for (const auto& r : records) out.graph.add_edge(r.u, r.v, r.w, r.c);
  return out;
}

inline LabeledGraph load_edge_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open edge list '" + path + "'");
  return load_edge_list(in);
}

/// Writes `g` in the format read by load_edge_list. Without labels, node ids
/// are written and a `#! nodes N` directive preserves isolated nodes.
inline void save_edge_list(std::ostream& out, const Graph& g,
                           const std::vector<std::string>& labels = {}) {
  const bool identity = labels.empty();
  if (!identity && labels.size() != static_cast<std::size_t>(g.node_count())) {
    throw InputError("label count does not match node count");
  }
  if (identity) out << "#! nodes " << g.node_count() << "\n";
  auto name = [&](NodeId n) { return identity ? std::to_string(n) : labels[n]; };
  for (const auto& e : g.edges()) {
    out << name(e.key.u) << ' ' << name(e.key.v) << ' ' << detail::format_number(e.weight)
        << ' ' << detail::format_number(e.cost) << '\n';
  }
}

inline void save_edge_list(const std::string& path, const Graph& g,
                           const std::vector<std::string>& labels = {}) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write edge list '" + path + "'");
  save_edge_list(out, g, labels);
}

enum class TerminalMode { kUniform, kHopDistance };

struct TerminalSelection {
  TerminalMode mode = TerminalMode::kUniform;
  int hops = 50;           // hop mode: exact BFS distance from s to t
  int neighborhood = 60;   // hop mode: p* search confined to this radius of s
  int max_retries = 100;
};

/// SplitMix64 step; used to derive independent stream seeds.
inline std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0) {
  return mix_seed(mix_seed(mix_seed(master) ^ a) ^ b);
}

/// Picks (s, t). Uniform mode draws both uniformly with t != s and t
/// reachable from s; hop mode draws s uniformly and t uniformly among nodes
/// exactly `hops` BFS hops away. Throws InstanceSkip after max_retries.
inline std::pair<NodeId, NodeId> select_terminals(const Graph& g, const TerminalSelection& sel,
                                                  std::uint64_t seed) {
  if (g.node_count() < 2) throw InstanceSkip("graph has fewer than two nodes");
  Rng rng(seed);
  const auto n = static_cast<std::uint64_t>(g.node_count());
  for (int attempt = 0; attempt < sel.max_retries; ++attempt) {
    const auto s = static_cast<NodeId>(rng() % n);
    const auto hops = bfs_hops(g, s);
    if (sel.mode == TerminalMode::kUniform) {
      auto t = static_cast<NodeId>(rng() % (n - 1));
      if (t >= s) ++t;
      if (hops[t] > 0) return {s, t};
    } else {
      std::vector<NodeId> ring;
      for (NodeId v = 0; v < g.node_count(); ++v) {
        if (hops[v] == sel.hops) ring.push_back(v);
      }
      if (!ring.empty()) return {s, ring[rng() % ring.size()]};
    }
  }
  throw InstanceSkip("no qualifying terminal pair after " + std::to_string(sel.max_retries) +
                     " attempts");
}

/// Node mask of everything within `radius` hops of `s`.
inline std::vector<char> hop_neighborhood(const Graph& g, NodeId s, int radius) {
  const auto hops = bfs_hops(g, s);
  std::vector<char> mask(g.node_count(), 0);
  for (NodeId v = 0; v < g.node_count(); ++v) mask[v] = hops[v] >= 0 && hops[v] <= radius;
  return mask;
}

/// The k-th shortest simple s-t path (1-based) in ranked order; InstanceSkip
/// when fewer than k exist.
inline Path select_p_star(const Graph& g, NodeId s, NodeId t, int k,
                          std::optional<std::vector<char>> allowed_nodes = std::nullopt) {
  auto paths = k_shortest_paths(g, s, t, k, std::move(allowed_nodes));
  if (static_cast<int>(paths.size()) < k) {
    throw InstanceSkip("only " + std::to_string(paths.size()) + " simple paths, need " +
                       std::to_string(k));
  }
  return std::move(paths.back());
}

struct ExperimentConfig {
  std::optional<GeneratorSpec> generator;  // else edge_list_path
  std::string edge_list_path;
  std::optional<WeightKind> weights;       // nullopt: keep file weights
  WeightScheme weight_params;              // rate/upper/value; seed is derived
  TerminalSelection terminals;
  std::vector<int> ranks{5, 20, 50};
  std::vector<Method> methods{std::begin(kAllMethods), std::end(kAllMethods)};
  int repetitions = 20;
  std::uint64_t master_seed = 1;
  std::string output;                      // file prefix; empty writes nothing

  void validate() const {
    if (!generator && edge_list_path.empty()) {
      throw InputError("experiment needs a generator or an edge list");
    }
    if (generator) generator->validate();
    if (!generator && !edge_list_path.empty() && weights == std::nullopt) {
      // file weights; fine
    }
    if (generator && !weights) throw InputError("generated graphs need a weight scheme");
    if (ranks.empty()) throw InputError("at least one p* rank is required");
    for (int k : ranks) {
      if (k < 1) throw InputError("p* ranks must be positive");
    }
    if (methods.empty()) throw InputError("at least one method is required");
    if (repetitions < 1) throw InputError("repetitions must be positive");
  }
};

struct ExperimentRecord {
  std::string run_id;
  std::string instance;       // replayable descriptor
  std::string method;
  std::string status;         // ok | failed | skipped
  std::string message;
  int repetition = 0;
  int rank = 0;
  NodeId source = -1;
  NodeId target = -1;
  int nodes = 0;
  std::size_t edges = 0;
  std::uint64_t seed = 0;
  double total_cost = 0.0;
  double p_star_length = 0.0;
  int p_star_hops = 0;
  int iterations = 0;
  int constraints_generated = 0;
  int rounding_retries = 0;
  bool lp_integral = false;
  bool verified = false;
  std::optional<double> cost_reduction_ratio;
  double wall_time_s = 0.0;   // excluded from the deterministic record line
};

// ---------------------------------------------------------------------------
// JSON forms

inline json to_json(const GeneratorSpec& s) {
  json j{{"family", std::string(family_name(s.family))}, {"seed", s.seed}};
  switch (s.family) {
    case Family::kErdosRenyi: j["n"] = s.n; j["p"] = s.p; break;
    case Family::kBarabasiAlbert: j["n"] = s.n; j["m"] = s.m; break;
    case Family::kKronecker:
      j["iterations"] = s.iterations;
      j["density"] = s.density;
      j["initiator"] = s.initiator;
      break;
    case Family::kLattice: j["rows"] = s.rows; j["cols"] = s.cols; break;
    case Family::kComplete: j["n"] = s.n; break;
  }
  return j;
}

inline GeneratorSpec generator_from_json(const json& j) {
  GeneratorSpec s;
  s.family = parse_family(j.at("family").get<std::string>());
  s.seed = j.value("seed", std::uint64_t{0});
  s.n = j.value("n", 0);
  s.p = j.value("p", 0.0);
  s.m = j.value("m", 0);
  s.iterations = j.value("iterations", 0);
  s.density = j.value("density", 0.0);
  if (j.contains("initiator")) s.initiator = j.at("initiator").get<std::array<double, 3>>();
  s.rows = j.value("rows", 0);
  s.cols = j.value("cols", 0);
  s.validate();
  return s;
}

inline json to_json(const ExperimentConfig& c) {
  json j;
  if (c.generator) j["generator"] = to_json(*c.generator);
  if (!c.edge_list_path.empty()) j["edge_list"] = c.edge_list_path;
  j["weights"] = c.weights ? json(std::string(weight_kind_name(*c.weights))) : json("file");
  j["poisson_rate"] = c.weight_params.poisson_rate;
  j["uniform_upper"] = c.weight_params.uniform_upper;
  j["equal_value"] = c.weight_params.equal_value;
  j["terminals"] = c.terminals.mode == TerminalMode::kUniform ? "uniform" : "hops";
  j["hops"] = c.terminals.hops;
  j["neighborhood"] = c.terminals.neighborhood;
  j["ranks"] = c.ranks;
  std::vector<std::string> methods;
  for (Method m : c.methods) methods.emplace_back(method_name(m));
  j["methods"] = methods;
  j["repetitions"] = c.repetitions;
  j["seed"] = c.master_seed;
  j["output"] = c.output;
  return j;
}

inline ExperimentConfig config_from_json(const json& j) {
  ExperimentConfig c;
  if (j.contains("generator")) c.generator = generator_from_json(j.at("generator"));
  c.edge_list_path = j.value("edge_list", std::string{});
  const auto weights = j.value("weights", std::string("file"));
  if (weights != "file") c.weights = parse_weight_kind(weights);
  c.weight_params.poisson_rate = j.value("poisson_rate", 20.0);
  c.weight_params.uniform_upper = j.value("uniform_upper", 41);
  c.weight_params.equal_value = j.value("equal_value", 1.0);
  const auto mode = j.value("terminals", std::string("uniform"));
  if (mode == "uniform") {
    c.terminals.mode = TerminalMode::kUniform;
  } else if (mode == "hops") {
    c.terminals.mode = TerminalMode::kHopDistance;
  } else {
    throw InputError("terminals must be 'uniform' or 'hops'");
  }
  c.terminals.hops = j.value("hops", 50);
  c.terminals.neighborhood = j.value("neighborhood", 60);
  if (j.contains("ranks")) c.ranks = j.at("ranks").get<std::vector<int>>();
  if (j.contains("methods")) {
    c.methods.clear();
    for (const auto& name : j.at("methods")) c.methods.push_back(parse_method(name.get<std::string>()));
  }
  c.repetitions = j.value("repetitions", 20);
  c.master_seed = j.value("seed", std::uint64_t{1});
  c.output = j.value("output", std::string{});
  c.validate();
  return c;
}

/// Deterministic record line (no wall time).
inline json to_json(const ExperimentRecord& r) {
  json j{{"run_id", r.run_id},
         {"instance", r.instance},
         {"method", r.method},
         {"status", r.status},
         {"repetition", r.repetition},
         {"rank", r.rank},
         {"source", r.source},
         {"target", r.target},
         {"nodes", r.nodes},
         {"edges", r.edges},
         {"seed", r.seed}};
  if (!r.message.empty()) j["message"] = r.message;
  if (r.status == "ok" || r.status == "failed") {
    j["total_cost"] = r.total_cost;
    j["p_star_length"] = r.p_star_length;
    j["p_star_hops"] = r.p_star_hops;
    j["iterations"] = r.iterations;
    j["constraints_generated"] = r.constraints_generated;
    j["rounding_retries"] = r.rounding_retries;
    j["lp_integral"] = r.lp_integral;
    j["verified"] = r.verified;
    j["cost_reduction_ratio"] = r.cost_reduction_ratio ? json(*r.cost_reduction_ratio) : json();
  }
  return j;
}

inline json to_json(const CutPlan& plan, const std::vector<std::string>& labels = {}) {
  auto name = [&](NodeId n) { return labels.empty() ? json(n) : json(labels[n]); };
  json edges = json::array();
  for (const auto& e : plan.removed_edges) edges.push_back({name(e.u), name(e.v)});
  json path = json::array();
  for (NodeId n : plan.protected_path.nodes()) path.push_back(name(n));
  json j{{"method", plan.method_tag},
         {"removed_edges", edges},
         {"total_cost", plan.total_cost},
         {"protected_path", path},
         {"iterations", plan.iterations},
         {"constraints_generated", plan.constraints_generated},
         {"rounding_retries", plan.rounding_retries},
         {"lp_integral", plan.lp_integral},
         {"seed", plan.seed}};
  if (plan.within_budget) j["within_budget"] = *plan.within_budget;
  return j;
}

// ---------------------------------------------------------------------------
// Summary

struct MethodSummary {
  std::string method;
  int runs = 0;
  int failures = 0;
  int ratio_count = 0;
  double ratio_sum = 0.0;
  double wall_sum = 0.0;
  int lp_integral = 0;
  int parsimonious = 0;  // constraints_generated <= 0.05 * edges

  double mean_ratio() const { return ratio_count ? ratio_sum / ratio_count : 0.0; }
  double mean_wall() const { return runs ? wall_sum / runs : 0.0; }
  double integral_fraction() const { return runs ? static_cast<double>(lp_integral) / runs : 0.0; }
  double parsimony_fraction() const {
    return runs ? static_cast<double>(parsimonious) / runs : 0.0;
  }
};

/// Aggregates records; recomputable from the record file alone (plus the
/// timing file for wall times).
inline std::vector<MethodSummary> summarize(const std::vector<ExperimentRecord>& records) {
  std::vector<MethodSummary> out;
  auto slot = [&](const std::string& method) -> MethodSummary& {
    for (auto& s : out) {
      if (s.method == method) return s;
    }
    out.push_back({});
    out.back().method = method;
    return out.back();
  };
  for (const auto& r : records) {
    if (r.status == "skipped") continue;
    auto& s = slot(r.method);
    if (r.status != "ok") {
      ++s.failures;
      continue;
    }
    ++s.runs;
    s.wall_sum += r.wall_time_s;
    if (r.cost_reduction_ratio) {
      ++s.ratio_count;
      s.ratio_sum += *r.cost_reduction_ratio;
    }
    if (r.lp_integral) ++s.lp_integral;
    if (r.constraints_generated <= 0.05 * static_cast<double>(r.edges)) ++s.parsimonious;
  }
  return out;
}

inline void write_summary(std::ostream& out, const std::vector<ExperimentRecord>& records) {
  int skipped = 0;
  for (const auto& r : records) skipped += r.status == "skipped";
  out << std::left << std::setw(20) << "method" << std::right << std::setw(7) << "runs"
      << std::setw(7) << "fail" << std::setw(12) << "cost_ratio" << std::setw(12) << "wall_s"
      << std::setw(12) << "lp_integral" << std::setw(12) << "cons<=5%M" << "\n";
  for (const auto& s : summarize(records)) {
    out << std::left << std::setw(20) << s.method << std::right << std::setw(7) << s.runs
        << std::setw(7) << s.failures << std::fixed << std::setprecision(4) << std::setw(12)
        << s.mean_ratio() << std::setw(12) << s.mean_wall() << std::setw(12)
        << s.integral_fraction() << std::setw(12) << s.parsimony_fraction() << "\n"
        << std::defaultfloat;
  }
  out << "skipped instances: " << skipped << "\n";
}

// ---------------------------------------------------------------------------
// Runner

namespace detail {

inline std::string describe_instance(const ExperimentConfig& cfg, int rep, std::uint64_t graph_seed,
                                     std::uint64_t weight_seed, NodeId s, NodeId t, int k) {
  json j;
  if (cfg.generator) {
    auto spec = *cfg.generator;
    spec.seed = graph_seed;
    j["graph"] = to_json(spec);
  } else {
    j["graph"] = cfg.edge_list_path;
  }
  j["weights"] = cfg.weights ? std::string(weight_kind_name(*cfg.weights)) : "file";
  if (cfg.weights) j["weight_seed"] = weight_seed;
  j["rep"] = rep;
  j["s"] = s;
  j["t"] = t;
  j["k"] = k;
  return j.dump();
}

}  // namespace detail

/// Runs every (repetition, rank, method) combination. Per-run failures are
/// recorded, never thrown. When cfg.output is set, writes
/// <output>.records.jsonl, <output>.timing.jsonl and <output>.summary.txt.
inline std::vector<ExperimentRecord> run_experiments(const ExperimentConfig& cfg) {
  cfg.validate();
  std::optional<LabeledGraph> file_graph;
  if (!cfg.generator) file_graph = load_edge_list(cfg.edge_list_path);

  std::vector<ExperimentRecord> records;
  for (int rep = 0; rep < cfg.repetitions; ++rep) {
    const std::uint64_t graph_seed = derive_seed(cfg.master_seed, rep, 1);
    const std::uint64_t weight_seed = derive_seed(cfg.master_seed, rep, 2);
    const std::uint64_t terminal_seed = derive_seed(cfg.master_seed, rep, 3);

    Graph g;
    if (cfg.generator) {
      auto spec = *cfg.generator;
      spec.seed = graph_seed;
      g = generate(spec);
    } else {
      g = file_graph->graph;
    }
    if (cfg.weights) {
      auto scheme = cfg.weight_params;
      scheme.kind = *cfg.weights;
      scheme.seed = weight_seed;
      g = assign_weights(g, scheme);
    }

    ExperimentRecord base;
    base.repetition = rep;
    base.nodes = g.node_count();
    base.edges = g.edge_count();

    std::pair<NodeId, NodeId> st{-1, -1};
    try {
      st = select_terminals(g, cfg.terminals, terminal_seed);
    } catch (const InstanceSkip& skip) {
      auto r = base;
      r.run_id = "r" + std::to_string(rep);
      r.instance = detail::describe_instance(cfg, rep, graph_seed, weight_seed, -1, -1, 0);
      r.method = "-";
      r.status = "skipped";
      r.message = skip.what();
      records.push_back(std::move(r));
      continue;
    }
    const auto [s, t] = st;
    std::optional<std::vector<char>> mask;
    if (cfg.terminals.mode == TerminalMode::kHopDistance) {
      mask = hop_neighborhood(g, s, cfg.terminals.neighborhood);
    }

    // Ranks share one path iterator per instance.
    std::vector<int> ranks = cfg.ranks;
    std::sort(ranks.begin(), ranks.end());
    ranks.erase(std::unique(ranks.begin(), ranks.end()), ranks.end());
    PathIterator paths(g, s, t, mask);
    std::map<int, Path> targets;
    for (int k : ranks) {
      while (static_cast<int>(paths.yielded()) < k) {
        auto p = paths.next();
        if (!p) break;
        if (static_cast<int>(paths.yielded()) == k) targets.emplace(k, std::move(*p));
      }
    }

    for (int k : cfg.ranks) {
      auto proto = base;
      proto.rank = k;
      proto.source = s;
      proto.target = t;
      proto.instance = detail::describe_instance(cfg, rep, graph_seed, weight_seed, s, t, k);
      const std::string prefix = "r" + std::to_string(rep) + "-k" + std::to_string(k);
      const auto found = targets.find(k);
      if (found == targets.end()) {
        auto r = proto;
        r.run_id = prefix;
        r.method = "-";
        r.status = "skipped";
        r.message = "fewer than " + std::to_string(k) + " simple paths";
        records.push_back(std::move(r));
        continue;
      }
      const Path& p_star = found->second;
      std::optional<double> baseline_cost;
      const std::size_t first = records.size();
      for (Method m : cfg.methods) {
        auto r = proto;
        r.run_id = prefix + "-" + std::string(method_name(m));
        r.method = std::string(method_name(m));
        r.seed = derive_seed(cfg.master_seed, rep, 1000 + static_cast<std::uint64_t>(k));
        r.p_star_length = path_length(g, p_star);
        r.p_star_hops = static_cast<int>(p_star.hops());
        AttackConfig ac;
        ac.method = m;
        ac.rng_seed = r.seed;
        const auto start = std::chrono::steady_clock::now();
        try {
          const CutPlan plan = run_attack(g, p_star, ac);
          r.wall_time_s =
              std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
          r.status = "ok";
          r.total_cost = plan.total_cost;
          r.iterations = plan.iterations;
          r.constraints_generated = plan.constraints_generated;
          r.rounding_retries = plan.rounding_retries;
          r.lp_integral = plan.lp_integral;
          r.verified = is_exclusive_shortest(g, p_star, plan.removed_edges) &&
                       std::none_of(plan.removed_edges.begin(), plan.removed_edges.end(),
                                    [&](const EdgeKey& e) { return p_star.edge_set().contains(e); });
          if (m == Method::kGreedyCost) baseline_cost = plan.total_cost;
        } catch (const AttackFailure& failure) {
          r.wall_time_s =
              std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
          r.status = "failed";
          r.message = failure.what();
          r.total_cost = failure.partial().total_cost;
          r.iterations = failure.partial().iterations;
          r.constraints_generated = failure.partial().constraints_generated;
        } catch (const std::exception& error) {
          r.wall_time_s =
              std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
          r.status = "failed";
          r.message = error.what();
        }
        records.push_back(std::move(r));
      }
      if (baseline_cost) {
        for (std::size_t i = first; i < records.size(); ++i) {
          auto& r = records[i];
          if (r.status != "ok") continue;
          if (r.method == method_name(Method::kGreedyCost)) {
            r.cost_reduction_ratio = 1.0;
          } else if (*baseline_cost > 0.0) {
            r.cost_reduction_ratio = r.total_cost / *baseline_cost;
          } else {
            r.cost_reduction_ratio = r.total_cost > 0.0 ? std::optional<double>() : 1.0;
          }
        }
      }
    }
  }

  if (!cfg.output.empty()) {
    std::ofstream rec(cfg.output + ".records.jsonl");
    std::ofstream timing(cfg.output + ".timing.jsonl");
    std::ofstream summary(cfg.output + ".summary.txt");
    if (!rec || !timing || !summary) {
      throw InputError("cannot write results under '" + cfg.output + "'");
    }
    for (const auto& r : records) {
      rec << to_json(r).dump() << '\n';
      if (r.status != "skipped") {
        timing << json{{"run_id", r.run_id}, {"wall_time_s", r.wall_time_s}}.dump() << '\n';
      }
    }
    write_summary(summary, records);
  }
  return records;
}

}  // namespace pathattack
