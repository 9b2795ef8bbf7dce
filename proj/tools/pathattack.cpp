// pathattack command-line front end.
//
// Exit codes: 0 success, 1 internal error, 2 usage, 3 bad input,
// 4 instance skipped, 5 attack failed. Errors are reported on stderr as
// a single JSON object {"error": <category>, "message": <text>}.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "pathattack/pathattack.hpp"

namespace pa = pathattack;
using pa::json;

namespace {

enum Exit { kOk = 0, kInternal = 1, kUsage = 2, kInput = 3, kSkip = 4, kAttack = 5 };

int report(const char* category, const std::string& message, int code) {
  std::cerr << json{{"error", category}, {"message", message}}.dump() << '\n';
  return code;
}

struct GeneratorFlags {
  std::string family = "er";
  int n = 100;
  double p = 0.05;
  int m = 3;
  int iterations = 8;
  double density = 0.01;
  int rows = 10;
  int cols = 10;
  std::uint64_t seed = 1;

  void attach(CLI::App* app) {
    app->add_option("--family", family, "er | ba | kronecker | lattice | complete")
        ->capture_default_str();
    app->add_option("--n", n, "node count (er, ba, complete)")->capture_default_str();
    app->add_option("--p", p, "edge probability (er)")->capture_default_str();
    app->add_option("--m", m, "attachment degree (ba)")->capture_default_str();
    app->add_option("--iterations", iterations, "kronecker power; 2^k nodes")
        ->capture_default_str();
    app->add_option("--density", density, "kronecker edge density")->capture_default_str();
    app->add_option("--rows", rows, "lattice rows")->capture_default_str();
    app->add_option("--cols", cols, "lattice columns")->capture_default_str();
  }

  pa::GeneratorSpec spec() const {
    pa::GeneratorSpec s;
    s.family = pa::parse_family(family);
    s.n = n;
    s.p = p;
    s.m = m;
    s.iterations = iterations;
    s.density = density;
    s.rows = rows;
    s.cols = cols;
    s.seed = seed;
    s.validate();
    return s;
  }
};

struct WeightFlags {
  std::string kind;
  pa::WeightScheme scheme;

  void attach(CLI::App* app, const std::string& default_kind) {
    kind = default_kind;
    app->add_option("--weights", kind, "poisson | uniform | equal" +
                                           std::string(default_kind == "file" ? " | file" : ""))
        ->capture_default_str();
    app->add_option("--poisson-rate", scheme.poisson_rate, "weights are 1 + Poisson(rate)")
        ->capture_default_str();
    app->add_option("--uniform-upper", scheme.uniform_upper, "weights uniform on 1..upper")
        ->capture_default_str();
    app->add_option("--equal-value", scheme.equal_value, "weight of every edge")
        ->capture_default_str();
  }
};

// Target path: explicit node list, or the k-th shortest between terminals.
struct TargetFlags {
  std::string graph;
  std::string source;
  std::string target;
  std::vector<std::string> path;
  int rank = 0;

  void attach(CLI::App* app) {
    app->add_option("--graph", graph, "edge-list file")->required();
    app->add_option("--source", source, "source label");
    app->add_option("--target", target, "target label");
    app->add_option("--path", path, "protected path as labels, source first");
    app->add_option("--rank", rank, "protect the k-th shortest source-target path");
  }

  pa::Path resolve(const pa::LabeledGraph& lg) const {
    if (!path.empty()) {
      if (rank > 0) throw pa::InputError("use either --path or --rank");
      std::vector<pa::NodeId> nodes;
      for (const auto& label : path) nodes.push_back(lg.id_of(label));
      return pa::Path(std::move(nodes));
    }
    if (rank < 1 || source.empty() || target.empty()) {
      throw pa::InputError("need --path, or --source, --target and --rank");
    }
    return pa::select_p_star(lg.graph, lg.id_of(source), lg.id_of(target), rank);
  }
};

void print_warnings(const pa::LabeledGraph& lg) {
  for (const auto& w : lg.warnings) std::cerr << "warning: " << w << '\n';
}

std::string labels_of(const pa::LabeledGraph& lg, const pa::Path& p) {
  std::string out;
  for (pa::NodeId n : p.nodes()) {
    if (!out.empty()) out += ' ';
    out += lg.labels[n];
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Force a chosen path to be the exclusive shortest path by cutting edges"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "write a synthetic weighted graph as an edge list");
  GeneratorFlags gen_flags;
  WeightFlags gen_weights;
  std::string gen_out;
  gen_flags.attach(gen);
  gen_weights.attach(gen, "poisson");
  gen->add_option("--seed", gen_flags.seed, "random seed")->capture_default_str();
  gen->add_option("-o,--output", gen_out, "output file (default stdout)");

  // attack
  auto* attack = app.add_subcommand("attack", "compute a cut plan for one instance");
  TargetFlags attack_target;
  std::string method = "pathattack-lp";
  pa::AttackConfig attack_cfg;
  double budget = -1;
  std::string lp_out;
  attack_target.attach(attack);
  attack->add_option("--method", method,
                     "pathattack-lp | pathattack-greedy | greedy-cost | greedy-eigenscore")
      ->capture_default_str();
  attack->add_option("--seed", attack_cfg.rng_seed, "rounding seed")->capture_default_str();
  attack->add_option("--budget", budget, "report whether the plan fits this budget");
  attack->add_option("--iteration-cap", attack_cfg.iteration_cap, "0 means 10 * edges")
      ->capture_default_str();
  attack->add_flag("--recompute-eigenscores", attack_cfg.recompute_eigenscores,
                   "greedy-eigenscore: refresh scores after every cut");
  attack->add_option("--lp-out", lp_out,
                     "write the relaxed LP over every path no longer than p* (node ids)");

  // experiment
  auto* exp = app.add_subcommand("experiment", "run a batch and write records and a summary");
  std::string config_path;
  GeneratorFlags exp_gen;
  WeightFlags exp_weights;
  std::string edge_list;
  std::string terminal_mode = "uniform";
  pa::ExperimentConfig exp_cfg;
  std::vector<std::string> methods;
  exp->add_option("--config", config_path, "JSON configuration; flags given override it");
  exp_gen.attach(exp);
  exp_weights.attach(exp, "poisson");
  exp->add_option("--edge-list", edge_list, "use this graph instead of a generator");
  exp->add_option("--terminals", terminal_mode, "uniform | hops")->capture_default_str();
  exp->add_option("--hops", exp_cfg.terminals.hops, "hop mode: s-t BFS distance")
      ->capture_default_str();
  exp->add_option("--neighborhood", exp_cfg.terminals.neighborhood,
                  "hop mode: p* search radius around s")
      ->capture_default_str();
  exp->add_option("--ranks", exp_cfg.ranks, "p* ranks")->capture_default_str();
  exp->add_option("--methods", methods, "methods to run (default all)");
  exp->add_option("--repetitions", exp_cfg.repetitions, "instances per rank")
      ->capture_default_str();
  exp->add_option("--seed", exp_cfg.master_seed, "master seed")->capture_default_str();
  exp->add_option("-o,--output", exp_cfg.output, "output prefix");

  // reduce-check
  auto* reduce = app.add_subcommand(
      "reduce-check", "decide 3-terminal cut directly and through the path-cut transformation");
  std::string reduce_graph;
  std::vector<std::string> reduce_terminals;
  double reduce_budget = 0;
  double eps = 1.0;
  std::string transformed_out;
  reduce->add_option("--graph", reduce_graph, "edge-list file")->required();
  reduce->add_option("--terminals", reduce_terminals, "three terminal labels")
      ->required()
      ->expected(3);
  reduce->add_option("--budget", reduce_budget, "cut budget")->required();
  reduce->add_option("--eps", eps, "weight margin of the heavy terminal edges")
      ->capture_default_str();
  reduce->add_option("--emit", transformed_out, "write the transformed instance here");

  // brute-force
  auto* brute = app.add_subcommand("brute-force", "exact minimum-cost cut for a small instance");
  TargetFlags brute_target;
  brute_target.attach(brute);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report("usage", e.what(), kUsage);
  }

  try {
    if (*gen) {
      auto g = pa::generate(gen_flags.spec());
      auto scheme = gen_weights.scheme;
      scheme.kind = pa::parse_weight_kind(gen_weights.kind);
      scheme.seed = pa::derive_seed(gen_flags.seed, 0, 2);
      g = pa::assign_weights(g, scheme);
      if (gen_out.empty()) {
        pa::save_edge_list(std::cout, g);
      } else {
        pa::save_edge_list(gen_out, g);
      }
      return kOk;
    }

    if (*attack || *brute) {
      auto& flags = *attack ? attack_target : brute_target;
      const auto lg = pa::load_edge_list(flags.graph);
      print_warnings(lg);
      const auto p_star = flags.resolve(lg);
      pa::CutPlan plan;
      if (*brute) {
        plan = pa::brute_force_force_path_cut(lg.graph, p_star);
      } else {
        attack_cfg.method = pa::parse_method(method);
        if (budget >= 0) attack_cfg.budget = budget;
        try {
          plan = pa::run_attack(lg.graph, p_star, attack_cfg);
        } catch (const pa::AttackFailure& e) {
          auto j = pa::to_json(e.partial(), lg.labels);
          j["status"] = "failed";
          std::cout << j.dump() << '\n';
          return report("attack", e.what(), kAttack);
        }
        if (!lp_out.empty()) {
          pa::PathSet rivals;
          pa::PathIterator it(lg.graph, p_star.source(), p_star.target());
          const double limit = pa::path_length(lg.graph, p_star);
          while (auto p = it.next()) {
            if (pa::length_less(limit, pa::path_length(lg.graph, *p))) break;
            if (*p != p_star) rivals.push_back(*p);
          }
          std::ofstream out(lp_out);
          if (!out) throw pa::InputError("cannot write " + lp_out);
          pa::write_lp_text(out, pa::build_relaxed_lp(lg.graph, p_star, rivals));
        }
      }
      auto j = pa::to_json(plan, lg.labels);
      j["status"] = "ok";
      j["p_star"] = labels_of(lg, p_star);
      j["p_star_length"] = pa::path_length(lg.graph, p_star);
      std::cout << j.dump() << '\n';
      return kOk;
    }

    if (*exp) {
      pa::ExperimentConfig cfg;
      if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) throw pa::InputError("cannot open " + config_path);
        json j;
        try {
          j = json::parse(in);
        } catch (const json::exception& e) {
          throw pa::InputError(config_path + ": " + e.what());
        }
        cfg = pa::config_from_json(j);
      }
      auto given = [&](const char* flag) { return exp->count(flag) > 0; };
      const bool generator_flag = given("--family") || given("--n") || given("--p") ||
                                  given("--m") || given("--iterations") ||
                                  given("--density") || given("--rows") || given("--cols");
      if (given("--edge-list")) {
        cfg.generator.reset();
        cfg.edge_list_path = edge_list;
        if (!given("--weights")) cfg.weights.reset();
      } else if (generator_flag || config_path.empty()) {
        cfg.generator = exp_gen.spec();
        cfg.edge_list_path.clear();
      }
      if (given("--weights") || config_path.empty()) {
        if (exp_weights.kind == "file") {
          cfg.weights.reset();
        } else if (given("--weights") || cfg.generator) {
          cfg.weights = pa::parse_weight_kind(exp_weights.kind);
        }
      }
      if (given("--poisson-rate")) cfg.weight_params.poisson_rate = exp_weights.scheme.poisson_rate;
      if (given("--uniform-upper")) cfg.weight_params.uniform_upper = exp_weights.scheme.uniform_upper;
      if (given("--equal-value")) cfg.weight_params.equal_value = exp_weights.scheme.equal_value;
      if (given("--terminals") || config_path.empty()) {
        if (terminal_mode == "uniform") {
          cfg.terminals.mode = pa::TerminalMode::kUniform;
        } else if (terminal_mode == "hops") {
          cfg.terminals.mode = pa::TerminalMode::kHopDistance;
        } else {
          throw pa::InputError("unknown terminal mode '" + terminal_mode + "'");
        }
      }
      if (given("--hops") || config_path.empty()) cfg.terminals.hops = exp_cfg.terminals.hops;
      if (given("--neighborhood") || config_path.empty()) {
        cfg.terminals.neighborhood = exp_cfg.terminals.neighborhood;
      }
      if (given("--ranks") || config_path.empty()) cfg.ranks = exp_cfg.ranks;
      if (given("--methods")) {
        cfg.methods.clear();
        for (const auto& m : methods) cfg.methods.push_back(pa::parse_method(m));
      }
      if (given("--repetitions") || config_path.empty()) cfg.repetitions = exp_cfg.repetitions;
      if (given("--seed") || config_path.empty()) cfg.master_seed = exp_cfg.master_seed;
      if (given("--output")) cfg.output = exp_cfg.output;
      const auto records = pa::run_experiments(cfg);
      pa::write_summary(std::cout, records);
      return kOk;
    }

    if (*reduce) {
      const auto lg = pa::load_edge_list(reduce_graph);
      print_warnings(lg);
      pa::TerminalCutInstance inst;
      inst.graph = lg.graph;
      inst.budget = reduce_budget;
      for (int i = 0; i < 3; ++i) inst.terminals[i] = lg.id_of(reduce_terminals[i]);
      inst.validate();
      const auto fpc = pa::create_force_path_input(inst, eps);
      if (!transformed_out.empty()) {
        std::ofstream out(transformed_out);
        if (!out) throw pa::InputError("cannot write " + transformed_out);
        out << "# protected path " << lg.labels[fpc.p_star.source()] << ' '
            << lg.labels[fpc.p_star.target()] << ", budget "
            << pa::detail::format_number(fpc.budget) << '\n';
        pa::save_edge_list(out, fpc.graph, lg.labels);
      }
      const bool direct = pa::brute_force_3tc(inst);
      const bool via = pa::solve_3tc_via_fpc(inst, eps);
      std::cout << json{{"three_terminal_cut", direct},
                        {"via_force_path_cut", via},
                        {"agree", direct == via},
                        {"transformed_budget", fpc.budget},
                        {"eps", eps}}
                       .dump()
                << '\n';
      return direct == via ? kOk : kInternal;
    }
  } catch (const pa::InstanceSkip& e) {
    return report("skip", e.what(), kSkip);
  } catch (const pa::AttackFailure& e) {
    return report("attack", e.what(), kAttack);
  } catch (const pa::ConvergenceError& e) {
    return report("attack", e.what(), kAttack);
  } catch (const pa::InputError& e) {
    return report("input", e.what(), kInput);
  } catch (const std::exception& e) {
    return report("internal", e.what(), kInternal);
  }
  return kOk;
}
