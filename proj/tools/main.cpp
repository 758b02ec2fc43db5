// Command-line front end: graph/objective generation, weight construction,
// single runs, parameter sweeps, algorithm comparisons, rate-certificate
// checks, and convergence diagnostics. Prints a JSON summary on stdout and a
// machine-readable error JSON on stderr with a nonzero exit code on failure.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "dadmm/admm.hpp"
#include "dadmm/baselines.hpp"
#include "dadmm/digraph.hpp"
#include "dadmm/errors.hpp"
#include "dadmm/fsio.hpp"
#include "dadmm/harness.hpp"
#include "dadmm/objective.hpp"
#include "dadmm/rng.hpp"
#include "dadmm/theory.hpp"
#include "dadmm/trace.hpp"
#include "dadmm/version.hpp"
#include "dadmm/weights.hpp"

namespace {

using nlohmann::json;

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

void write_meta(const std::string& path, const std::string& operation,
                std::map<std::string, std::string> fields) {
  dadmm::write_text_file(path, dadmm::meta_json(operation, fields));
}

struct GenGraphOpts {
  int n = 10;
  double p = 0.4;
  std::uint64_t seed = 0;
  std::string out;
};

int cmd_gen_graph(const GenGraphOpts& o) {
  auto [g, used] = dadmm::generate_strongly_connected_digraph(o.n, o.p, o.seed);
  dadmm::save_digraph(g, o.out);
  write_meta(o.out + ".meta.json", "gen-graph",
             {{"n", std::to_string(o.n)},
              {"p", dadmm::format_double(o.p)},
              {"seed_requested", std::to_string(o.seed)},
              {"seed_used", std::to_string(used)},
              {"edges", std::to_string(g.edge_count())},
              {"out", o.out}});
  emit({{"out", o.out},
        {"n", o.n},
        {"edges", g.edge_count()},
        {"seed_requested", o.seed},
        {"seed_used", used}});
  return 0;
}

struct GenObjectiveOpts {
  int n = 10, m = 3, p = 3;
  std::uint64_t seed = 0;
  std::string out;
};

int cmd_gen_objective(const GenObjectiveOpts& o) {
  auto obj = dadmm::generate_random_objective(o.n, o.m, o.p, o.seed);
  dadmm::save_objective(obj, o.out);
  write_meta(o.out + ".meta.json", "gen-objective",
             {{"n", std::to_string(o.n)},
              {"m", std::to_string(o.m)},
              {"p", std::to_string(o.p)},
              {"seed", std::to_string(o.seed)},
              {"mu", dadmm::format_double(obj.mu())},
              {"L", dadmm::format_double(obj.L())},
              {"out", o.out}});
  json j{{"out", o.out}, {"n", o.n}, {"m", o.m}, {"p", o.p},
         {"mu", obj.mu()}, {"L", obj.L()}};
  if (obj.mu() > 0.0) j["condition_number"] = obj.L() / obj.mu();
  emit(j);
  return 0;
}

struct BuildWeightsOpts {
  std::string graph, out;
  double tol = 1e-13;
};

int cmd_build_weights(const BuildWeightsOpts& o) {
  auto g = dadmm::load_digraph(o.graph);
  auto W = dadmm::build_weight_matrix(g, o.tol);
  dadmm::save_weight_matrix(W, o.out);
  const std::string w_hash = dadmm::fnv1a_hex(dadmm::to_matrix_text(W));
  write_meta(o.out + ".meta.json", "build-weights",
             {{"graph", o.graph},
              {"tol", dadmm::format_double(o.tol)},
              {"delta", dadmm::format_double(W.delta)},
              {"w_hash", w_hash},
              {"out", o.out}});
  emit({{"out", o.out}, {"n", W.n}, {"delta", W.delta}, {"w_hash", w_hash}});
  return 0;
}

struct RunOpts {
  std::string alg = "admm";
  std::string graph, objective, out;
  double rho = 1.0;
  int B = 1;
  double step = 0.1;
  double block_regularization = 0.0;
  int max_iters = 10000;
  double tol = 1e-8;
};

int cmd_run(const RunOpts& o) {
  auto g = dadmm::load_digraph(o.graph);
  auto obj = dadmm::load_objective(o.objective);
  const auto sol = obj.centralized_solve();
  const dadmm::ReferenceSolution ref{sol.x_star, sol.a_star};

  dadmm::ConvergenceTrace tr;
  std::string w_hash;
  if (o.alg == "admm") {
    auto W = dadmm::build_weight_matrix(g);
    w_hash = dadmm::fnv1a_hex(dadmm::to_matrix_text(W));
    tr = dadmm::run_admm(obj, W, {o.rho, o.B, o.max_iters, o.tol}, ref);
  } else if (o.alg == "panda") {
    auto W = dadmm::build_weight_matrix(g);
    w_hash = dadmm::fnv1a_hex(dadmm::to_matrix_text(W));
    dadmm::PandaParams p;
    p.step = o.step;
    p.max_iters = o.max_iters;
    p.stop_tol = o.tol;
    p.block_regularization = o.block_regularization;
    tr = dadmm::run_panda(obj, W, p, ref);
  } else if (o.alg == "push-diging") {
    const Eigen::MatrixXd C = dadmm::out_degree_mixing_matrix(g);
    w_hash = dadmm::fnv1a_hex(std::to_string(g.n));  // mixing built from out-degrees
    dadmm::PushDigingParams p;
    p.step = o.step;
    p.max_iters = o.max_iters;
    p.stop_tol = o.tol;
    tr = dadmm::run_pushdiging(obj, C, p, ref);
  } else {
    throw dadmm::ConfigError("run: unknown algorithm '" + o.alg + "'");
  }

  dadmm::write_trace_csv(tr, o.out);
  const std::string instance_hash =
      dadmm::fnv1a_hex(dadmm::to_edge_list(g) + "\n" + dadmm::to_json_string(obj));
  json params(tr.params);
  write_meta(o.out + ".meta.json", "run",
             {{"alg", o.alg},
              {"graph", o.graph},
              {"objective", o.objective},
              {"params", params.dump()},
              {"instance_hash", instance_hash},
              {"w_hash", w_hash},
              {"reason", dadmm::to_string(tr.reason)},
              {"out", o.out}});
  emit({{"out", o.out},
        {"alg", o.alg},
        {"params", params},
        {"reason", dadmm::to_string(tr.reason)},
        {"iters", tr.rows.empty() ? 0 : tr.rows.back().iter},
        {"comm_rounds", tr.final_comm_rounds()},
        {"final_primal_res", tr.final_primal_res()}});
  return 0;
}

struct ConfigOpts {
  std::string config;
};

int cmd_sweep(const ConfigOpts& o) {
  const auto config = dadmm::load_config(o.config);
  const auto inst = dadmm::materialize(config);
  std::filesystem::create_directories(config.out_dir);

  json best_by_alg = json::array();
  for (std::size_t idx = 0; idx < config.algorithms.size(); ++idx) {
    const auto& alg = config.algorithms[idx];
    auto result = dadmm::sweep_algorithm(inst, alg, config.stop_tol, config.max_iters,
                                         config.round_budget);
    const auto csv_path = std::filesystem::path(config.out_dir) /
                          ("sweep_" + std::to_string(idx) + "_" + alg.alg + ".csv");
    dadmm::write_sweep_csv(result, csv_path.string());
    best_by_alg.push_back({{"alg", alg.alg},
                           {"params", json(result.best.params)},
                           {"rounds_to_tol", result.best.rounds_to_tol},
                           {"csv", csv_path.string()}});
  }
  write_meta((std::filesystem::path(config.out_dir) / "meta.json").string(), "sweep",
             {{"config", o.config},
              {"instance_hash", inst.instance_hash},
              {"w_hash", inst.w_hash},
              {"graph_seed_used", std::to_string(inst.graph_seed_used)},
              {"best", best_by_alg.dump()}});
  emit({{"out_dir", config.out_dir},
        {"instance_hash", inst.instance_hash},
        {"best", best_by_alg}});
  return 0;
}

int cmd_compare(const ConfigOpts& o) {
  const auto config = dadmm::load_config(o.config);
  const auto inst = dadmm::materialize(config);
  const auto bundle = dadmm::compare(inst, config);

  json arms = json::array();
  for (const auto& arm : bundle.arms) {
    json a{{"alg", arm.alg}, {"converged", arm.converged}};
    a["params"] = json(arm.params);
    if (arm.converged) a["rounds_to_tol"] = arm.rounds_to_tol;
    if (!arm.error.empty()) a["error"] = arm.error;
    arms.push_back(a);
  }
  emit({{"out_dir", config.out_dir},
        {"instance_hash", bundle.instance_hash},
        {"w_hash", bundle.w_hash},
        {"arms", arms}});
  return 0;
}

struct CheckTheoryOpts {
  double mu = 0, L = 0, beta = 0, lambda = 0, delta = 0;
};

int cmd_check_theory(const CheckTheoryOpts& o) {
  json j;
  j["mu"] = o.mu;
  j["L"] = o.L;
  j["beta"] = o.beta;
  j["lambda"] = o.lambda;
  j["delta"] = o.delta;
  const bool feasible = dadmm::lambda_feasible(o.mu, o.L, o.beta, o.lambda);
  j["lambda_feasible"] = feasible;
  if (feasible) {
    const auto interval = dadmm::rho_interval(o.mu, o.L, o.beta, o.lambda);
    j["rho_interval"] = {interval->first, interval->second};
    const double rho = 0.5 * (interval->first + interval->second);
    const auto tc = dadmm::compute_constants(o.mu, o.L, o.beta, o.lambda, rho, o.delta);
    j["rho_midpoint"] = rho;
    j["c1"] = tc.c1;
    j["c2"] = tc.c2;
    j["c3"] = tc.c3;
    j["gamma1"] = tc.gamma1;
    j["gamma3"] = tc.gamma3;
    j["B_min"] = tc.B_min;
    j["gamma2_at_B_min"] = tc.gamma2(tc.B_min);
    j["gain_product_at_B_min"] = tc.gain_product(tc.B_min);
  } else {
    j["rho_interval"] = nullptr;
  }
  emit(j);
  return 0;
}

struct DiagnoseOpts {
  std::string graph, objective, out_csv, report;
  double beta = -1.0;
  double lambda_fraction = 0.5;
  int max_iters = 20000;
  double tol = 1e-8;
};

int cmd_diagnose(const DiagnoseOpts& o) {
  auto g = dadmm::load_digraph(o.graph);
  auto obj = dadmm::load_objective(o.objective);
  auto W = dadmm::build_weight_matrix(g);
  const auto sol = obj.centralized_solve();
  const dadmm::ReferenceSolution ref{sol.x_star, sol.a_star};

  const auto tc =
      dadmm::certified_constants(obj.mu(), obj.L(), W.delta, o.beta, o.lambda_fraction);
  dadmm::AdmmParams params{tc.rho, tc.B_min, o.max_iters, o.tol};
  dadmm::RunOptions opts;
  opts.store_iterates = true;
  const auto trace = dadmm::run_admm(obj, W, params, ref, opts);
  const auto report = dadmm::lambda_norm_diagnostics(trace, ref, tc, params.B,
                                                     obj.num_agents(), obj.block_dim());
  dadmm::write_diagnostics_csv(report, o.out_csv);

  auto arrow_json = [](const dadmm::ArrowCheck& a) {
    return json{{"name", a.name},
                {"gamma", a.gamma},
                {"empirical_gain", a.empirical_gain},
                {"gain_ok", a.gain_ok},
                {"bounded", a.bounded}};
  };
  json rj;
  rj["lambda"] = tc.lambda;
  rj["rho"] = tc.rho;
  rj["B"] = tc.B_min;
  rj["beta"] = tc.beta;
  rj["delta"] = tc.delta;
  rj["gain_product"] = tc.gain_product(tc.B_min);
  rj["arrows"] = {arrow_json(report.arrow1), arrow_json(report.arrow2),
                  arrow_json(report.arrow3)};
  rj["x_perp_bound_ok"] = report.x_perp_bound_ok;
  rj["x_perp_bound_violation"] = report.x_perp_bound_violation;
  rj["all_bounded"] = report.all_bounded();
  rj["run_reason"] = dadmm::to_string(trace.reason);
  try {
    const auto fit = dadmm::fit_rate(trace);
    rj["lambda_hat"] = fit.lambda_hat;
    rj["fit_residual"] = fit.fit_residual;
    rj["nongeometric"] = fit.nongeometric;
  } catch (const dadmm::InsufficientData&) {
    rj["lambda_hat"] = nullptr;
  }
  if (!o.report.empty()) dadmm::write_text_file(o.report, rj.dump(2) + "\n");
  emit(rj);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distributed consensus optimization simulator over directed graphs"};
  app.require_subcommand(1);
  app.set_version_flag("--version", dadmm::kVersion);

  auto gg = std::make_shared<GenGraphOpts>();
  auto* gen_graph = app.add_subcommand("gen-graph", "Generate a strongly connected digraph");
  gen_graph->add_option("--n", gg->n, "Number of agents")->required();
  gen_graph->add_option("--p", gg->p, "Edge probability")->required();
  gen_graph->add_option("--seed", gg->seed, "Starting seed")->required();
  gen_graph->add_option("--out", gg->out, "Output edge-list file")->required();

  auto go = std::make_shared<GenObjectiveOpts>();
  auto* gen_obj = app.add_subcommand("gen-objective", "Generate a random least-squares objective");
  gen_obj->add_option("--n", go->n, "Number of agents")->required();
  gen_obj->add_option("--m", go->m, "Decision dimension per agent")->required();
  gen_obj->add_option("--p", go->p, "Rows per agent matrix")->required();
  gen_obj->add_option("--seed", go->seed, "Seed")->required();
  gen_obj->add_option("--out", go->out, "Output JSON file")->required();

  auto bw = std::make_shared<BuildWeightsOpts>();
  auto* build_w = app.add_subcommand("build-weights", "Build a doubly stochastic weight matrix");
  build_w->add_option("--graph", bw->graph, "Edge-list file")->required();
  build_w->add_option("--tol", bw->tol, "Row/column sum tolerance");
  build_w->add_option("--out", bw->out, "Output matrix file")->required();

  auto ro = std::make_shared<RunOpts>();
  auto* run = app.add_subcommand("run", "Run one algorithm and record its trace");
  run->add_option("--alg", ro->alg, "admm | panda | push-diging")->required();
  run->add_option("--graph", ro->graph, "Edge-list file")->required();
  run->add_option("--objective", ro->objective, "Objective JSON file")->required();
  run->add_option("--rho", ro->rho, "Penalty parameter (admm)");
  run->add_option("--B", ro->B, "Communication rounds per iteration (admm)");
  run->add_option("--step", ro->step, "Step size (panda: c, push-diging: alpha)");
  run->add_option("--block-regularization", ro->block_regularization,
                  "Ridge for singular blocks (panda)");
  run->add_option("--max-iters", ro->max_iters, "Iteration budget");
  run->add_option("--tol", ro->tol, "Relative primal residual target");
  run->add_option("--out", ro->out, "Output trace CSV")->required();

  auto sw = std::make_shared<ConfigOpts>();
  auto* sweep = app.add_subcommand("sweep", "Grid-search parameters per algorithm");
  sweep->add_option("--config", sw->config, "Experiment config JSON")->required();

  auto cp = std::make_shared<ConfigOpts>();
  auto* compare = app.add_subcommand("compare", "Run tuned algorithms on one instance");
  compare->add_option("--config", cp->config, "Experiment config JSON")->required();

  auto ct = std::make_shared<CheckTheoryOpts>();
  auto* check = app.add_subcommand("check-theory", "Evaluate the rate-certificate bounds");
  check->add_option("--mu", ct->mu, "Strong convexity modulus")->required();
  check->add_option("--L", ct->L, "Gradient Lipschitz constant")->required();
  check->add_option("--beta", ct->beta, "Free positive parameter")->required();
  check->add_option("--lambda", ct->lambda, "Target rate in (0,1)")->required();
  check->add_option("--delta", ct->delta, "Consensus contraction factor")->required();

  auto dg = std::make_shared<DiagnoseOpts>();
  auto* diagnose = app.add_subcommand("diagnose", "Certified run with gain-cycle diagnostics");
  diagnose->add_option("--graph", dg->graph, "Edge-list file")->required();
  diagnose->add_option("--objective", dg->objective, "Objective JSON file")->required();
  diagnose->add_option("--beta", dg->beta, "Free parameter (default: L)");
  diagnose->add_option("--lambda-fraction", dg->lambda_fraction,
                       "Position of lambda inside its feasible interval");
  diagnose->add_option("--max-iters", dg->max_iters, "Iteration budget");
  diagnose->add_option("--tol", dg->tol, "Relative primal residual target");
  diagnose->add_option("--out-csv", dg->out_csv, "Diagnostics CSV output")->required();
  diagnose->add_option("--report", dg->report, "Optional JSON report output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << json{{"error", {{"type", "cli_parse"}, {"message", e.what()}}}}.dump()
              << "\n";
    return e.get_exit_code() == 0 ? 1 : e.get_exit_code();
  }

  try {
    if (gen_graph->parsed()) return cmd_gen_graph(*gg);
    if (gen_obj->parsed()) return cmd_gen_objective(*go);
    if (build_w->parsed()) return cmd_build_weights(*bw);
    if (run->parsed()) return cmd_run(*ro);
    if (sweep->parsed()) return cmd_sweep(*sw);
    if (compare->parsed()) return cmd_compare(*cp);
    if (check->parsed()) return cmd_check_theory(*ct);
    if (diagnose->parsed()) return cmd_diagnose(*dg);
  } catch (const dadmm::Error& e) {
    std::cerr << json{{"error", {{"type", e.code()}, {"message", e.what()}}}}.dump()
              << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << json{{"error", {{"type", "internal"}, {"message", e.what()}}}}.dump()
              << "\n";
    return 2;
  }
  return 0;
}
