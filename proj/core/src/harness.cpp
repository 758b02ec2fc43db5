#include "dadmm/harness.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <sstream>
#include <tuple>

#include <json.hpp>

#include "dadmm/errors.hpp"
#include "dadmm/fsio.hpp"
#include "dadmm/rng.hpp"
#include "dadmm/svg.hpp"
#include "dadmm/version.hpp"

namespace dadmm {

namespace {

using nlohmann::json;

constexpr long kNeverReached = std::numeric_limits<long>::max();

GraphSpec parse_graph_spec(const json& j) {
  GraphSpec s;
  if (j.contains("file")) {
    s.file = j.at("file").get<std::string>();
    return s;
  }
  s.n = j.at("n").get<int>();
  s.p = j.at("p").get<double>();
  if (j.contains("seed")) s.seed = j.at("seed").get<std::uint64_t>();
  return s;
}

ObjectiveSpec parse_objective_spec(const json& j) {
  ObjectiveSpec s;
  if (j.contains("file")) {
    s.file = j.at("file").get<std::string>();
    return s;
  }
  s.n = j.at("n").get<int>();
  s.m = j.at("m").get<int>();
  s.p_rows = j.at("p_rows").get<int>();
  if (j.contains("seed")) s.seed = j.at("seed").get<std::uint64_t>();
  return s;
}

AlgorithmConfig parse_algorithm(const json& j) {
  AlgorithmConfig a;
  a.alg = j.at("alg").get<std::string>();
  if (a.alg != "admm" && a.alg != "panda" && a.alg != "push-diging")
    throw ConfigError("unknown algorithm '" + a.alg + "'");
  a.rho = j.value("rho", a.rho);
  a.B = j.value("B", a.B);
  a.step = j.value("step", a.step);
  a.block_regularization = j.value("block_regularization", a.block_regularization);
  if (j.contains("rho_grid")) a.rho_grid = j.at("rho_grid").get<std::vector<double>>();
  if (j.contains("B_grid")) a.B_grid = j.at("B_grid").get<std::vector<int>>();
  if (j.contains("step_grid")) a.step_grid = j.at("step_grid").get<std::vector<double>>();
  return a;
}

json algorithm_to_json(const AlgorithmConfig& a) {
  json j;
  j["alg"] = a.alg;
  if (a.alg == "admm") {
    j["rho"] = a.rho;
    j["B"] = a.B;
    if (!a.rho_grid.empty()) j["rho_grid"] = a.rho_grid;
    if (!a.B_grid.empty()) j["B_grid"] = a.B_grid;
  } else {
    j["step"] = a.step;
    if (!a.step_grid.empty()) j["step_grid"] = a.step_grid;
    if (a.alg == "panda" && a.block_regularization > 0.0)
      j["block_regularization"] = a.block_regularization;
  }
  return j;
}

json config_to_json(const ExperimentConfig& c) {
  json j;
  json g;
  if (!c.graph.file.empty()) {
    g["file"] = c.graph.file;
  } else {
    g["n"] = c.graph.n;
    g["p"] = c.graph.p;
    if (c.graph.seed) g["seed"] = *c.graph.seed;
  }
  j["graph"] = g;
  json o;
  if (!c.objective.file.empty()) {
    o["file"] = c.objective.file;
  } else {
    o["n"] = c.objective.n;
    o["m"] = c.objective.m;
    o["p_rows"] = c.objective.p_rows;
    if (c.objective.seed) o["seed"] = *c.objective.seed;
  }
  j["objective"] = o;
  j["stop_tol"] = c.stop_tol;
  j["max_iters"] = c.max_iters;
  if (c.round_budget > 0) j["round_budget"] = c.round_budget;
  j["seed"] = c.seed;
  j["out_dir"] = c.out_dir;
  auto& algs = j["algorithms"] = json::array();
  for (const auto& a : c.algorithms) algs.push_back(algorithm_to_json(a));
  return j;
}

// Caps max_iters so a single run cannot exceed the round budget.
int capped_iters(int max_iters, long round_budget, long rounds_per_iter) {
  if (round_budget <= 0) return max_iters;
  const long cap = std::max<long>(1, round_budget / std::max<long>(1, rounds_per_iter));
  return static_cast<int>(std::min<long>(max_iters, cap));
}

ConvergenceTrace run_arm(const Instance& inst, const AlgorithmConfig& alg,
                         const std::map<std::string, double>& params, double stop_tol,
                         int max_iters, long round_budget, const RunOptions& opts) {
  if (alg.alg == "admm") {
    AdmmParams p;
    p.rho = params.at("rho");
    p.B = static_cast<int>(params.at("B"));
    p.stop_tol = stop_tol;
    p.max_iters = capped_iters(max_iters, round_budget, p.B);
    return run_admm(inst.objective, inst.W, p, inst.ref, opts);
  }
  if (alg.alg == "panda") {
    PandaParams p;
    p.step = params.at("c");
    p.stop_tol = stop_tol;
    p.max_iters = capped_iters(max_iters, round_budget, 1);
    p.block_regularization = alg.block_regularization;
    return run_panda(inst.objective, inst.W, p, inst.ref, opts);
  }
  PushDigingParams p;
  p.step = params.at("alpha");
  p.stop_tol = stop_tol;
  p.max_iters = capped_iters(max_iters, round_budget, 2);
  const Eigen::MatrixXd C = out_degree_mixing_matrix(inst.graph);
  return run_pushdiging(inst.objective, C, p, inst.ref, opts);
}

std::vector<std::map<std::string, double>> grid_points(const AlgorithmConfig& alg) {
  std::vector<std::map<std::string, double>> points;
  if (alg.alg == "admm") {
    auto rhos = alg.rho_grid.empty() ? default_rho_grid() : alg.rho_grid;
    auto Bs = alg.B_grid.empty() ? default_B_grid() : alg.B_grid;
    std::sort(rhos.begin(), rhos.end());
    std::sort(Bs.begin(), Bs.end());
    for (double rho : rhos)
      for (int B : Bs) points.push_back({{"rho", rho}, {"B", static_cast<double>(B)}});
  } else {
    auto steps = alg.step_grid.empty() ? default_step_grid() : alg.step_grid;
    std::sort(steps.begin(), steps.end());
    const char* key = alg.alg == "panda" ? "c" : "alpha";
    for (double s : steps) points.push_back({{key, s}});
  }
  if (points.empty()) throw ConfigError("sweep: empty parameter grid for " + alg.alg);
  return points;
}

std::map<std::string, double> fixed_params(const AlgorithmConfig& alg) {
  if (alg.alg == "admm") return {{"rho", alg.rho}, {"B", static_cast<double>(alg.B)}};
  if (alg.alg == "panda") return {{"c", alg.step}};
  return {{"alpha", alg.step}};
}

bool has_grids(const AlgorithmConfig& alg) {
  return alg.alg == "admm" ? (!alg.rho_grid.empty() || !alg.B_grid.empty())
                           : !alg.step_grid.empty();
}

std::string params_label(const std::map<std::string, double>& params) {
  std::ostringstream out;
  bool first = true;
  for (const auto& [k, v] : params) {
    if (!first) out << ", ";
    first = false;
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    out << k << "=" << buf;
  }
  return out.str();
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  try {
    ExperimentConfig c;
    c.graph = parse_graph_spec(j.at("graph"));
    c.objective = parse_objective_spec(j.at("objective"));
    if (!j.contains("algorithms") || !j.at("algorithms").is_array() ||
        j.at("algorithms").empty())
      throw ConfigError("config: 'algorithms' must be a non-empty array");
    for (const auto& a : j.at("algorithms")) c.algorithms.push_back(parse_algorithm(a));
    c.stop_tol = j.value("stop_tol", c.stop_tol);
    c.max_iters = j.value("max_iters", c.max_iters);
    c.round_budget = j.value("round_budget", c.round_budget);
    c.seed = j.value("seed", c.seed);
    c.out_dir = j.value("out_dir", c.out_dir);
    return c;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

ExperimentConfig load_config(const std::string& path) {
  return parse_config(read_text_file(path));
}

Instance materialize(const ExperimentConfig& config) {
  DiGraph graph;
  std::uint64_t requested = 0, used = 0;
  if (!config.graph.file.empty()) {
    graph = load_digraph(config.graph.file);
  } else {
    requested = config.graph.seed.value_or(config.seed);
    std::tie(graph, used) =
        generate_strongly_connected_digraph(config.graph.n, config.graph.p, requested);
  }
  WeightMatrix W = build_weight_matrix(graph);

  QuadraticObjective objective =
      !config.objective.file.empty()
          ? load_objective(config.objective.file)
          : generate_random_objective(config.objective.n, config.objective.m,
                                      config.objective.p_rows,
                                      config.objective.seed.value_or(config.seed + 1));
  if (objective.num_agents() != graph.n)
    throw ConfigError("config: objective has " + std::to_string(objective.num_agents()) +
                      " agents but the graph has " + std::to_string(graph.n));

  const auto sol = objective.centralized_solve();
  std::string instance_hash =
      fnv1a_hex(to_edge_list(graph) + "\n" + to_json_string(objective));
  std::string w_hash = fnv1a_hex(to_matrix_text(W));
  return Instance{std::move(graph),     requested,
                  used,                 std::move(W),
                  std::move(objective), ReferenceSolution{sol.x_star, sol.a_star},
                  std::move(instance_hash), std::move(w_hash)};
}

std::vector<double> default_rho_grid() {
  std::vector<double> g;
  for (int i = 0; i <= 12; ++i) g.push_back(std::pow(10.0, -3.0 + 0.5 * i));
  return g;
}

std::vector<int> default_B_grid() { return {1, 2, 4, 8}; }

std::vector<double> default_step_grid() {
  std::vector<double> g;
  for (int i = 0; i <= 12; ++i) g.push_back(std::pow(10.0, -6.0 + 0.5 * i));
  return g;
}

SweepResult sweep_algorithm(const Instance& inst, const AlgorithmConfig& alg,
                            double stop_tol, int max_iters, long round_budget) {
  SweepResult result;
  result.alg = alg.alg;
  RunOptions opts;  // conservation checks stay on; no iterate storage

  for (const auto& params : grid_points(alg)) {
    SweepEntry e;
    e.params = params;
    e.rounds_to_tol = kNeverReached;
    try {
      const ConvergenceTrace tr =
          run_arm(inst, alg, params, stop_tol, max_iters, round_budget, opts);
      e.reason = tr.reason;
      e.rounds_to_tol = rounds_to_tolerance(tr, stop_tol);
      e.converged = e.rounds_to_tol != kNeverReached;
    } catch (const Error&) {
      // A grid point that cannot even run scores as non-converged.
      e.reason = StopReason::diverged;
    }
    result.entries.push_back(std::move(e));
  }

  // Grid order is ascending in the parameter tuple, so keeping the first
  // strict improvement breaks ties toward the smallest tuple.
  const SweepEntry* best = nullptr;
  for (const auto& e : result.entries)
    if (!best || e.rounds_to_tol < best->rounds_to_tol) best = &e;
  if (!best || !best->converged)
    throw AllDiverged("sweep: no " + alg.alg + " grid point reached tol = " +
                      std::to_string(stop_tol));
  result.best = *best;
  return result;
}

std::string sweep_csv_string(const SweepResult& r) {
  std::ostringstream out;
  out << "alg,rho,B,step,rounds_to_tol,converged,reason\n";
  for (const auto& e : r.entries) {
    auto field = [&](const char* key) {
      auto it = e.params.find(key);
      return it == e.params.end() ? std::string() : format_double(it->second);
    };
    std::string step = field("c");
    if (step.empty()) step = field("alpha");
    out << r.alg << "," << field("rho") << "," << field("B") << "," << step << ","
        << (e.converged ? std::to_string(e.rounds_to_tol) : std::string("-1")) << ","
        << (e.converged ? 1 : 0) << "," << to_string(e.reason) << "\n";
  }
  return out.str();
}

void write_sweep_csv(const SweepResult& r, const std::string& path) {
  write_text_file(path, sweep_csv_string(r));
}

ComparisonBundle compare(const Instance& inst, const ExperimentConfig& config) {
  if (config.algorithms.size() < 2)
    throw ConfigError("compare: needs at least two algorithms");

  ComparisonBundle bundle;
  bundle.instance_hash = inst.instance_hash;
  bundle.w_hash = inst.w_hash;

  const bool emit = !config.out_dir.empty();
  if (emit) std::filesystem::create_directories(config.out_dir);

  std::vector<SvgSeries> series;
  json meta_arms = json::array();

  for (std::size_t idx = 0; idx < config.algorithms.size(); ++idx) {
    const auto& alg = config.algorithms[idx];
    ComparisonArm arm;
    arm.alg = alg.alg;
    arm.rounds_to_tol = kNeverReached;
    try {
      if (has_grids(alg)) {
        SweepResult sw = sweep_algorithm(inst, alg, config.stop_tol, config.max_iters,
                                         config.round_budget);
        arm.params = sw.best.params;
        if (emit)
          write_sweep_csv(sw, (std::filesystem::path(config.out_dir) /
                               ("sweep_" + std::to_string(idx) + "_" + alg.alg + ".csv"))
                                  .string());
      } else {
        arm.params = fixed_params(alg);
      }
      arm.trace = run_arm(inst, alg, arm.params, config.stop_tol, config.max_iters,
                          config.round_budget, RunOptions{});
      arm.rounds_to_tol = rounds_to_tolerance(arm.trace, config.stop_tol);
      arm.converged = arm.rounds_to_tol != kNeverReached;
    } catch (const Error& e) {
      arm.error = std::string(e.code()) + ": " + e.what();
    }

    if (emit && arm.error.empty()) {
      write_trace_csv(arm.trace, (std::filesystem::path(config.out_dir) /
                                  ("trace_" + std::to_string(idx) + "_" + alg.alg + ".csv"))
                                     .string());
      SvgSeries s;
      s.label = alg.alg + " (" + params_label(arm.params) + ")";
      for (const auto& row : arm.trace.rows)
        s.points.emplace_back(static_cast<double>(row.comm_rounds),
                              std::log10(std::max(row.primal_res, 1e-300)));
      series.push_back(std::move(s));
    }

    json ja;
    ja["alg"] = arm.alg;
    ja["params"] = arm.params;
    ja["converged"] = arm.converged;
    if (arm.converged) ja["rounds_to_tol"] = arm.rounds_to_tol;
    if (!arm.error.empty()) ja["error"] = arm.error;
    if (arm.error.empty()) ja["reason"] = to_string(arm.trace.reason);
    meta_arms.push_back(ja);

    bundle.arms.push_back(std::move(arm));
  }

  if (emit) {
    write_line_chart_svg((std::filesystem::path(config.out_dir) / "compare.svg").string(),
                         "Primal residual vs communication rounds", "communication rounds",
                         "log10 primal residual", series,
                         "instance " + inst.instance_hash);
    json meta;
    meta["version"] = kVersion;
    meta["operation"] = "compare";
    meta["rng"] = kRngDescription;
    meta["config"] = config_to_json(config);
    meta["instance_hash"] = inst.instance_hash;
    meta["w_hash"] = inst.w_hash;
    meta["graph_seed_requested"] = inst.graph_seed_requested;
    meta["graph_seed_used"] = inst.graph_seed_used;
    meta["arms"] = meta_arms;
    write_text_file((std::filesystem::path(config.out_dir) / "meta.json").string(),
                    meta.dump(2) + "\n");
  }
  return bundle;
}

RateFit fit_rate(const ConvergenceTrace& trace, double nongeometric_threshold) {
  std::vector<std::pair<double, double>> usable;  // (iter, log primal)
  for (const auto& r : trace.rows)
    if (std::isfinite(r.primal_res) && r.primal_res > 0.0)
      usable.emplace_back(static_cast<double>(r.iter), std::log(r.primal_res));
  if (usable.size() < 10)
    throw InsufficientData("fit_rate: needs at least 10 rows with positive residuals, got " +
                           std::to_string(usable.size()));

  const std::size_t start = usable.size() / 3;  // final two thirds
  const std::size_t count = usable.size() - start;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = start; i < usable.size(); ++i) {
    sx += usable[i].first;
    sy += usable[i].second;
    sxx += usable[i].first * usable[i].first;
    sxy += usable[i].first * usable[i].second;
  }
  const double denom = count * sxx - sx * sx;
  if (denom == 0.0) throw InsufficientData("fit_rate: degenerate iteration axis");
  const double slope = (count * sxy - sx * sy) / denom;
  const double intercept = (sy - slope * sx) / count;

  double ss = 0.0;
  for (std::size_t i = start; i < usable.size(); ++i) {
    const double resid = usable[i].second - (intercept + slope * usable[i].first);
    ss += resid * resid;
  }
  RateFit fit;
  fit.lambda_hat = std::exp(slope);
  fit.fit_residual = std::sqrt(ss / count);
  fit.nongeometric = fit.fit_residual > nongeometric_threshold;
  return fit;
}

long rounds_to_tolerance(const ConvergenceTrace& trace, double tol) {
  for (const auto& r : trace.rows)
    if (r.primal_res <= tol) return r.comm_rounds;
  return kNeverReached;
}

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string meta_json(const std::string& operation,
                      const std::map<std::string, std::string>& fields) {
  json j;
  j["version"] = kVersion;
  j["operation"] = operation;
  j["rng"] = kRngDescription;
  for (const auto& [k, v] : fields) j[k] = v;
  return j.dump(2) + "\n";
}

}  // namespace dadmm
