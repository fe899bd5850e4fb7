// Command-line front end: solve, figure, simulate, verify, groups.
//
// Exit codes: 0 success, 1 verification failure, 2 usage or parameter error.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "selective/avg_solver.hpp"
#include "selective/dp_solver.hpp"
#include "selective/groups.hpp"
#include "selective/io.hpp"
#include "selective/policy.hpp"
#include "selective/sim.hpp"
#include "selective/verify.hpp"

namespace {

using namespace selective;
namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw UsageError("cannot open '" + path + "' for writing");
  return out;
}

void emit_json(const nlohmann::json& doc, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << doc.dump(2) << '\n';
  } else {
    open_output(out_path) << doc.dump(2) << '\n';
  }
}

// ---------------------------------------------------------------------------
// solve

struct SolveOptions {
  double cost = 0.0;
  std::optional<double> gamma;
  int horizon = 0;
  int n_lo = 2;
  std::string out_grid;
  std::string out_frontier;
  bool average = false;
  bool timing = false;
};

int run_solve(const SolveOptions& opt) {
  if (!opt.average && !opt.gamma) {
    throw UsageError("--gamma is required unless --average is given");
  }
  const auto start = std::chrono::steady_clock::now();
  const ValueGrid grid =
      opt.average ? avg_solve(opt.cost, opt.horizon, opt.n_lo)
                  : solve(ProblemParams{opt.cost, *opt.gamma, BeliefState(2, 1)},
                          opt.horizon, opt.n_lo);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();

  if (!opt.out_grid.empty()) {
    auto out = open_output(opt.out_grid);
    write_grid_csv(out, grid);
  }
  std::optional<FrontierTable> table;
  if (!opt.average) table = frontier(grid);
  if (!opt.out_frontier.empty()) {
    if (!table) throw UsageError("--out-frontier needs the discounted objective");
    auto out = open_output(opt.out_frontier);
    write_frontier_csv(out, grid, *table);
  }

  std::cout << "objective=" << to_string(grid.objective())
            << " N=" << grid.horizon() << " n_lo=" << grid.n_lo()
            << " cells=" << grid.num_cells() << '\n';
  if (grid.has_level(2)) {
    std::cout << "V(2,0.5)=" << format_exact(grid.value(2, 1)) << '\n';
  }
  if (table && !table->interval_structure_ok()) {
    std::cerr << "warning: " << table->violations.size()
              << " level(s) break the threshold interval structure\n";
  }
  if (opt.timing) std::cout << "solve_seconds=" << format_exact(seconds) << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------------------
// figure

struct FigureOptions {
  std::string preset = "fig1";
  std::string out_dir;
  std::vector<int> levels{10, 20, 50, 100, 1001};
};

int run_figure(const FigureOptions& opt) {
  if (opt.preset != "fig1") throw UsageError("unknown preset '" + opt.preset + "'");
  constexpr int kHorizon = 1000;
  constexpr double kCost = 0.8;
  if (opt.levels.empty()) throw UsageError("--levels is empty");
  int n_lo = kHorizon + 1;
  for (int level : opt.levels) {
    if (level < 1 || level > kHorizon + 1) {
      throw UsageError("level " + std::to_string(level) + " outside [1, " +
                       std::to_string(kHorizon + 1) + "]");
    }
    n_lo = std::min(n_lo, level);
  }
  fs::create_directories(opt.out_dir);
  int written = 0;
  for (double gamma : {0.99, 0.95}) {
    const ValueGrid grid =
        solve(ProblemParams{kCost, gamma, BeliefState(2, 1)}, kHorizon, n_lo);
    for (int level : opt.levels) {
      const fs::path path = fs::path(opt.out_dir) /
                            ("fig1_gamma" + format_number(gamma) + "_n" +
                             std::to_string(level) + ".csv");
      auto out = open_output(path.string());
      write_curve_csv(out, grid, level);
      ++written;
    }
  }
  std::cout << "wrote " << written << " curve files to " << opt.out_dir << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------------------
// simulate

struct SimulateOptions {
  std::vector<std::string> policies;
  double cost = 0.0;
  std::optional<double> gamma;
  std::optional<long long> avg_steps;
  long long reps = 10000;
  std::uint64_t seed = 1;
  std::optional<double> true_p;
  std::vector<int> from_prior;
  std::vector<int> prior{2, 1};
  double eps = 1e-6;
  int horizon = 1000;
  bool keep_returns = false;
  std::string out;
};

int run_simulate(const SimulateOptions& opt) {
  EnvSpec env;
  env.cost = opt.cost;
  if (opt.gamma.has_value() == opt.avg_steps.has_value()) {
    throw UsageError("give exactly one of --gamma and --avg-steps");
  }
  if (opt.gamma) {
    env.objective = Discounted{*opt.gamma, opt.eps};
  } else {
    env.objective = Average{*opt.avg_steps};
  }
  if (opt.true_p.has_value() == !opt.from_prior.empty()) {
    throw UsageError("give exactly one of --true-p and --from-prior");
  }
  if (opt.true_p) {
    env.p_source = FixedP{*opt.true_p, BeliefState(opt.prior[0], opt.prior[1])};
  } else {
    env.p_source = FromPrior{BeliefState(opt.from_prior[0], opt.from_prior[1])};
  }
  env.validate();

  std::vector<PolicySpec> specs;
  std::vector<std::string> notes;
  std::shared_ptr<const ValueGrid> grid;
  for (const auto& text : opt.policies) {
    const ParsedPolicy parsed = parse_policy(text);
    if (parsed.kind == PolicyKind::kDpOptimal && !grid) {
      if (!opt.gamma) throw UsageError("policy dp needs the discounted objective");
      grid = std::make_shared<const ValueGrid>(
          solve(ProblemParams{opt.cost, *opt.gamma, env.learner_prior()},
                opt.horizon));
      notes.push_back("dp grid solved implicitly (N=" +
                      std::to_string(opt.horizon) + ")");
    }
    specs.push_back(make_policy(parsed, opt.cost, grid, opt.true_p));
  }

  auto reports = run_batch(env, specs, opt.reps, opt.seed, opt.keep_returns);
  nlohmann::json doc;
  if (reports.size() == 1) {
    for (const auto& note : notes) reports[0].notes.push_back(note);
    doc = to_json(reports[0]);
  } else {
    doc = nlohmann::json::array();
    for (auto& report : reports) {
      if (report.policy.name == "dp_optimal") {
        for (const auto& note : notes) report.notes.push_back(note);
      }
      doc.push_back(to_json(report));
    }
  }
  emit_json(doc, opt.out);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// verify

struct VerifyOptions {
  std::string suite = "all";
  int horizon = 500;
  double cost = 0.8;
  double tol = 1e-9;
  long long samples = 10000;
  std::uint64_t seed = 1;
  std::string out;
};

std::vector<CheckResult> run_suite(const std::string& suite,
                                   const VerifyOptions& opt) {
  std::vector<CheckResult> checks;
  const auto tagged = [](CheckResult r, const std::string& tag) {
    r.name += "[" + tag + "]";
    return r;
  };
  if (suite == "lemma") {
    checks.push_back(lemma1_check(opt.samples, opt.seed));
  } else if (suite == "prop2") {
    for (double gamma : {0.99, 0.95}) {
      const ValueGrid grid =
          solve(ProblemParams{opt.cost, gamma, BeliefState(2, 1)}, opt.horizon, 2);
      const std::string tag = "gamma=" + format_number(gamma);
      checks.push_back(tagged(prop2_check(grid, opt.tol).summary(), tag));
      checks.push_back(tagged(interval_structure_check(grid), tag));
      checks.push_back(tagged(frontier_monotone_check(frontier(grid), opt.cost), tag));
    }
  } else if (suite == "prop3") {
    const ProblemParams params{opt.cost, 0.99, BeliefState(2, 1)};
    const int n_lo = std::min(2, opt.horizon);
    const UniformGrid uniform =
        uniform_grid_solve(params, opt.horizon, 4 * opt.horizon, n_lo);
    const ValueGrid lattice = solve(params, opt.horizon, n_lo);
    for (auto& r : prop3_check(uniform, frontier(lattice), opt.cost).results()) {
      checks.push_back(std::move(r));
    }
  } else if (suite == "oracle") {
    for (auto& r : oracle_equivalence_check(opt.cost, 0.99, opt.horizon, 100,
                                            opt.seed)) {
      checks.push_back(std::move(r));
    }
  } else if (suite == "theorem2") {
    for (double cost : {0.3, 0.5, 0.8}) {
      const ValueGrid grid = avg_solve(cost, opt.horizon, 2);
      checks.push_back(tagged(theorem2_check(grid, opt.tol).summary(),
                              "c=" + format_number(cost)));
    }
  } else if (suite == "eq6") {
    for (double gamma : {0.99, 0.95}) {
      for (auto& r : eq6_check(ProblemParams{opt.cost, gamma, BeliefState(2, 1)},
                               opt.horizon, 2)) {
        checks.push_back(tagged(r, "gamma=" + format_number(gamma)));
      }
    }
  } else {
    throw UsageError("unknown suite '" + suite + "'");
  }
  return checks;
}

int run_verify(const VerifyOptions& opt) {
  const std::vector<std::string> all{"lemma", "prop2", "prop3", "oracle",
                                     "theorem2", "eq6"};
  std::vector<CheckResult> checks;
  if (opt.suite == "all") {
    for (const auto& suite : all) {
      for (auto& r : run_suite(suite, opt)) checks.push_back(std::move(r));
    }
  } else {
    checks = run_suite(opt.suite, opt);
  }
  const auto doc = verification_report(checks);
  emit_json(doc, opt.out);
  return doc["pass"].get<bool>() ? kExitOk : kExitVerifyFailed;
}

// ---------------------------------------------------------------------------
// groups

struct GroupsOptions {
  std::string problem;
  bool simulate = false;
  long long reps = 10000;
  std::uint64_t seed = 1;
  double eps = 1e-6;
  std::string out;
};

int run_groups(const GroupsOptions& opt) {
  std::ifstream in(opt.problem);
  if (!in) throw UsageError("cannot read problem file '" + opt.problem + "'");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw UsageError(opt.problem + ": " + e.what());
  }
  const GroupProblem gp = GroupProblem::from_json(doc);
  const GroupSolution solution = solve_groups(gp);

  nlohmann::json contexts = nlohmann::json::array();
  for (std::size_t j = 0; j < gp.contexts.size(); ++j) {
    const auto& ctx = gp.contexts[j];
    contexts.push_back({{"label", ctx.label},
                        {"weight", ctx.weight},
                        {"n0", ctx.prior.n()},
                        {"s0", ctx.prior.s()},
                        {"root_value", solution.root_values[j]}});
  }
  nlohmann::json result = {{"c", gp.cost},
                           {"gamma", gp.gamma},
                           {"N", gp.horizon},
                           {"contexts", contexts},
                           {"aggregate", solution.aggregate}};
  if (opt.simulate) {
    result["simulation"] =
        to_json(simulate_groups(gp, &solution, opt.reps, opt.seed, opt.eps));
  }
  emit_json(result, opt.out);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Selective-labels decision problems: exact belief-lattice "
               "solver, simulation and verification"};
  app.require_subcommand(1);

  SolveOptions solve_opt;
  auto* solve_cmd = app.add_subcommand("solve", "Backward induction over the belief lattice");
  solve_cmd->add_option("--cost", solve_opt.cost, "Per-acceptance cost c in (0,1)")->required();
  solve_cmd->add_option("--gamma", solve_opt.gamma, "Discount factor in (0,1)");
  solve_cmd->add_option("--N", solve_opt.horizon, "Horizon; level N+1 is terminal")->required();
  solve_cmd->add_option("--n-lo", solve_opt.n_lo, "Lowest level solved")->capture_default_str();
  solve_cmd->add_option("--out-grid", solve_opt.out_grid, "Grid CSV path");
  solve_cmd->add_option("--out-frontier", solve_opt.out_frontier, "Frontier CSV path");
  solve_cmd->add_flag("--average", solve_opt.average, "Average-reward objective");
  solve_cmd->add_flag("--timing", solve_opt.timing, "Report solve wall-clock seconds");

  FigureOptions figure_opt;
  auto* figure_cmd = app.add_subcommand("figure", "Value-curve CSV bundle (N=1000, c=0.8, gamma in {0.99, 0.95})");
  figure_cmd->add_option("--preset", figure_opt.preset, "Curve preset")->capture_default_str();
  figure_cmd->add_option("--out-dir", figure_opt.out_dir, "Output directory")->required();
  figure_cmd->add_option("--levels", figure_opt.levels, "Levels n to emit")
      ->delimiter(',')
      ->capture_default_str();

  SimulateOptions sim_opt;
  auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo policy evaluation");
  sim_cmd->add_option("--policy", sim_opt.policies,
                      "dp, oracle, myopic, always, const:<pi>, twophase:<N>:<beta>; "
                      "repeat for a common-random-numbers batch")
      ->required();
  sim_cmd->add_option("--cost", sim_opt.cost, "Cost c in (0,1)")->required();
  sim_cmd->add_option("--gamma", sim_opt.gamma, "Discounted objective");
  sim_cmd->add_option("--avg-steps", sim_opt.avg_steps, "Average objective over N steps");
  sim_cmd->add_option("--reps", sim_opt.reps, "Replications")->capture_default_str();
  sim_cmd->add_option("--seed", sim_opt.seed, "Seed")->capture_default_str();
  sim_cmd->add_option("--true-p", sim_opt.true_p, "Fixed success probability");
  sim_cmd->add_option("--from-prior", sim_opt.from_prior, "Draw p from Beta(s0, n0-s0): n0 s0")
      ->expected(2);
  sim_cmd->add_option("--prior", sim_opt.prior, "Learner prior with --true-p: n0 s0")
      ->expected(2)
      ->capture_default_str();
  sim_cmd->add_option("--eps", sim_opt.eps, "Discounted tail bound")->capture_default_str();
  sim_cmd->add_option("--N", sim_opt.horizon, "Horizon of the implicit dp grid")->capture_default_str();
  sim_cmd->add_flag("--keep-returns", sim_opt.keep_returns, "Include per-replication returns");
  sim_cmd->add_option("--out", sim_opt.out, "JSON output path (default stdout)");

  VerifyOptions verify_opt;
  auto* verify_cmd = app.add_subcommand("verify", "Numerical property checks");
  verify_cmd->add_option("--suite", verify_opt.suite,
                         "all, lemma, prop2, prop3, oracle, theorem2, eq6")
      ->capture_default_str();
  verify_cmd->add_option("--N", verify_opt.horizon, "Horizon")->capture_default_str();
  verify_cmd->add_option("--cost", verify_opt.cost, "Cost c")->capture_default_str();
  verify_cmd->add_option("--tol", verify_opt.tol, "Shape-check tolerance")->capture_default_str();
  verify_cmd->add_option("--samples", verify_opt.samples, "Chord-lemma samples")->capture_default_str();
  verify_cmd->add_option("--seed", verify_opt.seed, "Seed")->capture_default_str();
  verify_cmd->add_option("--out", verify_opt.out, "JSON output path (default stdout)");

  GroupsOptions groups_opt;
  auto* groups_cmd = app.add_subcommand("groups", "Independent solves per discrete context");
  groups_cmd->add_option("--problem", groups_opt.problem, "Problem JSON")->required();
  groups_cmd->add_flag("--simulate", groups_opt.simulate, "Run the interleaved-arrival simulation");
  groups_cmd->add_option("--reps", groups_opt.reps, "Replications")->capture_default_str();
  groups_cmd->add_option("--seed", groups_opt.seed, "Seed")->capture_default_str();
  groups_cmd->add_option("--eps", groups_opt.eps, "Discounted tail bound")->capture_default_str();
  groups_cmd->add_option("--out", groups_opt.out, "JSON output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*solve_cmd) return run_solve(solve_opt);
    if (*figure_cmd) return run_figure(figure_opt);
    if (*sim_cmd) return run_simulate(sim_opt);
    if (*verify_cmd) return run_verify(verify_opt);
    if (*groups_cmd) return run_groups(groups_opt);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
