// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Tolerances are pinned here and nowhere else.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "selective/avg_solver.hpp"
#include "selective/dp_solver.hpp"
#include "selective/io.hpp"
#include "selective/policy.hpp"
#include "selective/sim.hpp"
#include "selective/verify.hpp"

namespace {

using namespace selective;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* pattern, double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), pattern, value);
  return buf;
}

ProblemParams params(double cost, double gamma) {
  return ProblemParams{cost, gamma, BeliefState(2, 1)};
}

Outcome runtime() {
  const auto start = Clock::now();
  const ValueGrid grid = solve(params(0.8, 0.99), 1000);
  const double elapsed = seconds_since(start);
  return {elapsed < 1.0 && grid.num_cells() == 502500,
          "N=1000 solve " + fmt("%.4f", elapsed) + " s (limit 1 s)"};
}

Outcome hand_value() {
  const ValueGrid grid = solve(params(0.5, 0.5), 2);
  const double v = grid.value(2, 1);
  const double error = std::abs(v - 1.0 / 12.0);
  const bool accept = policy_at(grid, BeliefState(2, 1)) == Decision::kAccept;
  const double known = terminal_value(0.5, 0.5, 0.5);
  return {error <= 1e-15 && accept && known == 0.0,
          "V(2,0.5)=" + format_exact(v) + " |err|=" + fmt("%.1e", error) +
              (accept ? " accept" : " reject") +
              " V(inf,0.5)=" + format_number(known)};
}

Outcome structural() {
  const auto start = Clock::now();
  bool pass = true;
  std::string detail;
  for (double gamma : {0.99, 0.95}) {
    const ValueGrid grid = solve(params(0.8, gamma), 1000);
    const auto shape = prop2_check(grid, 1e-9).summary();
    const auto interval = interval_structure_check(grid);
    const auto front = frontier_monotone_check(frontier(grid), 0.8);
    pass = pass && shape.pass && interval.pass && front.pass;
    detail += "gamma=" + format_number(gamma) + ": prop2 " +
              (shape.pass ? "ok" : "FAIL") + " (slack " +
              fmt("%.1e", shape.worst_slack) + "), interval " +
              (interval.pass ? "ok" : "FAIL") + ", frontier " +
              (front.pass ? "ok" : "FAIL") + "; ";
  }
  const double elapsed = seconds_since(start);
  pass = pass && elapsed < 10.0;
  return {pass, detail + fmt("%.2f s", elapsed)};
}

Outcome prop3() {
  const ProblemParams p = params(0.8, 0.99);
  const UniformGrid uniform = uniform_grid_solve(p, 500, 2000, 2);
  const Prop3Report report = prop3_check(uniform, frontier(solve(p, 500)), 0.8, 1e-6);
  const auto mono = report.uniform_monotone.summary();
  const bool gap_ok = report.gap_order && report.gap_order->pass;
  return {mono.pass && gap_ok,
          "min V(n)-V(n+1) " + fmt("%.1e", mono.worst_slack) + " (tol 1e-6); " +
              (report.gap_order ? report.gap_order->location : "gap missing")};
}

Outcome oracle() {
  const auto results = oracle_equivalence_check(0.8, 0.99, 1000, 100, 2024, 14);
  const auto& exact = results[0];
  const auto& bracket = results[1];
  return {exact.pass && bracket.pass && exact.evaluations == 100,
          std::to_string(exact.evaluations - exact.violations) + "/" +
              std::to_string(exact.evaluations) + " bit-exact, bracket " +
              (bracket.pass ? "ok" : "FAIL")};
}

Outcome eq6() {
  bool pass = true;
  std::string detail;
  for (double gamma : {0.99, 0.95}) {
    const auto results = eq6_check(params(0.8, gamma), 1000, 2, 1e-12, 0.0);
    for (const auto& r : results) pass = pass && r.pass;
    // Adding 0.0 turns a negated zero slack into +0 for display.
    detail += "gamma=" + format_number(gamma) + ": max |V_pi - V*| " +
              fmt("%.1e", -results[0].worst_slack + 0.0) +
              ", max (V_always - V*) " +
              fmt("%.1e", -results[1].worst_slack + 0.0) + "; ";
  }
  detail.resize(detail.size() - 2);
  return {pass, detail};
}

Outcome bayes_consistency() {
  const ProblemParams p = params(0.8, 0.99);
  auto grid = std::make_shared<const ValueGrid>(solve(p, 1000));
  const double root = grid->value(2, 1);
  EnvSpec env;
  env.p_source = FromPrior{BeliefState(2, 1)};
  env.cost = 0.8;
  env.objective = Discounted{0.99, 1e-6};
  const auto reports = run_batch(
      env, {PolicySpec::dp_optimal(grid), PolicySpec::myopic(0.8)}, 100000, 3, true);
  const auto& dp = reports[0];
  const auto& myopic = reports[1];
  const double gap = std::abs(dp.mean - root);
  const double allowed = 3.0 * dp.std_error + 2e-7;

  // Pooled standard error of the paired difference under common randoms.
  std::vector<double> diff(dp.returns.size());
  for (std::size_t r = 0; r < diff.size(); ++r) {
    diff[r] = dp.returns[r] - myopic.returns[r];
  }
  SimReport paired;
  summarize(diff, paired);
  const bool dominates = dp.mean >= myopic.mean - 3.0 * paired.std_error;
  return {gap <= allowed && dominates,
          "dp " + fmt("%.5f", dp.mean) + " vs V(2,0.5) " + fmt("%.5f", root) +
              " (|diff| " + fmt("%.4f", gap) + " <= " + fmt("%.4f", allowed) +
              "); myopic " + fmt("%.5f", myopic.mean) + ", paired se " +
              fmt("%.4f", paired.std_error)};
}

Outcome closed_form() {
  EnvSpec env;
  env.p_source = FixedP{0.9, BeliefState(2, 1)};
  env.cost = 0.8;
  env.objective = Discounted{0.95, 1e-6};
  const auto r = run_batch(env, {PolicySpec::oracle(0.8)}, 100000, 7)[0];
  const double gap = std::abs(r.mean - 2.0);
  return {gap <= 3.0 * r.std_error,
          "oracle " + fmt("%.5f", r.mean) + " vs 2.0 (|diff| " + fmt("%.5f", gap) +
              " <= " + fmt("%.5f", 3.0 * r.std_error) + ")"};
}

Outcome average_reward() {
  bool pass = true;
  std::string detail;
  for (double cost : {0.3, 0.5, 0.8}) {
    const auto summary = theorem2_check(avg_solve(cost, 200, 2), 1e-9).summary();
    pass = pass && summary.pass;
    detail += "c=" + format_number(cost) + (summary.pass ? " ok, " : " FAIL, ");
  }
  const auto two_phase = [](double p) {
    EnvSpec env;
    env.p_source = FixedP{p, BeliefState(2, 1)};
    env.cost = 0.8;
    env.objective = Average{100000};
    return run_batch(env, {PolicySpec::two_phase(100000, 0.5, 0.8)}, 200, 5)[0].mean;
  };
  const double high = two_phase(0.9);
  const double low = two_phase(0.7);
  pass = pass && std::abs(high - 0.1) <= 0.01 && std::abs(low) <= 0.01;
  detail += "two-phase p=0.9 " + fmt("%.5f", high) + " (target 0.1), p=0.7 " +
            fmt("%.5f", low) + " (target 0)";
  return {pass, detail};
}

Outcome lemma1() {
  const auto r = lemma1_check(10000, 1, 1e-12);
  return {r.pass && r.evaluations == 10000 && r.violations == 0,
          std::to_string(r.violations) + " violations in " +
              std::to_string(r.evaluations) + " samples, worst slack " +
              fmt("%.1e", r.worst_slack)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"runtime", runtime},
      {"hand_value", hand_value},
      {"structural_suite", structural},
      {"prop3_uniform_grid", prop3},
      {"oracle_equivalence", oracle},
      {"policy_evaluation", eq6},
      {"bayes_consistency", bayes_consistency},
      {"closed_form_oracle", closed_form},
      {"average_reward", average_reward},
      {"chord_lemma", lemma1},
  };
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    Outcome outcome;
    try {
      outcome = check();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    if (!outcome.pass) ++failures;
    std::printf("%s %-20s %s\n", outcome.pass ? "PASS" : "FAIL", name.c_str(),
                outcome.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n",
              static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
