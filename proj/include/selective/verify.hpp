#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "selective/belief.hpp"
#include "selective/dp_solver.hpp"
#include "selective/policy.hpp"
#include "selective/report.hpp"
#include "selective/value_grid.hpp"

namespace selective {

// ---------------------------------------------------------------------------
// Chord lemma on analytic convex functions
// ---------------------------------------------------------------------------

enum class ConvexFamily { kAbs, kSquare, kExp, kHinge };

// f(x) = |x - a|, (x - a)^2, exp(x), or max{x - a, 0} / (1 - gamma).
struct ConvexFunction {
  ConvexFamily family = ConvexFamily::kSquare;
  double a = 0.0;
  double gamma = 0.9;  // kHinge only

  double operator()(double x) const;
  std::string name() const;
};

// alpha f(x + (1 - alpha) delta) + (1 - alpha) f(x - alpha delta).
double chord_mixture(const ConvexFunction& f, double x, double alpha,
                     double delta);

// Draws `samples` random (f, x, alpha, delta1 <= delta2) tuples and checks
// chord_mixture(delta1) <= chord_mixture(delta2) + tol.
CheckResult lemma1_check(long long samples, std::uint64_t seed,
                         double tol = 1e-12);

// ---------------------------------------------------------------------------
// Grid shape checks
// ---------------------------------------------------------------------------

// Per level: first and second differences along k are >= -tol.
LevelReport prop2_check(const ValueGrid& grid, double tol = 1e-9);

// Per level: the accept set along k is a suffix.
CheckResult interval_structure_check(const ValueGrid& grid);

// c_n <= c_{n+1} <= c on lattice data: every row's bracket
// [lower_bound, upper_bound) must admit a non-decreasing sequence capped at
// c, i.e. max_{m <= n} lower_bound(m) < upper_bound(n) and
// lower_bound(n) <= c. The interval structure must also hold. `evaluations`
// counts rows; the location notes how often the point estimates c_interp
// alone step down (informational, lattice aliasing).
CheckResult frontier_monotone_check(const FrontierTable& table, double cost);

// ---------------------------------------------------------------------------
// Uniform-grid cross-check solver
// ---------------------------------------------------------------------------

// Values over p in {0, 1/M, ..., 1} for every level n in [n_lo, N + 1].
// Children (n p + 1)/(n + 1) and n p / (n + 1) are read off level n + 1 by
// linear interpolation.
struct UniformGrid {
  int resolution = 0;  // M
  int n_lo = 0;
  int horizon = 0;
  std::vector<std::vector<double>> levels;  // levels[n - n_lo][j]

  const std::vector<double>& level(int n) const;
  double p_at(int j) const { return static_cast<double>(j) / resolution; }
};

// `terminal` overrides the infinite-sample seed at level N + 1.
UniformGrid uniform_grid_solve(
    const ProblemParams& params, int horizon, int resolution, int n_lo,
    const std::function<double(double)>& terminal = nullptr);

// Largest |uniform - lattice| over points k/n == j/M shared by both grids.
double uniform_lattice_disagreement(const UniformGrid& uniform,
                                    const ValueGrid& lattice);

// sup_p (V(n, p) - V(N + 1, p)) on the uniform grid.
double sup_gap_to_terminal(const UniformGrid& uniform, int n);

struct Prop3Report {
  LevelReport uniform_monotone;  // V(n, p) >= V(n+1, p) - tol per level
  CheckResult frontier;          // c_n <= c_{n+1} <= c on the exact lattice
  std::optional<CheckResult> gap_order;  // gap(n=100) < gap(n=10)

  bool pass() const;
  std::vector<CheckResult> results() const;
};

Prop3Report prop3_check(const UniformGrid& uniform, const FrontierTable& table,
                        double cost, double tol = 1e-6);

// ---------------------------------------------------------------------------
// Top-down expectimax
// ---------------------------------------------------------------------------

enum class TailValue {
  kInfiniteSample,  // max{p_hat - c, 0} / (1 - gamma)
  kZero,            // pessimistic
  kMaximum,         // (1 - c) / (1 - gamma), optimistic
};

inline constexpr int kMaxOracleDepth = 25;

// Optimal value at b with `depth` backup layers above a tail level
// b.n + depth, memoized on (n, s). Matches solve(..., N) at b bit for bit
// when b.n + depth == N + 1. Throws std::invalid_argument past the depth cap.
double expectimax_oracle(const BeliefState& b, int depth, double cost,
                         double gamma,
                         TailValue tail = TailValue::kInfiniteSample);

// ---------------------------------------------------------------------------
// Fixed-policy evaluation
// ---------------------------------------------------------------------------

// Stationary acceptance probabilities pi(n, k).
using PolicyTable = std::function<double(int n, int k)>;

PolicyTable optimal_policy_table(const ValueGrid& grid);
PolicyTable constant_table(double pi);
// spec.acceptance_probability at step index 0.
PolicyTable table_from_policy(const PolicySpec& spec);

// Backward evaluation of
//   V(n, p) = pi / (1 - gamma + gamma pi) *
//             (p - c + gamma [p V(n+1, hi) + (1 - p) V(n+1, lo)])
// with terminal pi(N+1, k) * max{p - c, 0} / (1 - gamma). The v_tilde
// column holds the bracketed factor.
ValueGrid policy_value_grid(const PolicyTable& table,
                            const ProblemParams& params, int horizon,
                            int n_lo);

// Largest pointwise difference b - a over every cell (positive means b
// exceeds a somewhere).
double max_excess(const ValueGrid& a, const ValueGrid& b);

// ---------------------------------------------------------------------------
// Composite checks shared by the CLI and the acceptance suite
// ---------------------------------------------------------------------------

// Draws `states` random cells (n, s) with n in [N + 1 - max_depth, N] and
// compares expectimax (depth N + 1 - n) against the bottom-up grid:
// "oracle_exact" demands bit equality, "oracle_bracket" demands
// zero-tail <= value <= max-tail.
std::vector<CheckResult> oracle_equivalence_check(double cost, double gamma,
                                                  int horizon, int states,
                                                  std::uint64_t seed,
                                                  int max_depth = 14);

// Fixed-policy evaluation against the optimal grid: the optimal table must
// reproduce V* within `exact_tol`; always-accept must not exceed V*
// (beyond `order_tol`).
std::vector<CheckResult> eq6_check(const ProblemParams& params, int horizon,
                                   int n_lo, double exact_tol = 1e-12,
                                   double order_tol = 1e-9);

}  // namespace selective
