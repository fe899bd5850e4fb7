#pragma once

#include <string>
#include <vector>

#include "selective/belief.hpp"
#include "selective/value_grid.hpp"

namespace selective {

// Infinite-sample value: max{p_hat - c, 0} / (1 - gamma).
double terminal_value(double p_hat, double cost, double gamma);

// One optimal backup at lattice point p_hat given the two children on level
// n + 1. Evaluation order is fixed (hi term, lo term, then the immediate
// reward) so independent re-implementations can match bit for bit:
//   v_tilde = (p_hat - c) + gamma * (p_hat * child_hi + (1 - p_hat) * child_lo)
//   v_star  = max{v_tilde, 0}
CellValues backup(double p_hat, double child_hi, double child_lo, double cost,
                  double gamma);

// Full backward induction for the discounted objective. The terminal level
// N + 1 holds the infinite-sample value; levels N .. n_lo are one backup
// each. The first overload starts at the prior's level.
ValueGrid solve(const ProblemParams& params, int horizon);
ValueGrid solve(const ProblemParams& params, int horizon, int n_lo);

// Low-memory variant: keeps two rolling levels and returns only level `n`
// (v_star column). Bit-identical to solve(...).v_star(n).
std::vector<double> solve_level(const ProblemParams& params, int horizon,
                                int n);

enum class Decision { kReject, kAccept };

// Accept iff the continue-value is strictly positive; ties reject.
// Throws std::out_of_range if b lies outside the grid.
Decision policy_at(const ValueGrid& grid, const BeliefState& b);

// Linear interpolation along level n; exact at lattice points. At the
// terminal level the true function has a kink at c, so the single cell
// bracketing c carries interpolation error.
double value_query(const ValueGrid& grid, int n, double p_hat);

struct FrontierRow {
  int n = 0;
  // Largest lattice p_hat with a reject decision.
  double c_lattice = 0.0;
  // Zero crossing of the linear interpolant of v_tilde between the last
  // rejecting and first accepting lattice points.
  double c_interp = 0.0;
  bool all_accept = false;
  bool all_reject = false;

  // The true threshold lies in [lower_bound(), upper_bound()). The
  // continue-value is convex in p_hat, so its chord crosses zero no later
  // than the function itself; the first accepting lattice point bounds it
  // from above.
  double lower_bound() const;
  double upper_bound() const;
};

// A level whose accept set is not a suffix along k.
struct FrontierViolation {
  int n = 0;
  int k = 0;  // first rejecting cell above an accepting one
};

struct FrontierTable {
  std::vector<FrontierRow> rows;  // ascending n
  std::vector<FrontierViolation> violations;

  bool interval_structure_ok() const { return violations.empty(); }
  const FrontierRow& at(int n) const;
};

// Stopping thresholds c_n per level. The terminal level reports c exactly.
// All-accept levels report 0; all-reject levels report 1. Levels that break
// the prefix/suffix sign pattern are recorded in `violations` and still get
// a row (thresholds from the last reject cell).
FrontierTable frontier(const ValueGrid& grid);

}  // namespace selective
