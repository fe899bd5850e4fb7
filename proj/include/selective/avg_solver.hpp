#pragma once

#include "selective/report.hpp"
#include "selective/value_grid.hpp"

namespace selective {

// Average-reward backup: p_hat * child_hi + (1 - p_hat) * child_lo. The 1/N
// immediate-reward term vanishes in the limit and there is no clamp at zero.
double avg_backup(double p_hat, double child_hi, double child_lo);

// Backward recursion for the average objective, seeded at level N + 1 with
// max{p_hat - c, 0}. Both grid columns hold the same value.
ValueGrid avg_solve(double cost, int horizon, int n_lo);

// Per level: non-negativity, discrete convexity along k, and the Jensen-form
// monotonicity p*V(n+1,hi) + (1-p)*V(n+1,lo) >= interp V(n+1, p) - tol.
// Never throws on a failing grid; failures are reported.
LevelReport theorem2_check(const ValueGrid& grid, double tol = 1e-9);

}  // namespace selective
