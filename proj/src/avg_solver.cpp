#include "selective/avg_solver.hpp"

#include <algorithm>
#include <stdexcept>

#include "selective/belief.hpp"

namespace selective {

double avg_backup(double p_hat, double child_hi, double child_lo) {
  double value = p_hat * child_hi;
  value += (1.0 - p_hat) * child_lo;
  return value;
}

ValueGrid avg_solve(double cost, int horizon, int n_lo) {
  validate_cost(cost);
  if (n_lo < 1) throw std::invalid_argument("lowest level must be >= 1");
  if (horizon < n_lo) {
    throw std::invalid_argument("horizon N must be >= n_lo");
  }
  ValueGrid grid(Objective::kAverage, cost, std::nullopt, horizon, n_lo);
  fill_backward(
      grid,
      [&](int n, int k) {
        const double v = std::max(lattice_p_hat(n, k) - cost, 0.0);
        return CellValues{v, v};
      },
      [](int, int, double p_hat, double hi, double lo) {
        const double v = avg_backup(p_hat, hi, lo);
        return CellValues{v, v};
      });
  return grid;
}

LevelReport theorem2_check(const ValueGrid& grid, double tol) {
  LevelReport report{"theorem2", {}};
  for (int n = grid.n_lo(); n <= grid.terminal_level(); ++n) {
    const auto v = grid.v_star(n);
    SlackTracker tracker;
    for (int k = 0; k <= n; ++k) {
      tracker.observe(v[k], n, k);
      if (k >= 1 && k < n) {
        tracker.observe(v[k + 1] - 2.0 * v[k] + v[k - 1], n, k);
      }
    }
    if (n < grid.terminal_level()) {
      // v[k] is the Jensen mixture of its children by construction.
      const auto child = grid.v_star(n + 1);
      for (int k = 0; k <= n; ++k) {
        const double p_hat = lattice_p_hat(n, k);
        tracker.observe(v[k] - interpolate_level(child, p_hat), n, k);
      }
    }
    report.levels.push_back(
        {n, tracker.slack >= -tol, tracker.slack, tracker.location});
  }
  return report;
}

}  // namespace selective
