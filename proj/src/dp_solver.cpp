#include "selective/dp_solver.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace selective {

double terminal_value(double p_hat, double cost, double gamma) {
  return std::max(p_hat - cost, 0.0) / (1.0 - gamma);
}

CellValues backup(double p_hat, double child_hi, double child_lo, double cost,
                  double gamma) {
  double expected_child = p_hat * child_hi;
  expected_child += (1.0 - p_hat) * child_lo;
  const double v_tilde = (p_hat - cost) + gamma * expected_child;
  return {v_tilde, std::max(v_tilde, 0.0)};
}

namespace {

void validate_solver_inputs(double cost, double gamma, int horizon, int n_lo) {
  validate_cost(cost);
  validate_gamma(gamma);
  if (n_lo < 1) throw std::invalid_argument("lowest level must be >= 1");
  if (horizon < n_lo) {
    throw std::invalid_argument("horizon N=" + std::to_string(horizon) +
                                " must be >= n0=" + std::to_string(n_lo));
  }
}

// Terminal cell: the known-p decision 1(p_hat > c) expressed as a
// continue-value whose sign carries it.
CellValues terminal_cell(double p_hat, double cost, double gamma) {
  return {(p_hat - cost) / (1.0 - gamma), terminal_value(p_hat, cost, gamma)};
}

}  // namespace

ValueGrid solve(const ProblemParams& params, int horizon) {
  params.validate();
  return solve(params, horizon, params.prior.n());
}

ValueGrid solve(const ProblemParams& params, int horizon, int n_lo) {
  const double c = params.cost;
  const double gamma = params.gamma;
  validate_solver_inputs(c, gamma, horizon, n_lo);
  ValueGrid grid(Objective::kDiscounted, c, gamma, horizon, n_lo);
  fill_backward(
      grid,
      [&](int n, int k) { return terminal_cell(lattice_p_hat(n, k), c, gamma); },
      [&](int, int, double p_hat, double hi, double lo) {
        return backup(p_hat, hi, lo, c, gamma);
      });
  return grid;
}

std::vector<double> solve_level(const ProblemParams& params, int horizon,
                                int n) {
  const double c = params.cost;
  const double gamma = params.gamma;
  validate_solver_inputs(c, gamma, horizon, n);
  const int top = horizon + 1;
  std::vector<double> child(static_cast<std::size_t>(top) + 1);
  for (int k = 0; k <= top; ++k) {
    child[k] = terminal_cell(lattice_p_hat(top, k), c, gamma).v_star;
  }
  std::vector<double> current;
  for (int level = horizon; level >= n; --level) {
    current.resize(static_cast<std::size_t>(level) + 1);
    for (int k = 0; k <= level; ++k) {
      current[k] =
          backup(lattice_p_hat(level, k), child[k + 1], child[k], c, gamma)
              .v_star;
    }
    std::swap(child, current);
  }
  return child;
}

Decision policy_at(const ValueGrid& grid, const BeliefState& b) {
  return grid.continue_value(b.n(), b.s()) > 0.0 ? Decision::kAccept
                                                 : Decision::kReject;
}

double value_query(const ValueGrid& grid, int n, double p_hat) {
  return interpolate_level(grid.v_star(n), p_hat);
}

double FrontierRow::lower_bound() const {
  if (all_accept) return -std::numeric_limits<double>::infinity();
  return c_interp;
}

double FrontierRow::upper_bound() const {
  if (all_reject) return std::numeric_limits<double>::infinity();
  if (all_accept) return 0.0;
  return c_lattice + 1.0 / static_cast<double>(n);
}

const FrontierRow& FrontierTable::at(int n) const {
  if (rows.empty() || n < rows.front().n || n > rows.back().n) {
    throw std::out_of_range("no frontier row for level " + std::to_string(n));
  }
  return rows[static_cast<std::size_t>(n - rows.front().n)];
}

FrontierTable frontier(const ValueGrid& grid) {
  if (grid.objective() != Objective::kDiscounted) {
    throw std::invalid_argument("frontier requires a discounted grid");
  }
  FrontierTable table;
  table.rows.reserve(static_cast<std::size_t>(grid.num_levels()));
  for (int n = grid.n_lo(); n <= grid.terminal_level(); ++n) {
    const auto tilde = grid.v_tilde(n);
    FrontierRow row;
    row.n = n;

    int last_reject = -1;
    int first_accept = -1;
    for (int k = 0; k <= n; ++k) {
      if (tilde[k] > 0.0) {
        if (first_accept < 0) first_accept = k;
      } else {
        if (first_accept >= 0 && last_reject < first_accept) {
          table.violations.push_back({n, k});
        }
        last_reject = k;
      }
    }

    if (last_reject < 0) {
      row.all_accept = true;
      row.c_lattice = 0.0;
      row.c_interp = 0.0;
    } else if (last_reject == n) {
      row.all_reject = true;
      row.c_lattice = 1.0;
      row.c_interp = 1.0;
    } else {
      const int k = last_reject;
      const double lo = tilde[k];
      const double hi = tilde[k + 1];
      row.c_lattice = lattice_p_hat(n, k);
      row.c_interp = row.c_lattice + (-lo / (hi - lo)) / static_cast<double>(n);
    }
    if (n == grid.terminal_level() && !row.all_accept && !row.all_reject) {
      row.c_interp = grid.cost();
    }
    table.rows.push_back(row);
  }
  return table;
}

}  // namespace selective
