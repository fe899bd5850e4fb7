#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace selective {

enum class Objective { kDiscounted, kAverage };

std::string to_string(Objective objective);

// Dense triangular table over the belief lattice: for each level n in
// [n_lo, horizon + 1] the n + 1 cells p_hat = k / n, k = 0..n. Level
// horizon + 1 is the terminal level.
//
// Each cell stores the optimal value and the continue-value whose sign
// decides acceptance. For the average objective both columns hold the same
// number.
class ValueGrid {
 public:
  ValueGrid(Objective objective, double cost, std::optional<double> gamma,
            int horizon, int n_lo);

  Objective objective() const { return objective_; }
  double cost() const { return cost_; }
  // Present only for the discounted objective.
  std::optional<double> gamma() const { return gamma_; }
  int horizon() const { return horizon_; }
  int n_lo() const { return n_lo_; }
  int terminal_level() const { return horizon_ + 1; }
  int num_levels() const { return horizon_ + 2 - n_lo_; }
  std::size_t num_cells() const { return v_star_.size(); }

  bool has_level(int n) const { return n >= n_lo_ && n <= horizon_ + 1; }

  std::span<const double> v_star(int n) const;
  std::span<const double> v_tilde(int n) const;
  std::span<double> v_star(int n);
  std::span<double> v_tilde(int n);

  double value(int n, int k) const { return v_star(n)[check_k(n, k)]; }
  double continue_value(int n, int k) const {
    return v_tilde(n)[check_k(n, k)];
  }

  friend bool operator==(const ValueGrid&, const ValueGrid&) = default;

 private:
  std::size_t offset(int n) const;
  std::size_t check_level(int n) const;
  std::size_t check_k(int n, int k) const;

  Objective objective_;
  double cost_;
  std::optional<double> gamma_;
  int horizon_;
  int n_lo_;
  std::vector<double> v_star_;
  std::vector<double> v_tilde_;
};

struct CellValues {
  double v_tilde;
  double v_star;
};

inline double lattice_p_hat(int n, int k) {
  return static_cast<double>(k) / static_cast<double>(n);
}

// Backward pass shared by every solver: `terminal(n, k)` seeds level
// horizon + 1, then `backup(n, k, p_hat, child_hi, child_lo)` fills levels
// horizon .. n_lo. The children of cell (n, k) are cells (n+1, k+1) and
// (n+1, k): index arithmetic, never interpolation.
template <class Terminal, class Backup>
void fill_backward(ValueGrid& grid, Terminal&& terminal, Backup&& backup) {
  const int top = grid.terminal_level();
  {
    auto star = grid.v_star(top);
    auto tilde = grid.v_tilde(top);
    for (int k = 0; k <= top; ++k) {
      const CellValues cell = terminal(top, k);
      tilde[k] = cell.v_tilde;
      star[k] = cell.v_star;
    }
  }
  for (int n = top - 1; n >= grid.n_lo(); --n) {
    const std::span<const double> child =
        std::as_const(grid).v_star(n + 1);
    auto star = grid.v_star(n);
    auto tilde = grid.v_tilde(n);
    for (int k = 0; k <= n; ++k) {
      const CellValues cell =
          backup(n, k, lattice_p_hat(n, k), child[k + 1], child[k]);
      tilde[k] = cell.v_tilde;
      star[k] = cell.v_star;
    }
  }
}

// Linear interpolation of level n at p_hat. Queries within 1e-12 of a
// lattice abscissa snap to it and return the stored value exactly.
// Throws std::out_of_range for a missing level, std::invalid_argument for
// p_hat outside [0,1].
double interpolate_level(std::span<const double> level, double p_hat);

}  // namespace selective
