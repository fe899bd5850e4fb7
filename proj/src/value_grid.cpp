#include "selective/value_grid.hpp"

#include <cmath>
#include <stdexcept>

namespace selective {

std::string to_string(Objective objective) {
  return objective == Objective::kDiscounted ? "discounted" : "average";
}

ValueGrid::ValueGrid(Objective objective, double cost,
                     std::optional<double> gamma, int horizon, int n_lo)
    : objective_(objective),
      cost_(cost),
      gamma_(gamma),
      horizon_(horizon),
      n_lo_(n_lo) {
  if (n_lo < 1) throw std::invalid_argument("lowest level must be >= 1");
  if (horizon < n_lo) {
    throw std::invalid_argument("horizon N=" + std::to_string(horizon) +
                                " is below the lowest level " +
                                std::to_string(n_lo));
  }
  if ((objective == Objective::kDiscounted) != gamma.has_value()) {
    throw std::invalid_argument(
        "gamma must be given exactly for the discounted objective");
  }
  const std::size_t cells = offset(horizon + 2);
  v_star_.assign(cells, 0.0);
  v_tilde_.assign(cells, 0.0);
}

std::size_t ValueGrid::offset(int n) const {
  // sum_{m = n_lo}^{n - 1} (m + 1)
  const auto lo = static_cast<std::size_t>(n_lo_);
  const auto hi = static_cast<std::size_t>(n);
  return (hi * (hi + 1) - lo * (lo + 1)) / 2;
}

std::size_t ValueGrid::check_level(int n) const {
  if (!has_level(n)) {
    throw std::out_of_range("level n=" + std::to_string(n) +
                            " outside grid [" + std::to_string(n_lo_) + ", " +
                            std::to_string(horizon_ + 1) + "]");
  }
  return offset(n);
}

std::size_t ValueGrid::check_k(int n, int k) const {
  if (k < 0 || k > n) {
    throw std::out_of_range("lattice index k=" + std::to_string(k) +
                            " outside [0, " + std::to_string(n) + "]");
  }
  return static_cast<std::size_t>(k);
}

std::span<const double> ValueGrid::v_star(int n) const {
  return {v_star_.data() + check_level(n), static_cast<std::size_t>(n) + 1};
}

std::span<const double> ValueGrid::v_tilde(int n) const {
  return {v_tilde_.data() + check_level(n), static_cast<std::size_t>(n) + 1};
}

std::span<double> ValueGrid::v_star(int n) {
  return {v_star_.data() + check_level(n), static_cast<std::size_t>(n) + 1};
}

std::span<double> ValueGrid::v_tilde(int n) {
  return {v_tilde_.data() + check_level(n), static_cast<std::size_t>(n) + 1};
}

double interpolate_level(std::span<const double> level, double p_hat) {
  if (!(p_hat >= 0.0 && p_hat <= 1.0)) {
    throw std::invalid_argument("p_hat must lie in [0,1]");
  }
  const auto n = static_cast<int>(level.size()) - 1;
  if (n == 0) return level[0];
  const double x = p_hat * n;
  const double nearest = std::round(x);
  if (std::abs(x - nearest) <= 1e-12 * n) {
    return level[static_cast<std::size_t>(nearest)];
  }
  const auto k = static_cast<std::size_t>(std::floor(x));
  const double t = x - static_cast<double>(k);
  return level[k] + t * (level[k + 1] - level[k]);
}

}  // namespace selective
