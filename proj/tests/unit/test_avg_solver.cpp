#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "fraction.hpp"
#include "selective/avg_solver.hpp"

using selective::testing::Fraction;

namespace {

// Under the average objective every cell accepts, so from (n, k) the number
// of successes j in the m = N + 1 - n remaining steps is beta-binomial with
// shapes (k, n - k), and the value is E[max{(k + j) / (N + 1) - c, 0}].
double beta_binomial_value(int n, int k, int horizon, double cost) {
  const int top = horizon + 1;
  if (k == 0) return 0.0;
  if (k == n) return std::max(1.0 - cost, 0.0);
  const int m = top - n;
  const double a = k;
  const double b = n - k;
  const double log_beta_ab = std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
  double total = 0.0;
  for (int j = 0; j <= m; ++j) {
    const double log_choose =
        std::lgamma(m + 1.0) - std::lgamma(j + 1.0) - std::lgamma(m - j + 1.0);
    const double log_beta = std::lgamma(a + j) + std::lgamma(b + m - j) -
                            std::lgamma(a + b + m);
    const double prob = std::exp(log_choose + log_beta - log_beta_ab);
    total += prob * std::max(static_cast<double>(k + j) / top - cost, 0.0);
  }
  return total;
}

}  // namespace

TEST_CASE("average backup hand value") {
  // c = 1/2, N = 2: level 3 holds max{k/3 - 1/2, 0}, so (3,2) -> 1/6 and
  // (3,1) -> 0; the backup at (2,1) averages them to 1/12.
  const Fraction expected =
      Fraction(1, 2) * (Fraction(2, 3) - Fraction(1, 2)) + Fraction(1, 2) * Fraction(0);
  REQUIRE(expected == Fraction(1, 12));
  const auto grid = selective::avg_solve(0.5, 2, 2);
  CHECK(std::abs(grid.value(2, 1) - expected.to_double()) <= 1e-15);
  CHECK(grid.value(2, 1) == grid.continue_value(2, 1));
}

TEST_CASE("average values equal the beta-binomial expectation") {
  for (double c : {0.3, 0.5, 0.8}) {
    const int horizon = 60;
    const auto grid = selective::avg_solve(c, horizon, 1);
    for (int n : {1, 2, 5, 30, 60}) {
      for (int k = 0; k <= n; ++k) {
        CHECK(std::abs(grid.value(n, k) - beta_binomial_value(n, k, horizon, c)) <=
              1e-12);
      }
    }
  }
}

TEST_CASE("shape checks pass on solved grids") {
  for (double c : {0.3, 0.5, 0.8}) {
    const auto report = selective::theorem2_check(selective::avg_solve(c, 200, 2));
    CHECK(report.pass());
    CHECK(report.levels.size() == 200);
    const auto summary = report.summary();
    CHECK(summary.pass);
    CHECK(summary.worst_slack >= -1e-9);
  }
}

TEST_CASE("a corrupted cell is reported at its level") {
  auto grid = selective::avg_solve(0.5, 50, 2);
  grid.v_star(20)[7] = -0.25;
  const auto report = selective::theorem2_check(grid);
  CHECK_FALSE(report.pass());
  const auto* worst = report.worst();
  REQUIRE(worst != nullptr);
  CHECK(worst->location.rfind("n=", 0) == 0);
  CHECK_FALSE(report.levels[20 - 2].pass);
  CHECK(report.levels[10 - 2].pass);
  CHECK_FALSE(report.summary().pass);
}

TEST_CASE("a convexity break is caught") {
  auto grid = selective::avg_solve(0.8, 40, 2);
  grid.v_star(30)[25] += 0.05;
  CHECK_FALSE(selective::theorem2_check(grid).pass());
}

TEST_CASE("average solver validation") {
  CHECK_THROWS_AS(selective::avg_solve(0.0, 10, 2), std::invalid_argument);
  CHECK_THROWS_AS(selective::avg_solve(0.5, 1, 2), std::invalid_argument);
  const auto grid = selective::avg_solve(0.5, 10, 2);
  CHECK_FALSE(grid.gamma().has_value());
  CHECK(grid.objective() == selective::Objective::kAverage);
}
