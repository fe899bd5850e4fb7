#include "selective/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <utility>

#include "selective/rng.hpp"

namespace selective {

// ---------------------------------------------------------------------------
// Chord lemma
// ---------------------------------------------------------------------------

double ConvexFunction::operator()(double x) const {
  switch (family) {
    case ConvexFamily::kAbs:
      return std::abs(x - a);
    case ConvexFamily::kSquare:
      return (x - a) * (x - a);
    case ConvexFamily::kExp:
      return std::exp(x);
    case ConvexFamily::kHinge:
      return std::max(x - a, 0.0) / (1.0 - gamma);
  }
  return 0.0;
}

std::string ConvexFunction::name() const {
  switch (family) {
    case ConvexFamily::kAbs:
      return "abs";
    case ConvexFamily::kSquare:
      return "square";
    case ConvexFamily::kExp:
      return "exp";
    case ConvexFamily::kHinge:
      return "hinge";
  }
  return "?";
}

double chord_mixture(const ConvexFunction& f, double x, double alpha,
                     double delta) {
  return alpha * f(x + (1.0 - alpha) * delta) +
         (1.0 - alpha) * f(x - alpha * delta);
}

CheckResult lemma1_check(long long samples, std::uint64_t seed, double tol) {
  CheckResult result{"lemma1", true, 0.0, "", 0, 0};
  ReplicationStream stream(seed, 0);
  bool first = true;
  for (long long i = 0; i < samples; ++i) {
    ConvexFunction f;
    f.family = static_cast<ConvexFamily>(
        std::min(3, static_cast<int>(stream.uniform() * 4.0)));
    f.a = -1.0 + 2.0 * stream.uniform();
    f.gamma = 0.5 + 0.49 * stream.uniform();
    const double x = -2.0 + 4.0 * stream.uniform();
    const double alpha = stream.uniform();
    double d1 = 2.0 * stream.uniform();
    double d2 = 2.0 * stream.uniform();
    if (d1 > d2) std::swap(d1, d2);

    const double slack =
        chord_mixture(f, x, alpha, d2) - chord_mixture(f, x, alpha, d1);
    ++result.evaluations;
    if (slack < -tol) ++result.violations;
    if (first || slack < result.worst_slack) {
      first = false;
      result.worst_slack = slack;
      result.location = f.name() + " a=" + format_number(f.a) +
                        " x=" + format_number(x) +
                        " alpha=" + format_number(alpha) +
                        " d1=" + format_number(d1) + " d2=" + format_number(d2);
    }
  }
  result.pass = result.violations == 0;
  return result;
}

// ---------------------------------------------------------------------------
// Grid shape checks
// ---------------------------------------------------------------------------

LevelReport prop2_check(const ValueGrid& grid, double tol) {
  LevelReport report{"prop2", {}};
  for (int n = grid.n_lo(); n <= grid.terminal_level(); ++n) {
    const auto v = grid.v_star(n);
    SlackTracker tracker;
    for (int k = 0; k < n; ++k) {
      tracker.observe(v[k + 1] - v[k], n, k);
      if (k >= 1) tracker.observe(v[k + 1] - 2.0 * v[k] + v[k - 1], n, k);
    }
    report.levels.push_back(
        {n, tracker.slack >= -tol, tracker.slack, tracker.location});
  }
  return report;
}

CheckResult interval_structure_check(const ValueGrid& grid) {
  CheckResult result{"interval_structure", true, 0.0, "", 0, 0};
  for (int n = grid.n_lo(); n <= grid.terminal_level(); ++n) {
    const auto tilde = grid.v_tilde(n);
    bool accepted = false;
    for (int k = 0; k <= n; ++k) {
      const bool accept = tilde[k] > 0.0;
      if (accepted && !accept) {
        ++result.violations;
        if (result.location.empty()) {
          result.location = "n=" + std::to_string(n) + ",k=" + std::to_string(k);
          result.worst_slack = tilde[k];
        }
      }
      accepted = accepted || accept;
    }
    ++result.evaluations;
  }
  result.pass = result.violations == 0;
  return result;
}

CheckResult frontier_monotone_check(const FrontierTable& table, double cost) {
  CheckResult result{"frontier_monotone", true, 0.0, "", 0, 0};
  double running_lower = -std::numeric_limits<double>::infinity();
  double worst = std::numeric_limits<double>::infinity();
  std::string worst_at;
  long long interp_steps_down = 0;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    running_lower = std::max(running_lower, row.lower_bound());
    double slack = row.upper_bound() - running_lower;
    // The terminal threshold sits exactly at c.
    if (row.lower_bound() != cost) slack = std::min(slack, cost - row.lower_bound());
    ++result.evaluations;
    if (!(slack > 0.0)) ++result.violations;
    if (slack < worst) {
      worst = slack;
      worst_at = "n=" + std::to_string(row.n);
    }
    if (i + 1 < table.rows.size() &&
        table.rows[i + 1].c_interp < row.c_interp) {
      ++interp_steps_down;
    }
  }
  result.worst_slack = std::isfinite(worst) ? worst : 0.0;
  result.location = worst_at + " (c_interp steps down " +
                    std::to_string(interp_steps_down) + "x)";
  result.violations += static_cast<long long>(table.violations.size());
  result.pass = result.violations == 0;
  return result;
}

// ---------------------------------------------------------------------------
// Uniform grid
// ---------------------------------------------------------------------------

const std::vector<double>& UniformGrid::level(int n) const {
  if (n < n_lo || n > horizon + 1) {
    throw std::out_of_range("uniform grid has no level " + std::to_string(n));
  }
  return levels[static_cast<std::size_t>(n - n_lo)];
}

UniformGrid uniform_grid_solve(const ProblemParams& params, int horizon,
                               int resolution, int n_lo,
                               const std::function<double(double)>& terminal) {
  validate_cost(params.cost);
  validate_gamma(params.gamma);
  if (resolution < 100) {
    throw std::invalid_argument("uniform grid resolution M must be >= 100");
  }
  if (n_lo < 1 || horizon < n_lo) {
    throw std::invalid_argument("need 1 <= n_lo <= N");
  }
  const double c = params.cost;
  const double gamma = params.gamma;
  UniformGrid grid;
  grid.resolution = resolution;
  grid.n_lo = n_lo;
  grid.horizon = horizon;
  grid.levels.assign(static_cast<std::size_t>(horizon + 2 - n_lo),
                     std::vector<double>(static_cast<std::size_t>(resolution) + 1));

  auto& top = grid.levels.back();
  for (int j = 0; j <= resolution; ++j) {
    const double p = grid.p_at(j);
    top[j] = terminal ? terminal(p) : terminal_value(p, c, gamma);
  }
  for (int n = horizon; n >= n_lo; --n) {
    const auto& child = grid.levels[static_cast<std::size_t>(n + 1 - n_lo)];
    auto& level = grid.levels[static_cast<std::size_t>(n - n_lo)];
    const double scale = static_cast<double>(n) / static_cast<double>(n + 1);
    const double step = 1.0 / static_cast<double>(n + 1);
    for (int j = 0; j <= resolution; ++j) {
      const double p = grid.p_at(j);
      const double lo_at = scale * p;
      const double hi_at = std::min(1.0, lo_at + step);
      level[j] = backup(p, interpolate_level(child, hi_at),
                        interpolate_level(child, lo_at), c, gamma)
                     .v_star;
    }
  }
  return grid;
}

double uniform_lattice_disagreement(const UniformGrid& uniform,
                                    const ValueGrid& lattice) {
  if (uniform.horizon != lattice.horizon()) {
    throw std::invalid_argument("grids solved for different horizons");
  }
  double worst = 0.0;
  const long long m = uniform.resolution;
  const int lo = std::max(uniform.n_lo, lattice.n_lo());
  const int hi = lattice.terminal_level();
  for (int n = lo; n <= hi; ++n) {
    const auto exact = lattice.v_star(n);
    const auto& approx = uniform.level(n);
    for (int k = 0; k <= n; ++k) {
      if ((k * m) % n != 0) continue;
      const auto j = static_cast<std::size_t>(k * m / n);
      worst = std::max(worst, std::abs(approx[j] - exact[k]));
    }
  }
  return worst;
}

double sup_gap_to_terminal(const UniformGrid& uniform, int n) {
  const auto& level = uniform.level(n);
  const auto& terminal = uniform.level(uniform.horizon + 1);
  double gap = 0.0;
  for (std::size_t j = 0; j < level.size(); ++j) {
    gap = std::max(gap, level[j] - terminal[j]);
  }
  return gap;
}

bool Prop3Report::pass() const {
  return uniform_monotone.pass() && frontier.pass &&
         (!gap_order || gap_order->pass);
}

std::vector<CheckResult> Prop3Report::results() const {
  std::vector<CheckResult> out{uniform_monotone.summary(), frontier};
  if (gap_order) out.push_back(*gap_order);
  return out;
}

Prop3Report prop3_check(const UniformGrid& uniform, const FrontierTable& table,
                        double cost, double tol) {
  Prop3Report report;
  report.uniform_monotone.name = "prop3_uniform";
  for (int n = uniform.n_lo; n <= uniform.horizon; ++n) {
    const auto& v = uniform.level(n);
    const auto& next = uniform.level(n + 1);
    SlackTracker tracker;
    for (std::size_t j = 0; j < v.size(); ++j) {
      tracker.observe(v[j] - next[j], n, static_cast<int>(j));
    }
    report.uniform_monotone.levels.push_back(
        {n, tracker.slack >= -tol, tracker.slack, tracker.location});
  }
  report.frontier = frontier_monotone_check(table, cost);
  report.frontier.name = "prop3_frontier";

  if (uniform.n_lo <= 10 && uniform.horizon >= 100) {
    const double gap10 = sup_gap_to_terminal(uniform, 10);
    const double gap100 = sup_gap_to_terminal(uniform, 100);
    CheckResult gap{"prop3_gap_order", gap100 < gap10, gap10 - gap100,
                    "gap(n=10)=" + format_number(gap10) +
                        " gap(n=100)=" + format_number(gap100),
                    1, gap100 < gap10 ? 0 : 1};
    report.gap_order = gap;
  }
  return report;
}

// ---------------------------------------------------------------------------
// Expectimax
// ---------------------------------------------------------------------------

namespace {

class Expectimax {
 public:
  Expectimax(int tail_level, double cost, double gamma, TailValue tail)
      : tail_level_(tail_level), cost_(cost), gamma_(gamma), tail_(tail) {}

  double value(int n, int s) {
    const auto key = std::make_pair(n, s);
    if (const auto it = memo_.find(key); it != memo_.end()) return it->second;
    const double p_hat = static_cast<double>(s) / static_cast<double>(n);
    double result;
    if (n == tail_level_) {
      result = tail(p_hat);
    } else {
      const double hi = value(n + 1, s + 1);
      const double lo = value(n + 1, s);
      double future = p_hat * hi;
      future += (1.0 - p_hat) * lo;
      const double cont = (p_hat - cost_) + gamma_ * future;
      result = cont > 0.0 ? cont : 0.0;
    }
    memo_.emplace(key, result);
    return result;
  }

 private:
  double tail(double p_hat) const {
    switch (tail_) {
      case TailValue::kInfiniteSample:
        return (p_hat - cost_ > 0.0 ? p_hat - cost_ : 0.0) / (1.0 - gamma_);
      case TailValue::kZero:
        return 0.0;
      case TailValue::kMaximum:
        return (1.0 - cost_) / (1.0 - gamma_);
    }
    return 0.0;
  }

  int tail_level_;
  double cost_;
  double gamma_;
  TailValue tail_;
  std::map<std::pair<int, int>, double> memo_;
};

}  // namespace

double expectimax_oracle(const BeliefState& b, int depth, double cost,
                         double gamma, TailValue tail) {
  validate_cost(cost);
  validate_gamma(gamma);
  if (depth < 0 || depth > kMaxOracleDepth) {
    throw std::invalid_argument("expectimax depth " + std::to_string(depth) +
                                " outside [0, " +
                                std::to_string(kMaxOracleDepth) + "]");
  }
  Expectimax search(b.n() + depth, cost, gamma, tail);
  return search.value(b.n(), b.s());
}

// ---------------------------------------------------------------------------
// Fixed-policy evaluation
// ---------------------------------------------------------------------------

PolicyTable optimal_policy_table(const ValueGrid& grid) {
  return [&grid](int n, int k) {
    return grid.continue_value(n, k) > 0.0 ? 1.0 : 0.0;
  };
}

PolicyTable constant_table(double pi) {
  return [pi](int, int) { return pi; };
}

PolicyTable table_from_policy(const PolicySpec& spec) {
  return [spec](int n, int k) {
    return spec.acceptance_probability(BeliefState(n, k), 0);
  };
}

ValueGrid policy_value_grid(const PolicyTable& table,
                            const ProblemParams& params, int horizon,
                            int n_lo) {
  validate_cost(params.cost);
  validate_gamma(params.gamma);
  const double c = params.cost;
  const double gamma = params.gamma;
  const auto checked_pi = [&](int n, int k) {
    const double pi = table(n, k);
    if (!(pi >= 0.0 && pi <= 1.0)) {
      throw std::invalid_argument("policy table value outside [0,1] at n=" +
                                  std::to_string(n) + ",k=" + std::to_string(k));
    }
    return pi;
  };
  ValueGrid grid(Objective::kDiscounted, c, gamma, horizon, n_lo);
  fill_backward(
      grid,
      [&](int n, int k) {
        const double p_hat = lattice_p_hat(n, k);
        const double pi = checked_pi(n, k);
        return CellValues{(p_hat - c) / (1.0 - gamma),
                          pi * terminal_value(p_hat, c, gamma)};
      },
      [&](int n, int k, double p_hat, double hi, double lo) {
        const double pi = checked_pi(n, k);
        double future = p_hat * hi;
        future += (1.0 - p_hat) * lo;
        const double bracket = (p_hat - c) + gamma * future;
        return CellValues{bracket, pi / (1.0 - gamma + gamma * pi) * bracket};
      });
  return grid;
}

double max_excess(const ValueGrid& a, const ValueGrid& b) {
  if (a.n_lo() != b.n_lo() || a.horizon() != b.horizon()) {
    throw std::invalid_argument("grids cover different levels");
  }
  double worst = -std::numeric_limits<double>::infinity();
  for (int n = a.n_lo(); n <= a.terminal_level(); ++n) {
    const auto va = a.v_star(n);
    const auto vb = b.v_star(n);
    for (int k = 0; k <= n; ++k) worst = std::max(worst, vb[k] - va[k]);
  }
  return worst;
}

}  // namespace selective

namespace selective {

std::vector<CheckResult> oracle_equivalence_check(double cost, double gamma,
                                                  int horizon, int states,
                                                  std::uint64_t seed,
                                                  int max_depth) {
  const int n_lo = std::max(1, horizon + 1 - max_depth);
  const ValueGrid grid =
      solve(ProblemParams{cost, gamma, BeliefState(2, 1)}, horizon, n_lo);
  ReplicationStream stream(seed, 0);

  CheckResult exact{"oracle_exact", true, 0.0, "", 0, 0};
  CheckResult bracket{"oracle_bracket", true, 0.0, "", 0, 0};
  bool first_bracket = true;
  for (int i = 0; i < states; ++i) {
    const int span = horizon + 1 - n_lo;
    const int n = n_lo + std::min(span - 1, static_cast<int>(stream.uniform() * span));
    const int s = std::min(n, static_cast<int>(stream.uniform() * (n + 1)));
    const int depth = horizon + 1 - n;
    const BeliefState b(n, s);
    const double top_down = expectimax_oracle(b, depth, cost, gamma);
    const double bottom_up = grid.value(n, s);
    const std::string where = "n=" + std::to_string(n) + ",s=" + std::to_string(s);

    ++exact.evaluations;
    if (top_down != bottom_up) {
      ++exact.violations;
      const double diff = -std::abs(top_down - bottom_up);
      if (diff < exact.worst_slack) {
        exact.worst_slack = diff;
        exact.location = where;
      }
    }

    const double low = expectimax_oracle(b, depth, cost, gamma, TailValue::kZero);
    const double high =
        expectimax_oracle(b, depth, cost, gamma, TailValue::kMaximum);
    const double slack = std::min(top_down - low, high - top_down);
    ++bracket.evaluations;
    if (slack < 0.0) ++bracket.violations;
    if (first_bracket || slack < bracket.worst_slack) {
      first_bracket = false;
      bracket.worst_slack = slack;
      bracket.location = where;
    }
  }
  exact.pass = exact.violations == 0;
  if (exact.location.empty()) {
    exact.location = "exact=" + std::to_string(exact.evaluations - exact.violations) +
                     "/" + std::to_string(exact.evaluations);
  }
  bracket.pass = bracket.violations == 0;
  return {exact, bracket};
}

std::vector<CheckResult> eq6_check(const ProblemParams& params, int horizon,
                                   int n_lo, double exact_tol,
                                   double order_tol) {
  const ValueGrid optimal = solve(params, horizon, n_lo);
  const ValueGrid replay = policy_value_grid(optimal_policy_table(optimal),
                                             params, horizon, n_lo);
  const ValueGrid always =
      policy_value_grid(constant_table(1.0), params, horizon, n_lo);

  const double gap =
      std::max(max_excess(optimal, replay), max_excess(replay, optimal));
  CheckResult replay_check{"eq6_optimal_replay", gap <= exact_tol, -gap,
                           "max |V_pi - V*|", 1, gap <= exact_tol ? 0 : 1};
  const double excess = max_excess(optimal, always);
  CheckResult order_check{"eq6_always_accept_le_optimal", excess <= order_tol,
                          -excess, "max (V_always - V*)", 1,
                          excess <= order_tol ? 0 : 1};
  return {replay_check, order_check};
}

}  // namespace selective
