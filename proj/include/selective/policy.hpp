#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "selective/belief.hpp"
#include "selective/value_grid.hpp"

namespace selective {

enum class PolicyKind {
  kDpOptimal,
  kOracle,
  kMyopic,
  kAlwaysAccept,
  kConstantPi,
  kTwoPhase,
};

struct PolicyInfo {
  std::string name;
  std::vector<std::pair<std::string, double>> params;
};

// A named acceptance rule: a pure function of (belief state, step index)
// returning an acceptance probability in [0,1]. Randomness is realized by
// the caller.
class PolicySpec {
 public:
  // Accept iff the grid's continue-value is positive. Beyond the terminal
  // level the terminal rule 1(p_hat > c) applies.
  static PolicySpec dp_optimal(std::shared_ptr<const ValueGrid> grid);
  // 1(p > c) with the true p known. Without p the caller must bind one
  // (see with_true_p) before querying.
  static PolicySpec oracle(double cost, std::optional<double> true_p = {});
  static PolicySpec myopic(double cost);
  static PolicySpec always_accept(double cost);
  static PolicySpec constant_pi(double pi, double cost);
  // Accept-always for ceil(horizon^beta) steps, then 1(p_hat > c).
  static PolicySpec two_phase(long long horizon, double beta, double cost);

  PolicyKind kind() const { return kind_; }
  double cost() const { return cost_; }
  const std::shared_ptr<const ValueGrid>& grid() const { return grid_; }
  std::optional<double> true_p() const { return true_p_; }
  double pi() const { return pi_; }
  long long horizon() const { return horizon_; }
  double beta() const { return beta_; }
  long long explore_length() const { return explore_length_; }

  // True when every returned probability is 0 or 1.
  bool deterministic() const;

  PolicySpec with_true_p(double p) const;

  // Throws std::out_of_range for a dp_optimal query below the grid, and
  // std::logic_error for an oracle with no bound p.
  double acceptance_probability(const BeliefState& b,
                                long long step_index) const;

  PolicyInfo describe() const;

 private:
  PolicySpec(PolicyKind kind, double cost) : kind_(kind), cost_(cost) {}

  PolicyKind kind_;
  double cost_;
  std::shared_ptr<const ValueGrid> grid_;
  std::optional<double> true_p_;
  double pi_ = 1.0;
  long long horizon_ = 0;
  double beta_ = 0.5;
  long long explore_length_ = 0;
};

inline double acceptance_probability(const PolicySpec& spec,
                                     const BeliefState& b,
                                     long long step_index) {
  return spec.acceptance_probability(b, step_index);
}

inline PolicyInfo describe(const PolicySpec& spec) { return spec.describe(); }

// ceil(horizon^beta), guarding against pow() landing a hair above an
// integer.
long long explore_length(long long horizon, double beta);

// Command-line policy strings: dp, oracle, myopic, always, const:<pi>,
// twophase:<N>:<beta>. dp is not constructible from a string alone; parse
// returns the kind and callers supply the grid. Throws std::invalid_argument.
struct ParsedPolicy {
  PolicyKind kind;
  double pi = 0.0;
  long long horizon = 0;
  double beta = 0.5;
};
ParsedPolicy parse_policy(const std::string& text);

// Builds a spec from a parsed string. dp_optimal needs `grid`.
PolicySpec make_policy(const ParsedPolicy& parsed, double cost,
                       std::shared_ptr<const ValueGrid> grid = nullptr,
                       std::optional<double> true_p = {});

// Formats a double the way policy names echo parameters: shortest form that
// round-trips, e.g. 0.3 -> "0.3".
std::string format_number(double value);

}  // namespace selective
