#include "selective/policy.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "selective/dp_solver.hpp"

namespace selective {

long long explore_length(long long horizon, double beta) {
  const double raw = std::pow(static_cast<double>(horizon), beta);
  const double nearest = std::round(raw);
  if (std::abs(raw - nearest) <= 1e-9 * std::max(1.0, nearest)) {
    return static_cast<long long>(nearest);
  }
  return static_cast<long long>(std::ceil(raw));
}

PolicySpec PolicySpec::dp_optimal(std::shared_ptr<const ValueGrid> grid) {
  if (!grid) throw std::invalid_argument("dp_optimal needs a solved grid");
  if (grid->objective() != Objective::kDiscounted) {
    throw std::invalid_argument("dp_optimal needs a discounted grid");
  }
  PolicySpec spec(PolicyKind::kDpOptimal, grid->cost());
  spec.grid_ = std::move(grid);
  return spec;
}

PolicySpec PolicySpec::oracle(double cost, std::optional<double> true_p) {
  validate_cost(cost);
  PolicySpec spec(PolicyKind::kOracle, cost);
  if (true_p) spec = spec.with_true_p(*true_p);
  return spec;
}

PolicySpec PolicySpec::myopic(double cost) {
  validate_cost(cost);
  return PolicySpec(PolicyKind::kMyopic, cost);
}

PolicySpec PolicySpec::always_accept(double cost) {
  validate_cost(cost);
  return PolicySpec(PolicyKind::kAlwaysAccept, cost);
}

PolicySpec PolicySpec::constant_pi(double pi, double cost) {
  validate_cost(cost);
  if (!(pi > 0.0 && pi < 1.0)) {
    throw std::invalid_argument("constant_pi needs pi in (0,1)");
  }
  PolicySpec spec(PolicyKind::kConstantPi, cost);
  spec.pi_ = pi;
  return spec;
}

PolicySpec PolicySpec::two_phase(long long horizon, double beta, double cost) {
  validate_cost(cost);
  if (horizon < 1) throw std::invalid_argument("two_phase needs N >= 1");
  if (!(beta > 0.0 && beta < 1.0)) {
    throw std::invalid_argument("two_phase needs beta in (0,1)");
  }
  PolicySpec spec(PolicyKind::kTwoPhase, cost);
  spec.horizon_ = horizon;
  spec.beta_ = beta;
  spec.explore_length_ = selective::explore_length(horizon, beta);
  return spec;
}

bool PolicySpec::deterministic() const {
  return kind_ != PolicyKind::kConstantPi && kind_ != PolicyKind::kTwoPhase;
}

PolicySpec PolicySpec::with_true_p(double p) const {
  if (kind_ != PolicyKind::kOracle) return *this;
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument("oracle p must lie in [0,1]");
  }
  PolicySpec spec = *this;
  spec.true_p_ = p;
  return spec;
}

double PolicySpec::acceptance_probability(const BeliefState& b,
                                          long long step_index) const {
  const auto indicator = [](bool x) { return x ? 1.0 : 0.0; };
  switch (kind_) {
    case PolicyKind::kDpOptimal:
      if (b.n() > grid_->terminal_level()) {
        return indicator(b.posterior_mean() > cost_);
      }
      return indicator(policy_at(*grid_, b) == Decision::kAccept);
    case PolicyKind::kOracle:
      if (!true_p_) throw std::logic_error("oracle policy has no bound p");
      return indicator(*true_p_ > cost_);
    case PolicyKind::kMyopic:
      return indicator(b.posterior_mean() > cost_);
    case PolicyKind::kAlwaysAccept:
      return 1.0;
    case PolicyKind::kConstantPi:
      return pi_;
    case PolicyKind::kTwoPhase:
      if (step_index < explore_length_) return 1.0;
      return indicator(b.posterior_mean() > cost_);
  }
  return 0.0;
}

std::string format_number(double value) {
  char buf[32];
  const auto result = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, result.ptr);
}

PolicyInfo PolicySpec::describe() const {
  switch (kind_) {
    case PolicyKind::kDpOptimal:
      return {"dp_optimal",
              {{"c", cost_},
               {"gamma", *grid_->gamma()},
               {"N", static_cast<double>(grid_->horizon())}}};
    case PolicyKind::kOracle:
      if (true_p_) return {"oracle", {{"c", cost_}, {"p", *true_p_}}};
      return {"oracle", {{"c", cost_}}};
    case PolicyKind::kMyopic:
      return {"myopic", {{"c", cost_}}};
    case PolicyKind::kAlwaysAccept:
      return {"always_accept", {{"c", cost_}}};
    case PolicyKind::kConstantPi:
      return {"constant_pi(" + format_number(pi_) + ")",
              {{"c", cost_}, {"pi", pi_}}};
    case PolicyKind::kTwoPhase:
      return {"two_phase(" + std::to_string(horizon_) + "," +
                  format_number(beta_) + ")",
              {{"c", cost_},
               {"N", static_cast<double>(horizon_)},
               {"beta", beta_},
               {"explore_length", static_cast<double>(explore_length_)}}};
  }
  return {};
}

namespace {

double parse_double(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) {
    throw std::invalid_argument("bad " + what + " '" + text + "'");
  }
  return value;
}

long long parse_integer(const std::string& text, const std::string& what) {
  long long value = 0;
  const auto result =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (result.ec != std::errc() || result.ptr != text.data() + text.size()) {
    throw std::invalid_argument("bad " + what + " '" + text + "'");
  }
  return value;
}

}  // namespace

ParsedPolicy parse_policy(const std::string& text) {
  if (text == "dp") return {PolicyKind::kDpOptimal};
  if (text == "oracle") return {PolicyKind::kOracle};
  if (text == "myopic") return {PolicyKind::kMyopic};
  if (text == "always") return {PolicyKind::kAlwaysAccept};
  if (text.rfind("const:", 0) == 0) {
    ParsedPolicy parsed{PolicyKind::kConstantPi};
    parsed.pi = parse_double(text.substr(6), "constant pi");
    return parsed;
  }
  if (text.rfind("twophase:", 0) == 0) {
    const std::string rest = text.substr(9);
    const auto colon = rest.find(':');
    if (colon == std::string::npos) {
      throw std::invalid_argument("two-phase policy must be twophase:<N>:<beta>");
    }
    ParsedPolicy parsed{PolicyKind::kTwoPhase};
    parsed.horizon = parse_integer(rest.substr(0, colon), "two-phase N");
    parsed.beta = parse_double(rest.substr(colon + 1), "two-phase beta");
    return parsed;
  }
  throw std::invalid_argument(
      "unknown policy '" + text +
      "' (expected dp, oracle, myopic, always, const:<pi>, twophase:<N>:<beta>)");
}

PolicySpec make_policy(const ParsedPolicy& parsed, double cost,
                       std::shared_ptr<const ValueGrid> grid,
                       std::optional<double> true_p) {
  switch (parsed.kind) {
    case PolicyKind::kDpOptimal:
      return PolicySpec::dp_optimal(std::move(grid));
    case PolicyKind::kOracle:
      return PolicySpec::oracle(cost, true_p);
    case PolicyKind::kMyopic:
      return PolicySpec::myopic(cost);
    case PolicyKind::kAlwaysAccept:
      return PolicySpec::always_accept(cost);
    case PolicyKind::kConstantPi:
      return PolicySpec::constant_pi(parsed.pi, cost);
    case PolicyKind::kTwoPhase:
      return PolicySpec::two_phase(parsed.horizon, parsed.beta, cost);
  }
  throw std::invalid_argument("unhandled policy kind");
}

}  // namespace selective
