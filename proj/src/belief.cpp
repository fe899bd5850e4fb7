#include "selective/belief.hpp"

#include <cmath>
#include <stdexcept>

namespace selective {

BeliefState::BeliefState(int n, int s) : n_(n), s_(s) {
  if (n < 1 || s < 0 || s > n) {
    throw std::invalid_argument("invalid belief state (n=" + std::to_string(n) +
                                ", s=" + std::to_string(s) +
                                "): need n >= 1 and 0 <= s <= n");
  }
}

BeliefState BeliefState::update(bool accepted, bool success) const {
  if (!accepted) {
    if (success) {
      throw std::invalid_argument(
          "success reported for a rejected individual; outcomes are "
          "unobserved under rejection");
    }
    return *this;
  }
  return BeliefState(n_ + 1, s_ + (success ? 1 : 0));
}

std::string BeliefState::to_string() const {
  return "(" + std::to_string(n_) + "," + std::to_string(s_) + ")";
}

std::array<Transition, 3> transitions(const BeliefState& b, double pi,
                                      double cost) {
  if (!(pi >= 0.0 && pi <= 1.0)) {
    throw std::invalid_argument("acceptance probability must lie in [0,1]");
  }
  const double p_hat = b.posterior_mean();
  return {Transition{b.update(true, true), pi * p_hat, 1.0 - cost},
          Transition{b.update(true, false), pi * (1.0 - p_hat), -cost},
          Transition{b, 1.0 - pi, 0.0}};
}

void validate_cost(double cost) {
  if (!(cost > 0.0 && cost < 1.0)) {
    throw std::invalid_argument("cost c must lie in (0,1), got " +
                                std::to_string(cost));
  }
}

void validate_gamma(double gamma) {
  if (!(gamma > 0.0 && gamma < 1.0)) {
    throw std::invalid_argument("discount gamma must lie in (0,1), got " +
                                std::to_string(gamma));
  }
}

void validate_prior(const BeliefState& prior) {
  if (prior.s() < 1 || prior.s() > prior.n() - 1) {
    throw std::invalid_argument("prior " + prior.to_string() +
                                " is not a proper beta prior: need "
                                "1 <= s0 <= n0 - 1");
  }
}

void ProblemParams::validate() const {
  validate_cost(cost);
  validate_gamma(gamma);
  validate_prior(prior);
}

}  // namespace selective
