#pragma once

#include <array>
#include <string>

namespace selective {

// Beta posterior over the unknown success probability, stored as
// (virtual + real observations, virtual + real successes).
class BeliefState {
 public:
  // Throws std::invalid_argument unless n >= 1 and 0 <= s <= n.
  BeliefState(int n, int s);

  int n() const { return n_; }
  int s() const { return s_; }

  // s / n.
  double posterior_mean() const {
    return static_cast<double>(s_) / static_cast<double>(n_);
  }

  // Outcomes are unobserved under rejection, so success without acceptance
  // is a contract violation (std::invalid_argument).
  BeliefState update(bool accepted, bool success) const;

  std::string to_string() const;

  friend bool operator==(const BeliefState&, const BeliefState&) = default;

 private:
  int n_;
  int s_;
};

inline double posterior_mean(const BeliefState& b) { return b.posterior_mean(); }

struct Transition {
  BeliefState next;
  double probability;
  double reward;
};

// The three branches out of b under acceptance probability pi:
// accept+success, accept+failure, reject (in that order).
std::array<Transition, 3> transitions(const BeliefState& b, double pi,
                                      double cost);

// Cost, discount and a proper integer beta prior (1 <= s0 <= n0 - 1).
struct ProblemParams {
  double cost = 0.8;
  double gamma = 0.99;
  BeliefState prior{2, 1};

  // Throws std::invalid_argument naming the offending field.
  void validate() const;
};

void validate_cost(double cost);
void validate_gamma(double gamma);
void validate_prior(const BeliefState& prior);

}  // namespace selective
