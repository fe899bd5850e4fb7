#include <stdexcept>

#include "doctest.h"
#include "selective/belief.hpp"

using selective::BeliefState;
using selective::ProblemParams;

TEST_CASE("posterior mean and updates") {
  const BeliefState b(2, 1);
  CHECK(b.posterior_mean() == 0.5);
  CHECK(b.update(true, true) == BeliefState(3, 2));
  CHECK(b.update(true, false) == BeliefState(3, 1));
  CHECK(b.update(false, false) == b);
  CHECK(b.to_string() == "(2,1)");
}

TEST_CASE("success without acceptance is rejected") {
  CHECK_THROWS_AS(BeliefState(2, 1).update(false, true), std::invalid_argument);
}

TEST_CASE("belief construction bounds") {
  CHECK_THROWS_AS(BeliefState(0, 0), std::invalid_argument);
  CHECK_THROWS_AS(BeliefState(3, 4), std::invalid_argument);
  CHECK_THROWS_AS(BeliefState(3, -1), std::invalid_argument);
  CHECK_NOTHROW(BeliefState(1, 0));
  CHECK_NOTHROW(BeliefState(1, 1));
}

TEST_CASE("three transitions from (2,1) under pi = 0.6") {
  const auto t = selective::transitions(BeliefState(2, 1), 0.6, 0.8);
  CHECK(t[0].next == BeliefState(3, 2));
  CHECK(t[0].probability == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(t[0].reward == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(t[1].next == BeliefState(3, 1));
  CHECK(t[1].probability == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(t[1].reward == doctest::Approx(-0.8).epsilon(1e-15));
  CHECK(t[2].next == BeliefState(2, 1));
  CHECK(t[2].probability == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(t[2].reward == 0.0);
}

TEST_CASE("transition probabilities sum to one over a lattice sweep") {
  for (double pi : {0.0, 0.25, 0.5, 1.0}) {
    for (int n = 1; n <= 50; ++n) {
      for (int s = 0; s <= n; ++s) {
        const auto t = selective::transitions(BeliefState(n, s), pi, 0.5);
        double total = 0.0;
        for (const auto& branch : t) {
          CHECK(branch.probability >= 0.0);
          total += branch.probability;
        }
        CHECK(std::abs(total - 1.0) <= 1e-15);
      }
    }
  }
}

TEST_CASE("transition inputs are validated") {
  CHECK_THROWS_AS(selective::transitions(BeliefState(2, 1), 1.5, 0.8),
                  std::invalid_argument);
  CHECK_THROWS_AS(selective::transitions(BeliefState(2, 1), -0.1, 0.8),
                  std::invalid_argument);
}

TEST_CASE("problem parameter validation") {
  ProblemParams ok;
  CHECK_NOTHROW(ok.validate());

  ProblemParams bad_cost;
  bad_cost.cost = 1.2;
  CHECK_THROWS_AS(bad_cost.validate(), std::invalid_argument);
  bad_cost.cost = 0.0;
  CHECK_THROWS_AS(bad_cost.validate(), std::invalid_argument);

  ProblemParams bad_gamma;
  bad_gamma.gamma = 1.0;
  CHECK_THROWS_AS(bad_gamma.validate(), std::invalid_argument);

  // A degenerate prior (s0 = 0 or s0 = n0) is not a proper beta.
  ProblemParams bad_prior;
  bad_prior.prior = BeliefState(2, 0);
  CHECK_THROWS_AS(bad_prior.validate(), std::invalid_argument);
  bad_prior.prior = BeliefState(2, 2);
  CHECK_THROWS_AS(bad_prior.validate(), std::invalid_argument);
}
