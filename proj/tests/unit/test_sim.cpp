#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "selective/rng.hpp"
#include "selective/sim.hpp"

using selective::Average;
using selective::BeliefState;
using selective::Discounted;
using selective::EnvSpec;
using selective::FixedP;
using selective::FromPrior;
using selective::PolicySpec;
using selective::ReplicationStream;

TEST_CASE("truncation horizon") {
  CHECK(selective::truncation_horizon(0.95, 1e-6) == 328);
  CHECK(selective::truncation_horizon(0.99, 1e-6) == 1833);
  for (double gamma : {0.5, 0.9, 0.95, 0.99, 0.999}) {
    for (double eps : {1e-3, 1e-6, 1e-9}) {
      const long long h = selective::truncation_horizon(gamma, eps);
      CHECK(std::pow(gamma, h) <= eps * (1.0 - gamma) * (1.0 + 1e-12));
      CHECK(std::pow(gamma, h - 1) > eps * (1.0 - gamma));
    }
  }
}

TEST_CASE("streams are reproducible and distinct") {
  ReplicationStream a(5, 3);
  ReplicationStream b(5, 3);
  ReplicationStream c(5, 4);
  ReplicationStream d(5, 3, 1);
  for (int i = 0; i < 100; ++i) {
    const double ua = a.uniform();
    CHECK(ua == b.uniform());
    CHECK(ua >= 0.0);
    CHECK(ua < 1.0);
    CHECK(ua != c.uniform());
    CHECK(ua != d.uniform());
  }
  ReplicationStream e(9, 0);
  for (int i = 0; i < 1000; ++i) {
    const double u = e.uniform_open_zero();
    CHECK(u > 0.0);
    CHECK(u <= 1.0);
  }
}

TEST_CASE("beta draws have the right moments") {
  ReplicationStream stream(123, 0);
  const int draws = 200000;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (int i = 0; i < draws; ++i) {
    const double x = stream.beta(2, 3);
    CHECK(x > 0.0);
    CHECK(x < 1.0);
    sum += x;
    sum_sq += x * x;
  }
  const double mean = sum / draws;
  const double var = sum_sq / draws - mean * mean;
  // Beta(2,3): mean 0.4, variance 0.04.
  CHECK(std::abs(mean - 0.4) < 4.0 * std::sqrt(0.04 / draws));
  CHECK(std::abs(var - 0.04) < 2e-3);
  CHECK_THROWS_AS(stream.beta(0, 3), std::invalid_argument);
}

TEST_CASE("rollout replays the documented stream layout") {
  // Always-accept on a fixed p: arrival i reads (u_accept, u_outcome) and
  // succeeds iff u_outcome < p. Rebuild the return from the raw stream.
  EnvSpec env;
  env.p_source = FixedP{0.7, BeliefState(2, 1)};
  env.cost = 0.5;
  env.objective = Discounted{0.9, 1e-6};
  const long long h = selective::rollout_length(env);
  for (std::uint64_t rep : {0u, 1u, 99u}) {
    ReplicationStream stream(42, rep);
    double expected = 0.0;
    double discount = 1.0;
    for (long long i = 0; i < h; ++i) {
      stream.uniform();
      const bool success = stream.uniform() < 0.7;
      expected += discount * ((success ? 1.0 : 0.0) - 0.5);
      discount *= 0.9;
    }
    CHECK(selective::rollout(env, PolicySpec::always_accept(0.5), 42, rep) == expected);
  }
}

TEST_CASE("rejecting deterministic policies freeze with zero return") {
  EnvSpec env;
  env.p_source = FixedP{0.5, BeliefState(2, 1)};
  env.cost = 0.8;
  env.objective = Discounted{0.99, 1e-6};
  CHECK(selective::rollout(env, PolicySpec::oracle(0.8), 1, 0) == 0.0);
  CHECK(selective::rollout(env, PolicySpec::myopic(0.8), 1, 0) == 0.0);

  selective::PolicyRun run(PolicySpec::myopic(0.8), BeliefState(2, 1), 0.5, 0.8);
  ReplicationStream stream(1, 0);
  CHECK(run.step(stream) == 0.0);
  CHECK(run.frozen());
  CHECK(run.belief() == BeliefState(2, 1));
}

TEST_CASE("known-p oracle matches its closed form") {
  // (p - c) / (1 - gamma) = 0.1 / 0.05 = 2.
  EnvSpec env;
  env.p_source = FixedP{0.9, BeliefState(2, 1)};
  env.cost = 0.8;
  env.objective = Discounted{0.95, 1e-6};
  const auto reports =
      selective::run_batch(env, {PolicySpec::oracle(0.8)}, 20000, 7);
  REQUIRE(reports.size() == 1);
  const auto& r = reports[0];
  CHECK(r.horizon == 328);
  CHECK(std::abs(r.mean - 2.0) <= 3.0 * r.std_error);
  CHECK(r.policy.name == "oracle");
}

TEST_CASE("always-accept from the prior earns the prior margin") {
  // The posterior mean is a martingale, so the expected return is
  // (s0/n0 - c)(1 - gamma^H) / (1 - gamma).
  EnvSpec env;
  env.p_source = FromPrior{BeliefState(2, 1)};
  env.cost = 0.3;
  env.objective = Discounted{0.9, 1e-6};
  const auto r =
      selective::run_batch(env, {PolicySpec::always_accept(0.3)}, 20000, 5)[0];
  const double expected = 0.2 * (1.0 - std::pow(0.9, r.horizon)) / 0.1;
  CHECK(std::abs(r.mean - expected) <= 4.0 * r.std_error);
}

TEST_CASE("average objective") {
  EnvSpec env;
  env.p_source = FixedP{0.6, BeliefState(2, 1)};
  env.cost = 0.5;
  env.objective = Average{1000};
  const auto r =
      selective::run_batch(env, {PolicySpec::always_accept(0.5)}, 2000, 3)[0];
  CHECK(r.horizon == 1000);
  CHECK(r.objective == selective::Objective::kAverage);
  CHECK(std::abs(r.mean - 0.1) <= 4.0 * r.std_error);
}

TEST_CASE("common random numbers across policies") {
  EnvSpec env;
  env.p_source = FromPrior{BeliefState(2, 1)};
  env.cost = 0.4;
  env.objective = Discounted{0.9, 1e-6};
  const std::vector<PolicySpec> specs{PolicySpec::always_accept(0.4),
                                      PolicySpec::always_accept(0.4),
                                      PolicySpec::constant_pi(0.5, 0.4)};
  const auto reports = selective::run_batch(env, specs, 50, 11, true);
  REQUIRE(reports.size() == 3);
  CHECK(reports[0].returns == reports[1].returns);
  CHECK(reports[0].returns != reports[2].returns);
  for (std::size_t r = 0; r < 50; ++r) {
    CHECK(reports[0].returns[r] ==
          selective::rollout(env, specs[0], 11, static_cast<std::uint64_t>(r)));
  }
}

TEST_CASE("summaries") {
  std::vector<double> values(1000);
  std::iota(values.begin(), values.end(), 1.0);
  CHECK(selective::pairwise_sum(values) == 500500.0);

  selective::SimReport report;
  const std::vector<double> data{1.0, 2.0, 3.0, 4.0};
  selective::summarize(data, report);
  CHECK(report.mean == 2.5);
  // Sample variance 5/3, standard error sqrt(5/12).
  CHECK(report.std_error == doctest::Approx(std::sqrt(5.0 / 12.0)).epsilon(1e-14));
  CHECK_FALSE(report.degenerate);

  const std::vector<double> one{3.5};
  selective::summarize(one, report);
  CHECK(report.mean == 3.5);
  CHECK(report.std_error == 0.0);
  CHECK(report.degenerate);
}

TEST_CASE("single replication batches are flagged") {
  EnvSpec env;
  env.p_source = FixedP{0.9, BeliefState(2, 1)};
  env.cost = 0.8;
  env.objective = Discounted{0.95, 1e-6};
  const auto r = selective::run_batch(env, {PolicySpec::oracle(0.8)}, 1, 1)[0];
  CHECK(r.reps == 1);
  CHECK(r.std_error == 0.0);
  CHECK(r.degenerate);
  CHECK_FALSE(r.notes.empty());
}

TEST_CASE("environment validation") {
  EnvSpec env;
  env.cost = 1.2;
  CHECK_THROWS_AS(env.validate(), std::invalid_argument);
  env.cost = 0.8;
  env.p_source = FixedP{1.5, BeliefState(2, 1)};
  CHECK_THROWS_AS(env.validate(), std::invalid_argument);
  env.p_source = FromPrior{BeliefState(2, 2)};
  CHECK_THROWS_AS(env.validate(), std::invalid_argument);
  env.p_source = FromPrior{};
  env.objective = Average{0};
  CHECK_THROWS_AS(env.validate(), std::invalid_argument);
  env.objective = Discounted{0.99, 0.0};
  CHECK_THROWS_AS(env.validate(), std::invalid_argument);
  env.objective = Discounted{};
  CHECK_THROWS_AS(selective::run_batch(env, {PolicySpec::myopic(0.8)}, 0, 1),
                  std::invalid_argument);
}
