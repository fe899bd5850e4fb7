#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "selective/belief.hpp"
#include "selective/policy.hpp"
#include "selective/rng.hpp"
#include "selective/value_grid.hpp"

namespace selective {

// A fixed success probability; the learner still starts from `prior`.
struct FixedP {
  double p = 0.5;
  BeliefState prior{2, 1};
};

// p ~ Beta(s0, n0 - s0), one draw per replication; the learner's prior is
// the same beta.
struct FromPrior {
  BeliefState prior{2, 1};
};

struct Discounted {
  double gamma = 0.99;
  double epsilon_tail = 1e-6;
};

struct Average {
  long long steps = 100000;
};

struct EnvSpec {
  std::variant<FixedP, FromPrior> p_source = FromPrior{};
  double cost = 0.8;
  std::variant<Discounted, Average> objective = Discounted{};

  void validate() const;
  const BeliefState& learner_prior() const;
  Objective objective_kind() const;
};

// Smallest H with gamma^H <= eps * (1 - gamma); the omitted tail is then at
// most eps * (1 - c).
long long truncation_horizon(double gamma, double epsilon_tail);

// Number of arrivals a rollout under `env` serves at most.
long long rollout_length(const EnvSpec& env);

// One policy serving arrivals from a single Bernoulli(p) stream. Each arrival
// consumes two uniforms from the stream, acceptance first and outcome
// second, whatever the policy.
class PolicyRun {
 public:
  PolicyRun(PolicySpec spec, BeliefState prior, double p, double cost);

  // Serves one arrival and returns its reward t * (y - c).
  double step(ReplicationStream& stream);

  // A deterministic policy that rejected has frozen its belief state; every
  // later decision is the same rejection and every later reward is zero.
  bool frozen() const { return frozen_; }
  const BeliefState& belief() const { return belief_; }
  long long steps() const { return steps_; }
  double p() const { return p_; }

 private:
  PolicySpec spec_;
  BeliefState belief_;
  double p_;
  double cost_;
  long long steps_ = 0;
  bool frozen_ = false;
};

// Draws p for a replication (the first draw of the stream for FromPrior).
double draw_p(const EnvSpec& env, ReplicationStream& stream);

// One replication's return: the truncated discounted sum or the N-step
// average, using stream (seed, replication).
double rollout(const EnvSpec& env, const PolicySpec& spec, std::uint64_t seed,
               std::uint64_t replication = 0);

struct SimReport {
  PolicyInfo policy;
  Objective objective = Objective::kDiscounted;
  long long reps = 0;
  double mean = 0.0;
  double std_error = 0.0;
  long long horizon = 0;
  std::uint64_t seed = 0;
  bool degenerate = false;  // reps == 1: std_error reported as 0
  std::vector<std::pair<std::string, double>> env_params;
  std::vector<std::string> notes;
  std::vector<double> returns;  // filled only when requested
};

// Mean and standard error from per-replication returns, with pairwise
// summation so the result does not depend on evaluation order.
void summarize(std::span<const double> returns, SimReport& report);

double pairwise_sum(std::span<const double> values);

// Common random numbers: replication r uses stream (seed, r) for every
// policy, so all policies see the same p and the same uniforms.
std::vector<SimReport> run_batch(const EnvSpec& env,
                                 const std::vector<PolicySpec>& specs,
                                 long long reps, std::uint64_t seed,
                                 bool keep_returns = false);

}  // namespace selective
