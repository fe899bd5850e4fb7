#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "selective/belief.hpp"
#include "selective/sim.hpp"
#include "selective/value_grid.hpp"

namespace selective {

struct GroupContext {
  std::string label;
  double weight = 0.0;
  BeliefState prior{2, 1};
  std::optional<double> true_p;  // otherwise drawn from the prior
  std::string policy = "dp";     // policy string, see parse_policy
};

// Discrete contexts (x, a), each an independent homogeneous problem with a
// shared cost, discount and horizon.
struct GroupProblem {
  static constexpr std::size_t kDefaultMaxContexts = 64;

  double cost = 0.8;
  double gamma = 0.99;
  int horizon = 1000;
  std::vector<GroupContext> contexts;

  // Throws std::invalid_argument; weights must sum to 1 within 1e-9.
  void validate(std::size_t max_contexts = kDefaultMaxContexts) const;

  // Parses {"c", "gamma", "N", "contexts": [{"label", "weight", "n0", "s0",
  // "p"?, "policy"?}]}. Errors name the offending field, e.g.
  // "contexts[1].weight: expected a number".
  static GroupProblem from_json(const nlohmann::json& doc);
};

struct GroupSolution {
  std::vector<std::shared_ptr<const ValueGrid>> grids;
  std::vector<double> root_values;  // V_j(prior_j)
  // sum_j w_j V_j(prior_j): the decomposition of the utility over contexts.
  // Not the expectation of the interleaved simulation, which discounts by
  // the global arrival index.
  double aggregate = 0.0;
};

// One independent solve per context. Solver errors are rethrown prefixed
// with the context label.
GroupSolution solve_groups(const GroupProblem& gp);

struct GroupSimReport {
  std::vector<SimReport> per_context;  // discounted by global arrival index
  SimReport pooled;
  std::vector<std::string> never_sampled;  // labels with zero arrivals
  std::vector<long long> arrivals;         // total over all replications
};

// Interleaved arrivals: each arrival picks a context by weight from the
// arrival substream, then steps that context's own belief state and policy
// on its own substream. Context j of replication r uses stream (seed, r, j),
// so a single context reproduces rollout() exactly. `solution` supplies the
// grids for dp policies and may be omitted when no context uses dp.
GroupSimReport simulate_groups(const GroupProblem& gp,
                               const GroupSolution* solution, long long reps,
                               std::uint64_t seed, double epsilon_tail = 1e-6);

}  // namespace selective
