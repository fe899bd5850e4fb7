#include "selective/groups.hpp"

#include <cmath>
#include <stdexcept>

#include "selective/dp_solver.hpp"
#include "selective/policy.hpp"

namespace selective {

namespace {

// Substream reserved for the arrival process; contexts use 0..63.
constexpr std::uint32_t kArrivalSubstream = 0xA5517u;

[[noreturn]] void field_error(const std::string& path, const std::string& what) {
  throw std::invalid_argument(path + ": " + what);
}

double number_field(const nlohmann::json& obj, const std::string& key,
                    const std::string& path) {
  const auto it = obj.find(key);
  if (it == obj.end()) field_error(path + key, "missing");
  if (!it->is_number()) field_error(path + key, "expected a number");
  return it->get<double>();
}

int integer_field(const nlohmann::json& obj, const std::string& key,
                  const std::string& path) {
  const auto it = obj.find(key);
  if (it == obj.end()) field_error(path + key, "missing");
  if (!it->is_number_integer()) field_error(path + key, "expected an integer");
  return it->get<int>();
}

}  // namespace

void GroupProblem::validate(std::size_t max_contexts) const {
  validate_cost(cost);
  validate_gamma(gamma);
  if (contexts.empty()) throw std::invalid_argument("contexts: empty");
  if (contexts.size() > max_contexts) {
    throw std::invalid_argument("contexts: " + std::to_string(contexts.size()) +
                                " exceeds the cap of " +
                                std::to_string(max_contexts));
  }
  double total = 0.0;
  for (const auto& ctx : contexts) {
    if (!(ctx.weight >= 0.0 && ctx.weight <= 1.0)) {
      throw std::invalid_argument("context '" + ctx.label +
                                  "': weight must lie in [0,1]");
    }
    try {
      validate_prior(ctx.prior);
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("context '" + ctx.label + "': " + e.what());
    }
    if (ctx.true_p && !(*ctx.true_p >= 0.0 && *ctx.true_p <= 1.0)) {
      throw std::invalid_argument("context '" + ctx.label +
                                  "': p must lie in [0,1]");
    }
    if (horizon < ctx.prior.n()) {
      throw std::invalid_argument("context '" + ctx.label + "': N=" +
                                  std::to_string(horizon) + " below n0");
    }
    parse_policy(ctx.policy);
    total += ctx.weight;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw std::invalid_argument("weights sum to " + format_number(total) +
                                ", expected 1");
  }
}

GroupProblem GroupProblem::from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) field_error("(root)", "expected an object");
  GroupProblem gp;
  gp.cost = number_field(doc, "c", "");
  gp.gamma = number_field(doc, "gamma", "");
  gp.horizon = integer_field(doc, "N", "");
  const auto it = doc.find("contexts");
  if (it == doc.end()) field_error("contexts", "missing");
  if (!it->is_array()) field_error("contexts", "expected an array");
  for (std::size_t i = 0; i < it->size(); ++i) {
    const auto& item = (*it)[i];
    const std::string path = "contexts[" + std::to_string(i) + "].";
    if (!item.is_object()) field_error(path.substr(0, path.size() - 1),
                                       "expected an object");
    GroupContext ctx;
    if (const auto label = item.find("label"); label != item.end()) {
      if (!label->is_string()) field_error(path + "label", "expected a string");
      ctx.label = label->get<std::string>();
    } else {
      ctx.label = "context" + std::to_string(i);
    }
    ctx.weight = number_field(item, "weight", path);
    const int n0 = integer_field(item, "n0", path);
    const int s0 = integer_field(item, "s0", path);
    try {
      ctx.prior = BeliefState(n0, s0);
    } catch (const std::invalid_argument& e) {
      field_error(path + "n0/s0", e.what());
    }
    if (item.contains("p") && !item["p"].is_null()) {
      ctx.true_p = number_field(item, "p", path);
    }
    if (const auto policy = item.find("policy"); policy != item.end()) {
      if (!policy->is_string()) field_error(path + "policy", "expected a string");
      ctx.policy = policy->get<std::string>();
    }
    gp.contexts.push_back(std::move(ctx));
  }
  return gp;
}

GroupSolution solve_groups(const GroupProblem& gp) {
  gp.validate();
  GroupSolution solution;
  for (const auto& ctx : gp.contexts) {
    try {
      auto grid = std::make_shared<const ValueGrid>(
          solve(ProblemParams{gp.cost, gp.gamma, ctx.prior}, gp.horizon));
      solution.root_values.push_back(grid->value(ctx.prior.n(), ctx.prior.s()));
      solution.grids.push_back(std::move(grid));
    } catch (const std::exception& e) {
      throw std::invalid_argument("context '" + ctx.label + "': " + e.what());
    }
  }
  double aggregate = 0.0;
  for (std::size_t j = 0; j < gp.contexts.size(); ++j) {
    aggregate += gp.contexts[j].weight * solution.root_values[j];
  }
  solution.aggregate = aggregate;
  return solution;
}

GroupSimReport simulate_groups(const GroupProblem& gp,
                               const GroupSolution* solution, long long reps,
                               std::uint64_t seed, double epsilon_tail) {
  gp.validate();
  if (reps < 1) throw std::invalid_argument("reps must be >= 1");
  const std::size_t count = gp.contexts.size();

  std::vector<PolicySpec> specs;
  for (std::size_t j = 0; j < count; ++j) {
    const auto parsed = parse_policy(gp.contexts[j].policy);
    std::shared_ptr<const ValueGrid> grid;
    if (parsed.kind == PolicyKind::kDpOptimal) {
      if (solution == nullptr || solution->grids.size() != count) {
        throw std::invalid_argument("context '" + gp.contexts[j].label +
                                    "': dp policy needs solved grids");
      }
      grid = solution->grids[j];
    }
    specs.push_back(make_policy(parsed, gp.cost, grid, gp.contexts[j].true_p));
  }

  // Inverse-CDF table over weights; zero-weight contexts get empty bins.
  std::vector<double> cumulative(count);
  double running = 0.0;
  for (std::size_t j = 0; j < count; ++j) {
    running += gp.contexts[j].weight;
    cumulative[j] = running;
  }
  std::size_t last_positive = 0;
  for (std::size_t j = 0; j < count; ++j) {
    if (gp.contexts[j].weight > 0.0) last_positive = j;
  }

  const long long length = truncation_horizon(gp.gamma, epsilon_tail);
  const auto n_reps = static_cast<std::size_t>(reps);
  std::vector<std::vector<double>> context_returns(
      count, std::vector<double>(n_reps, 0.0));
  std::vector<double> pooled_returns(n_reps, 0.0);
  std::vector<long long> arrivals(count, 0);

  for (long long r = 0; r < reps; ++r) {
    const auto rep = static_cast<std::uint64_t>(r);
    ReplicationStream arrival_stream(seed, rep, kArrivalSubstream);
    std::vector<ReplicationStream> streams;
    std::vector<PolicyRun> runs;
    streams.reserve(count);
    runs.reserve(count);
    for (std::size_t j = 0; j < count; ++j) {
      streams.emplace_back(seed, rep, static_cast<std::uint32_t>(j));
      const auto& ctx = gp.contexts[j];
      const double p = ctx.true_p ? *ctx.true_p
                                  : streams[j].beta(ctx.prior.s(),
                                                    ctx.prior.n() - ctx.prior.s());
      runs.emplace_back(specs[j], ctx.prior, p, gp.cost);
    }

    double discount = 1.0;
    for (long long i = 0; i < length; ++i) {
      std::size_t j = last_positive;
      if (count > 1) {
        const double u = arrival_stream.uniform();
        for (std::size_t m = 0; m < count; ++m) {
          if (gp.contexts[m].weight > 0.0 && u < cumulative[m]) {
            j = m;
            break;
          }
        }
      }
      ++arrivals[j];
      if (!runs[j].frozen()) {
        const double reward = discount * runs[j].step(streams[j]);
        context_returns[j][static_cast<std::size_t>(r)] += reward;
        pooled_returns[static_cast<std::size_t>(r)] += reward;
      }
      discount *= gp.gamma;
    }
  }

  GroupSimReport report;
  report.arrivals = arrivals;
  const std::vector<std::pair<std::string, double>> env{
      {"c", gp.cost}, {"gamma", gp.gamma}, {"eps", epsilon_tail}};
  for (std::size_t j = 0; j < count; ++j) {
    SimReport ctx_report;
    ctx_report.policy = specs[j].describe();
    ctx_report.policy.name = gp.contexts[j].label + ":" + ctx_report.policy.name;
    ctx_report.horizon = length;
    ctx_report.seed = seed;
    ctx_report.env_params = env;
    ctx_report.env_params.emplace_back("weight", gp.contexts[j].weight);
    summarize(context_returns[j], ctx_report);
    if (arrivals[j] == 0) {
      ctx_report.notes.push_back("never sampled");
      report.never_sampled.push_back(gp.contexts[j].label);
    }
    report.per_context.push_back(std::move(ctx_report));
  }
  report.pooled.policy = {"pooled", {}};
  report.pooled.horizon = length;
  report.pooled.seed = seed;
  report.pooled.env_params = env;
  summarize(pooled_returns, report.pooled);
  return report;
}

}  // namespace selective
