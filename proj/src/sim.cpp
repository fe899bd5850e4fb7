#include "selective/sim.hpp"

#include <cmath>
#include <stdexcept>

namespace selective {

void EnvSpec::validate() const {
  validate_cost(cost);
  if (const auto* fixed = std::get_if<FixedP>(&p_source)) {
    if (!(fixed->p >= 0.0 && fixed->p <= 1.0)) {
      throw std::invalid_argument("true p must lie in [0,1]");
    }
  } else {
    validate_prior(std::get<FromPrior>(p_source).prior);
  }
  if (const auto* disc = std::get_if<Discounted>(&objective)) {
    validate_gamma(disc->gamma);
    if (!(disc->epsilon_tail > 0.0)) {
      throw std::invalid_argument("tail epsilon must be > 0");
    }
  } else if (std::get<Average>(objective).steps < 1) {
    throw std::invalid_argument("average objective needs N_steps >= 1");
  }
}

const BeliefState& EnvSpec::learner_prior() const {
  if (const auto* fixed = std::get_if<FixedP>(&p_source)) return fixed->prior;
  return std::get<FromPrior>(p_source).prior;
}

Objective EnvSpec::objective_kind() const {
  return std::holds_alternative<Discounted>(objective) ? Objective::kDiscounted
                                                       : Objective::kAverage;
}

long long truncation_horizon(double gamma, double epsilon_tail) {
  validate_gamma(gamma);
  const double h = std::log(epsilon_tail * (1.0 - gamma)) / std::log(gamma);
  return std::max(1LL, static_cast<long long>(std::ceil(h)));
}

long long rollout_length(const EnvSpec& env) {
  if (const auto* disc = std::get_if<Discounted>(&env.objective)) {
    return truncation_horizon(disc->gamma, disc->epsilon_tail);
  }
  return std::get<Average>(env.objective).steps;
}

PolicyRun::PolicyRun(PolicySpec spec, BeliefState prior, double p, double cost)
    : spec_(spec.with_true_p(p)), belief_(prior), p_(p), cost_(cost) {}

double PolicyRun::step(ReplicationStream& stream) {
  const double u_accept = stream.uniform();
  const double u_outcome = stream.uniform();
  const double pi = spec_.acceptance_probability(belief_, steps_);
  ++steps_;
  if (!(u_accept < pi)) {
    if (spec_.deterministic()) frozen_ = true;
    return 0.0;
  }
  const bool success = u_outcome < p_;
  belief_ = belief_.update(true, success);
  return (success ? 1.0 : 0.0) - cost_;
}

double draw_p(const EnvSpec& env, ReplicationStream& stream) {
  if (const auto* fixed = std::get_if<FixedP>(&env.p_source)) return fixed->p;
  const BeliefState& prior = std::get<FromPrior>(env.p_source).prior;
  return stream.beta(prior.s(), prior.n() - prior.s());
}

namespace {

double run_one(const EnvSpec& env, const PolicySpec& spec, long long length,
               ReplicationStream& stream) {
  const double p = draw_p(env, stream);
  PolicyRun run(spec, env.learner_prior(), p, env.cost);
  if (const auto* disc = std::get_if<Discounted>(&env.objective)) {
    double total = 0.0;
    double discount = 1.0;
    for (long long i = 0; i < length && !run.frozen(); ++i) {
      total += discount * run.step(stream);
      discount *= disc->gamma;
    }
    return total;
  }
  double total = 0.0;
  for (long long i = 0; i < length && !run.frozen(); ++i) {
    total += run.step(stream);
  }
  return total / static_cast<double>(length);
}

}  // namespace

double rollout(const EnvSpec& env, const PolicySpec& spec, std::uint64_t seed,
               std::uint64_t replication) {
  env.validate();
  ReplicationStream stream(seed, replication);
  return run_one(env, spec, rollout_length(env), stream);
}

double pairwise_sum(std::span<const double> values) {
  if (values.size() <= 8) {
    double total = 0.0;
    for (double v : values) total += v;
    return total;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

void summarize(std::span<const double> returns, SimReport& report) {
  const auto count = static_cast<long long>(returns.size());
  report.reps = count;
  if (count == 0) {
    report.mean = 0.0;
    report.std_error = 0.0;
    report.degenerate = true;
    return;
  }
  report.mean = pairwise_sum(returns) / static_cast<double>(count);
  if (count == 1) {
    report.std_error = 0.0;
    report.degenerate = true;
    return;
  }
  std::vector<double> squares(returns.size());
  for (std::size_t i = 0; i < returns.size(); ++i) {
    const double d = returns[i] - report.mean;
    squares[i] = d * d;
  }
  const double variance = pairwise_sum(squares) / static_cast<double>(count - 1);
  report.std_error = std::sqrt(variance / static_cast<double>(count));
  report.degenerate = false;
}

std::vector<SimReport> run_batch(const EnvSpec& env,
                                 const std::vector<PolicySpec>& specs,
                                 long long reps, std::uint64_t seed,
                                 bool keep_returns) {
  env.validate();
  if (reps < 1) throw std::invalid_argument("reps must be >= 1");
  const long long length = rollout_length(env);

  std::vector<std::pair<std::string, double>> env_params{{"c", env.cost}};
  if (const auto* fixed = std::get_if<FixedP>(&env.p_source)) {
    env_params.emplace_back("p", fixed->p);
  } else {
    const auto& prior = std::get<FromPrior>(env.p_source).prior;
    env_params.emplace_back("n0", prior.n());
    env_params.emplace_back("s0", prior.s());
  }
  if (const auto* disc = std::get_if<Discounted>(&env.objective)) {
    env_params.emplace_back("gamma", disc->gamma);
    env_params.emplace_back("eps", disc->epsilon_tail);
  } else {
    env_params.emplace_back("avg_steps",
                            static_cast<double>(std::get<Average>(env.objective).steps));
  }

  std::vector<SimReport> reports;
  reports.reserve(specs.size());
  std::vector<double> returns(static_cast<std::size_t>(reps));
  for (const auto& spec : specs) {
    for (long long r = 0; r < reps; ++r) {
      ReplicationStream stream(seed, static_cast<std::uint64_t>(r));
      returns[static_cast<std::size_t>(r)] = run_one(env, spec, length, stream);
    }
    SimReport report;
    report.policy = spec.describe();
    report.objective = env.objective_kind();
    report.horizon = length;
    report.seed = seed;
    report.env_params = env_params;
    summarize(returns, report);
    if (report.degenerate) report.notes.push_back("single replication: stderr is 0");
    if (keep_returns) report.returns = returns;
    reports.push_back(std::move(report));
  }
  return reports;
}

}  // namespace selective
