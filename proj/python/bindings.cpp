// Python extension: selective_labels._core.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "selective/avg_solver.hpp"
#include "selective/dp_solver.hpp"
#include "selective/groups.hpp"
#include "selective/io.hpp"
#include "selective/policy.hpp"
#include "selective/sim.hpp"
#include "selective/verify.hpp"

namespace py = pybind11;
using namespace selective;

namespace {

// JSON documents cross the boundary through the json module so nested
// results arrive as plain dicts and lists.
py::object to_python(const nlohmann::json& doc) {
  return py::module_::import("json").attr("loads")(doc.dump());
}

nlohmann::json from_python(const py::object& obj) {
  const auto text = py::module_::import("json").attr("dumps")(obj).cast<std::string>();
  return nlohmann::json::parse(text);
}

py::array_t<double> level_array(std::span<const double> level) {
  return py::array_t<double>(static_cast<py::ssize_t>(level.size()), level.data());
}

using GridPtr = std::shared_ptr<ValueGrid>;

py::list simulate(const std::vector<std::string>& policies, double cost,
                  std::optional<double> gamma, std::optional<long long> avg_steps,
                  std::optional<double> true_p,
                  std::optional<std::pair<int, int>> from_prior,
                  std::pair<int, int> prior, long long reps, std::uint64_t seed,
                  double eps, int horizon, bool keep_returns) {
  if (gamma.has_value() == avg_steps.has_value()) {
    throw std::invalid_argument("give exactly one of gamma and avg_steps");
  }
  if (true_p.has_value() == from_prior.has_value()) {
    throw std::invalid_argument("give exactly one of true_p and from_prior");
  }
  EnvSpec env;
  env.cost = cost;
  if (gamma) {
    env.objective = Discounted{*gamma, eps};
  } else {
    env.objective = Average{*avg_steps};
  }
  if (true_p) {
    env.p_source = FixedP{*true_p, BeliefState(prior.first, prior.second)};
  } else {
    env.p_source = FromPrior{BeliefState(from_prior->first, from_prior->second)};
  }
  env.validate();

  std::shared_ptr<const ValueGrid> grid;
  std::vector<PolicySpec> specs;
  for (const auto& text : policies) {
    const ParsedPolicy parsed = parse_policy(text);
    if (parsed.kind == PolicyKind::kDpOptimal && !grid) {
      if (!gamma) throw std::invalid_argument("policy dp needs the discounted objective");
      grid = std::make_shared<const ValueGrid>(
          solve(ProblemParams{cost, *gamma, env.learner_prior()}, horizon));
    }
    specs.push_back(make_policy(parsed, cost, grid, true_p));
  }
  py::list out;
  for (const auto& report : run_batch(env, specs, reps, seed, keep_returns)) {
    out.append(to_python(to_json(report)));
  }
  return out;
}

py::dict groups(const py::object& problem, bool run_simulation, long long reps,
                std::uint64_t seed, double eps) {
  const GroupProblem gp = GroupProblem::from_json(from_python(problem));
  const GroupSolution solution = solve_groups(gp);
  py::dict out;
  out["root_values"] = solution.root_values;
  out["aggregate"] = solution.aggregate;
  if (run_simulation) {
    out["simulation"] = to_python(to_json(simulate_groups(gp, &solution, reps, seed, eps)));
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Exact belief-lattice solver for selective-labels decisions";

  py::class_<BeliefState>(m, "BeliefState")
      .def(py::init<int, int>(), py::arg("n"), py::arg("s"))
      .def_property_readonly("n", &BeliefState::n)
      .def_property_readonly("s", &BeliefState::s)
      .def_property_readonly("posterior_mean", &BeliefState::posterior_mean)
      .def("update", &BeliefState::update, py::arg("accepted"), py::arg("success"))
      .def("__eq__", [](const BeliefState& a, const BeliefState& b) { return a == b; })
      .def("__hash__", [](const BeliefState& b) {
        return py::hash(py::make_tuple(b.n(), b.s()));
      })
      .def("__repr__", [](const BeliefState& b) { return "BeliefState" + b.to_string(); });

  m.def(
      "transitions",
      [](const BeliefState& b, double pi, double cost) {
        py::list out;
        for (const auto& t : transitions(b, pi, cost)) {
          out.append(py::make_tuple(t.next, t.probability, t.reward));
        }
        return out;
      },
      py::arg("belief"), py::arg("pi"), py::arg("cost"),
      "(next, probability, reward) for accept+success, accept+failure, reject.");

  py::class_<ValueGrid, GridPtr>(m, "ValueGrid")
      .def_property_readonly("objective",
                             [](const ValueGrid& g) { return to_string(g.objective()); })
      .def_property_readonly("cost", &ValueGrid::cost)
      .def_property_readonly("gamma", &ValueGrid::gamma)
      .def_property_readonly("horizon", &ValueGrid::horizon)
      .def_property_readonly("n_lo", &ValueGrid::n_lo)
      .def_property_readonly("terminal_level", &ValueGrid::terminal_level)
      .def_property_readonly("num_cells", &ValueGrid::num_cells)
      .def("value", &ValueGrid::value, py::arg("n"), py::arg("k"))
      .def("continue_value", &ValueGrid::continue_value, py::arg("n"), py::arg("k"))
      .def(
          "v_star",
          [](const ValueGrid& g, int n) { return level_array(g.v_star(n)); },
          py::arg("n"))
      .def(
          "v_tilde",
          [](const ValueGrid& g, int n) { return level_array(g.v_tilde(n)); },
          py::arg("n"))
      .def(
          "accepts",
          [](const ValueGrid& g, int n, int k) {
            return policy_at(g, BeliefState(n, k)) == Decision::kAccept;
          },
          py::arg("n"), py::arg("k"))
      .def(
          "query",
          [](const ValueGrid& g, int n, double p) { return value_query(g, n, p); },
          py::arg("n"), py::arg("p_hat"),
          "Linear interpolation along level n; exact at lattice points.")
      .def(
          "frontier",
          [](const ValueGrid& g) {
            py::list rows;
            for (const auto& row : frontier(g).rows) {
              py::dict d;
              d["n"] = row.n;
              d["c_lattice"] = row.c_lattice;
              d["c_interp"] = row.c_interp;
              d["lower_bound"] = row.lower_bound();
              d["upper_bound"] = row.upper_bound();
              rows.append(d);
            }
            return rows;
          },
          "Per-level stopping thresholds.")
      .def("to_csv", [](const ValueGrid& g) {
        std::ostringstream out;
        write_grid_csv(out, g);
        return out.str();
      });

  m.def(
      "solve",
      [](double cost, double gamma, int horizon, std::pair<int, int> prior,
         std::optional<int> n_lo) {
        const ProblemParams params{cost, gamma, BeliefState(prior.first, prior.second)};
        params.validate();
        return std::make_shared<ValueGrid>(
            solve(params, horizon, n_lo.value_or(prior.first)));
      },
      py::arg("cost"), py::arg("gamma"), py::arg("horizon"),
      py::arg("prior") = std::make_pair(2, 1), py::arg("n_lo") = py::none(),
      "Discounted backward induction over levels n_lo .. horizon + 1.");

  m.def(
      "avg_solve",
      [](double cost, int horizon, int n_lo) {
        return std::make_shared<ValueGrid>(avg_solve(cost, horizon, n_lo));
      },
      py::arg("cost"), py::arg("horizon"), py::arg("n_lo") = 2);

  m.def("terminal_value", &terminal_value, py::arg("p_hat"), py::arg("cost"),
        py::arg("gamma"));

  m.def(
      "expectimax",
      [](const BeliefState& b, int depth, double cost, double gamma) {
        return expectimax_oracle(b, depth, cost, gamma);
      },
      py::arg("belief"), py::arg("depth"), py::arg("cost"), py::arg("gamma"));

  m.def("simulate", &simulate, py::arg("policies"), py::arg("cost"),
        py::arg("gamma") = py::none(), py::arg("avg_steps") = py::none(),
        py::arg("true_p") = py::none(), py::arg("from_prior") = py::none(),
        py::arg("prior") = std::make_pair(2, 1), py::arg("reps") = 10000,
        py::arg("seed") = 1, py::arg("eps") = 1e-6, py::arg("horizon") = 1000,
        py::arg("keep_returns") = false,
        "Monte Carlo evaluation under common random numbers; one dict per policy.");

  m.def(
      "check",
      [](const std::string& name, const GridPtr& grid, double tol) {
        if (name == "prop2") return to_python(to_json(prop2_check(*grid, tol).summary()));
        if (name == "theorem2") {
          return to_python(to_json(theorem2_check(*grid, tol).summary()));
        }
        if (name == "interval") return to_python(to_json(interval_structure_check(*grid)));
        if (name == "frontier") {
          return to_python(to_json(frontier_monotone_check(frontier(*grid), grid->cost())));
        }
        throw std::invalid_argument("unknown grid check '" + name + "'");
      },
      py::arg("name"), py::arg("grid"), py::arg("tol") = 1e-9,
      "Grid check by name: prop2, theorem2, interval, frontier.");

  m.def(
      "lemma1_check",
      [](long long samples, std::uint64_t seed, double tol) {
        return to_python(to_json(lemma1_check(samples, seed, tol)));
      },
      py::arg("samples") = 10000, py::arg("seed") = 1, py::arg("tol") = 1e-12);

  m.def("groups", &groups, py::arg("problem"), py::arg("simulate") = false,
        py::arg("reps") = 10000, py::arg("seed") = 1, py::arg("eps") = 1e-6,
        "Independent per-context solves from a problem dict.");
}
