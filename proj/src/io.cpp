#include "selective/io.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace selective {

std::string format_exact(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

namespace {

void write_metadata(std::ostream& out, const ValueGrid& grid) {
  out << "# c=" << format_exact(grid.cost());
  if (grid.gamma()) out << " gamma=" << format_exact(*grid.gamma());
  out << " N=" << grid.horizon() << " n_lo=" << grid.n_lo() << '\n';
  out << "# objective=" << to_string(grid.objective()) << '\n';
}

}  // namespace

void write_grid_csv(std::ostream& out, const ValueGrid& grid) {
  write_metadata(out, grid);
  out << "n,k,p_hat,v_star,v_tilde,accept\n";
  const bool average = grid.objective() == Objective::kAverage;
  std::string line;
  for (int n = grid.n_lo(); n <= grid.terminal_level(); ++n) {
    const auto star = grid.v_star(n);
    const auto tilde = grid.v_tilde(n);
    for (int k = 0; k <= n; ++k) {
      line.clear();
      line += std::to_string(n);
      line += ',';
      line += std::to_string(k);
      line += ',';
      line += format_exact(lattice_p_hat(n, k));
      line += ',';
      line += format_exact(star[k]);
      line += ',';
      line += format_exact(tilde[k]);
      // Average-reward optimal policies accept with positive probability
      // everywhere.
      line += (average || tilde[k] > 0.0) ? ",accept\n" : ",reject\n";
      out << line;
    }
  }
}

void write_frontier_csv(std::ostream& out, const ValueGrid& grid,
                        const FrontierTable& table) {
  write_metadata(out, grid);
  out << "n,c_n_lattice,c_n_interp\n";
  for (const auto& row : table.rows) {
    out << row.n << ',' << format_exact(row.c_lattice) << ','
        << format_exact(row.c_interp) << '\n';
  }
}

void write_curve_csv(std::ostream& out, const ValueGrid& grid, int n) {
  write_metadata(out, grid);
  out << "# n=" << n << '\n';
  out << "p_hat,value\n";
  const auto star = grid.v_star(n);
  for (int k = 0; k <= n; ++k) {
    out << format_exact(lattice_p_hat(n, k)) << ',' << format_exact(star[k])
        << '\n';
  }
}

GridCsv read_grid_csv(std::istream& in) {
  GridCsv csv;
  std::string line;
  int line_no = 0;
  bool header_seen = false;
  const auto fail = [&](const std::string& what) {
    throw std::runtime_error("grid csv line " + std::to_string(line_no) + ": " +
                             what);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream tokens(line.substr(1));
      std::string token;
      while (tokens >> token) {
        const auto eq = token.find('=');
        if (eq != std::string::npos) {
          csv.metadata.emplace_back(token.substr(0, eq), token.substr(eq + 1));
        }
      }
      continue;
    }
    if (!header_seen) {
      if (line != "n,k,p_hat,v_star,v_tilde,accept") fail("unexpected header");
      header_seen = true;
      continue;
    }
    GridCsvRow row;
    char accept[16] = {};
    if (std::sscanf(line.c_str(), "%d,%d,%lf,%lf,%lf,%15s", &row.n, &row.k,
                    &row.p_hat, &row.v_star, &row.v_tilde, accept) != 6) {
      fail("malformed row");
    }
    const std::string decision(accept);
    if (decision != "accept" && decision != "reject") fail("bad accept column");
    row.accept = decision == "accept";
    csv.rows.push_back(row);
  }
  if (!header_seen) fail("missing header");
  return csv;
}

nlohmann::json to_json(const PolicyInfo& info) {
  nlohmann::json params = nlohmann::json::object();
  for (const auto& [key, value] : info.params) params[key] = value;
  return {{"name", info.name}, {"params", params}};
}

nlohmann::json to_json(const SimReport& report) {
  nlohmann::json params = nlohmann::json::object();
  for (const auto& [key, value] : report.policy.params) params[key] = value;
  for (const auto& [key, value] : report.env_params) params[key] = value;
  nlohmann::json doc = {
      {"policy", report.policy.name},
      {"params", params},
      {"reps", report.reps},
      {"mean", report.mean},
      {"stderr", report.std_error},
      {"horizon", report.horizon},
      {"seed", report.seed},
      {"objective", to_string(report.objective)},
  };
  if (report.degenerate) doc["degenerate"] = true;
  if (!report.notes.empty()) doc["notes"] = report.notes;
  if (!report.returns.empty()) doc["returns"] = report.returns;
  return doc;
}

nlohmann::json to_json(const CheckResult& result) {
  return {{"name", result.name},
          {"pass", result.pass},
          {"worst_slack", result.worst_slack},
          {"location", result.location},
          {"evaluations", result.evaluations},
          {"violations", result.violations}};
}

nlohmann::json to_json(const GroupSimReport& report) {
  nlohmann::json contexts = nlohmann::json::array();
  for (std::size_t j = 0; j < report.per_context.size(); ++j) {
    auto item = to_json(report.per_context[j]);
    item["arrivals"] = report.arrivals[j];
    contexts.push_back(std::move(item));
  }
  return {{"contexts", contexts},
          {"pooled", to_json(report.pooled)},
          {"never_sampled", report.never_sampled}};
}

nlohmann::json verification_report(const std::vector<CheckResult>& checks) {
  nlohmann::json items = nlohmann::json::array();
  bool pass = true;
  for (const auto& check : checks) {
    items.push_back(to_json(check));
    pass = pass && check.pass;
  }
  return {{"checks", items}, {"pass", pass}};
}

}  // namespace selective
