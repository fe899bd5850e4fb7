#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "selective/dp_solver.hpp"
#include "selective/groups.hpp"
#include "selective/report.hpp"
#include "selective/sim.hpp"
#include "selective/value_grid.hpp"

namespace selective {

// %.17g: every printed double parses back to the same bits.
std::string format_exact(double value);

// Grid CSV: `#` metadata lines (c, gamma, N, n_lo, objective) followed by
// `n,k,p_hat,v_star,v_tilde,accept`, one row per lattice cell. The accept
// column reads "accept" or "reject".
void write_grid_csv(std::ostream& out, const ValueGrid& grid);

// Frontier CSV: `n,c_n_lattice,c_n_interp` with the same metadata header.
void write_frontier_csv(std::ostream& out, const ValueGrid& grid,
                        const FrontierTable& table);

// One figure curve: `p_hat,value` over the lattice of level n.
void write_curve_csv(std::ostream& out, const ValueGrid& grid, int n);

struct GridCsvRow {
  int n = 0;
  int k = 0;
  double p_hat = 0.0;
  double v_star = 0.0;
  double v_tilde = 0.0;
  bool accept = false;
};

struct GridCsv {
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<GridCsvRow> rows;
};

// Throws std::runtime_error with the offending line number.
GridCsv read_grid_csv(std::istream& in);

nlohmann::json to_json(const PolicyInfo& info);
nlohmann::json to_json(const SimReport& report);
nlohmann::json to_json(const CheckResult& result);
nlohmann::json to_json(const GroupSimReport& report);

// {"checks": [...], "pass": bool}
nlohmann::json verification_report(const std::vector<CheckResult>& checks);

}  // namespace selective
