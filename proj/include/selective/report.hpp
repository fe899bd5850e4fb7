#pragma once

#include <string>
#include <vector>

namespace selective {

// Outcome of one numerical property check. Slack is the smallest observed
// margin (lhs - rhs) over every inequality tested; a check passes when the
// slack is at least -tolerance.
struct CheckResult {
  std::string name;
  bool pass = true;
  double worst_slack = 0.0;
  std::string location;
  long long evaluations = 0;
  long long violations = 0;
};

struct LevelCheck {
  int n = 0;
  bool pass = true;
  double worst_slack = 0.0;
  std::string location;  // cell of the worst slack, "n=..,k=.."
};

struct LevelReport {
  std::string name;
  std::vector<LevelCheck> levels;  // ascending n

  bool pass() const;
  const LevelCheck* worst() const;
  CheckResult summary() const;
};

// Running minimum of slacks with the lattice cell where it occurred.
struct SlackTracker {
  double slack = 0.0;
  std::string location;
  bool seen = false;

  void observe(double s, int n, int k);
};

}  // namespace selective
