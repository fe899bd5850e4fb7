#include "selective/report.hpp"

#include <algorithm>

namespace selective {

bool LevelReport::pass() const {
  return std::all_of(levels.begin(), levels.end(),
                     [](const LevelCheck& l) { return l.pass; });
}

const LevelCheck* LevelReport::worst() const {
  const LevelCheck* worst = nullptr;
  for (const auto& level : levels) {
    if (worst == nullptr || level.worst_slack < worst->worst_slack) {
      worst = &level;
    }
  }
  return worst;
}

CheckResult LevelReport::summary() const {
  CheckResult result;
  result.name = name;
  result.pass = pass();
  result.evaluations = static_cast<long long>(levels.size());
  result.violations = std::count_if(levels.begin(), levels.end(),
                                    [](const LevelCheck& l) { return !l.pass; });
  if (const LevelCheck* w = worst()) {
    result.worst_slack = w->worst_slack;
    result.location = w->location;
  }
  return result;
}

void SlackTracker::observe(double s, int n, int k) {
  if (!seen || s < slack) {
    slack = s;
    location = "n=" + std::to_string(n) + ",k=" + std::to_string(k);
    seen = true;
  }
}

}  // namespace selective
