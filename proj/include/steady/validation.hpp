#pragma once

#include <string>
#include <vector>

namespace steady {

struct CheckResult {
  std::string name;
  bool passed;
  std::string detail;
};

// Analytic-vs-oracle comparisons at fixed parameter points.
std::vector<CheckResult> run_validation();

}  // namespace steady
