#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "steady/config.hpp"
#include "steady/qgrid.hpp"

namespace steady {

struct PointResult {
  std::vector<double> values;  // one per column; NaN where an observable failed
  std::string status = "ok";   // "ok" or the first error kind, e.g. "PoleError"
  std::string message;
  int series_terms = 0;        // generated sequence length, or oracle dimension
};

struct OracleSpotCheck {
  size_t index = 0;
  bool passed = false;
  double max_rel_error = 0;
  std::string detail;
};

struct SweepResult {
  std::vector<std::string> axis_names;
  std::vector<std::vector<double>> axis_values;
  std::vector<std::string> columns;
  std::vector<PointResult> points;  // row-major, last axis fastest
  std::vector<std::optional<QGrid>> qgrids;
  std::vector<OracleSpotCheck> oracle_checks;
  std::vector<std::pair<std::string, std::string>> manifest;

  size_t size() const { return points.size(); }
  // axis values of point i, in axis order
  std::vector<double> coordinates(size_t i) const;
  int column(const std::string& name) const;  // -1 if absent
};

// Column names produced by one observable; throws ConfigError for unknown names.
std::vector<std::string> observable_columns(ModelKind model, const std::string& observable);

// Evaluates every observable at every grid point. workers <= 0 uses the config
// value (0 there means hardware concurrency).
SweepResult run_sweep(const SweepConfig& cfg, int workers = -1);

}  // namespace steady
