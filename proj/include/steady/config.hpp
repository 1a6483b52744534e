#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "steady/parametric_duffing.hpp"
#include "steady/qgrid.hpp"
#include "steady/transmon_cavity.hpp"

namespace steady {

// Small TOML subset: comments, [table], [[array of tables]], key = value with
// strings, numbers, booleans and (possibly multi-line) flat arrays.
struct TomlValue {
  enum class Kind { Number, String, Bool, Array } kind = Kind::Number;
  double number = 0;
  std::string str;
  bool boolean = false;
  std::vector<TomlValue> array;
};

using TomlTable = std::map<std::string, TomlValue>;

struct TomlDocument {
  TomlTable root;
  std::map<std::string, TomlTable> tables;
  std::map<std::string, std::vector<TomlTable>> table_arrays;
};

TomlDocument parse_toml(const std::string& text);

enum class ModelKind { TransmonCavity, ParametricDuffing, Oracle };
const char* model_name(ModelKind m);

struct AxisSpec {
  std::string name;  // a parameter key, including its unit suffix
  double min = 0;
  double max = 1;
  int count = 2;
  bool log_scale = false;

  std::vector<double> values() const;
};

struct OutputSpec {
  std::vector<std::string> formats{"csv"};
  std::string path = "out/sweep";
  std::string intensity = "linear";
  bool color = false;
  std::string image;  // column rendered as a heatmap for 2-axis sweeps
  bool timestamp = false;
};

struct OracleCheckSpec {
  bool enabled = false;
  double tolerance = 1e-6;
  int max_points = 3;
  std::uint64_t seed = 1;
};

struct SweepConfig {
  int schema_version = 1;
  std::string name = "sweep";
  ModelKind model = ModelKind::ParametricDuffing;
  ModelKind oracle_target = ModelKind::ParametricDuffing;
  std::vector<std::pair<std::string, double>> fixed_params;
  std::vector<AxisSpec> axes;
  std::vector<std::string> observables;
  GridSpec qgrid;
  std::vector<int> oracle_dims{40};
  OutputSpec output;
  OracleCheckSpec oracle_check;
  int workers = 1;
  std::string source;  // original text, echoed into the manifest
};

constexpr int kSchemaVersion = 1;

SweepConfig parse_config(const std::string& text);
SweepConfig load_config(const std::string& path);

// Parameter values of one grid point after unit conversion.
struct PointParams {
  TransmonCavityParams transmon;
  ParampParams paramp;
  double ej_over_ec = 0;
};

// The single place where configured quantities become internal angular units:
//   <name>_mhz : nu in MHz, stored as 2 pi nu (angular frequency per microsecond)
//   <name>_g1  : multiple of gamma1 (parametric model)
//   <name>_phase : phase of a complex drive, radians
//   <name>     : already in internal units (or dimensionless)
PointParams resolve_params(ModelKind model,
                           const std::vector<std::pair<std::string, double>>& values);

// Inverse of the _mhz conversion, for reporting frequencies.
double to_mhz(double angular);

}  // namespace steady
