#include "steady/config.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "steady/errors.hpp"
#include "steady/sweep.hpp"

namespace steady {

namespace {

std::string trim(const std::string& s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::string strip_comment(const std::string& line) {
  bool in_str = false;
  for (size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') in_str = !in_str;
    if (line[i] == '#' && !in_str) return line.substr(0, i);
  }
  return line;
}

class ValueParser {
 public:
  ValueParser(const std::string& s, int line) : s_(s), line_(line) {}

  TomlValue parse() {
    TomlValue v = value();
    skip_ws();
    if (pos_ != s_.size()) fail("trailing characters");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& why) {
    throw ConfigError("config line " + std::to_string(line_) + ": " + why);
  }
  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  TomlValue value() {
    skip_ws();
    if (pos_ >= s_.size()) fail("missing value");
    TomlValue v;
    const char c = s_[pos_];
    if (c == '"') {
      const size_t end = s_.find('"', pos_ + 1);
      if (end == std::string::npos) fail("unterminated string");
      v.kind = TomlValue::Kind::String;
      v.str = s_.substr(pos_ + 1, end - pos_ - 1);
      pos_ = end + 1;
      return v;
    }
    if (c == '[') {
      ++pos_;
      v.kind = TomlValue::Kind::Array;
      skip_ws();
      if (pos_ < s_.size() && s_[pos_] == ']') {
        ++pos_;
        return v;
      }
      while (true) {
        v.array.push_back(value());
        skip_ws();
        if (pos_ >= s_.size()) fail("unterminated array");
        if (s_[pos_] == ',') {
          ++pos_;
          skip_ws();
          if (pos_ < s_.size() && s_[pos_] == ']') {
            ++pos_;
            return v;
          }
          continue;
        }
        if (s_[pos_] == ']') {
          ++pos_;
          return v;
        }
        fail("expected ',' or ']'");
      }
    }
    size_t end = pos_;
    while (end < s_.size() && s_[end] != ',' && s_[end] != ']' &&
           !std::isspace(static_cast<unsigned char>(s_[end])))
      ++end;
    const std::string tok = s_.substr(pos_, end - pos_);
    pos_ = end;
    if (tok == "true" || tok == "false") {
      v.kind = TomlValue::Kind::Bool;
      v.boolean = tok == "true";
      return v;
    }
    std::string num;
    for (char ch : tok)
      if (ch != '_') num += ch;
    try {
      size_t used = 0;
      v.number = std::stod(num, &used);
      if (used != num.size()) fail("bad number '" + tok + "'");
    } catch (const std::logic_error&) {
      fail("bad value '" + tok + "'");
    }
    return v;
  }

  const std::string& s_;
  int line_;
  size_t pos_ = 0;
};

int bracket_balance(const std::string& s) {
  int depth = 0;
  bool in_str = false;
  for (char c : s) {
    if (c == '"') in_str = !in_str;
    if (in_str) continue;
    if (c == '[') ++depth;
    if (c == ']') --depth;
  }
  return depth;
}

const TomlValue* find(const TomlTable& t, const std::string& key) {
  auto it = t.find(key);
  return it == t.end() ? nullptr : &it->second;
}

double get_number(const TomlTable& t, const std::string& key, double def) {
  const auto* v = find(t, key);
  if (!v) return def;
  if (v->kind != TomlValue::Kind::Number) throw ConfigError("'" + key + "' must be a number");
  return v->number;
}

int get_int(const TomlTable& t, const std::string& key, int def) {
  const double v = get_number(t, key, def);
  if (v != std::floor(v)) throw ConfigError("'" + key + "' must be an integer");
  return int(v);
}

std::string get_string(const TomlTable& t, const std::string& key, const std::string& def) {
  const auto* v = find(t, key);
  if (!v) return def;
  if (v->kind != TomlValue::Kind::String) throw ConfigError("'" + key + "' must be a string");
  return v->str;
}

bool get_bool(const TomlTable& t, const std::string& key, bool def) {
  const auto* v = find(t, key);
  if (!v) return def;
  if (v->kind != TomlValue::Kind::Bool) throw ConfigError("'" + key + "' must be true/false");
  return v->boolean;
}

std::vector<std::string> get_strings(const TomlTable& t, const std::string& key,
                                     const std::vector<std::string>& def) {
  const auto* v = find(t, key);
  if (!v) return def;
  if (v->kind == TomlValue::Kind::String) return {v->str};
  if (v->kind != TomlValue::Kind::Array) throw ConfigError("'" + key + "' must be a list of strings");
  std::vector<std::string> out;
  for (const auto& e : v->array) {
    if (e.kind != TomlValue::Kind::String) throw ConfigError("'" + key + "' must be a list of strings");
    out.push_back(e.str);
  }
  return out;
}

ModelKind parse_model(const std::string& s) {
  if (s == "transmon_cavity") return ModelKind::TransmonCavity;
  if (s == "parametric_duffing") return ModelKind::ParametricDuffing;
  if (s == "oracle") return ModelKind::Oracle;
  throw ConfigError("unknown model '" + s + "'");
}

void check_keys(const TomlTable& t, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& [k, v] : t)
    if (!allowed.count(k)) throw ConfigError("unknown key '" + k + "' in " + where);
}

GridAxis parse_grid_axis(const TomlTable& t, const std::string& p, GridAxis def) {
  def.min = get_number(t, p + "_min", def.min);
  def.max = get_number(t, p + "_max", def.max);
  def.count = get_int(t, p + "_count", def.count);
  if (def.count < 2 || !(def.max > def.min)) throw ConfigError("bad qgrid axis '" + p + "'");
  return def;
}

}  // namespace

TomlDocument parse_toml(const std::string& text) {
  TomlDocument doc;
  TomlTable* current = &doc.root;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;
    if (line.rfind("[[", 0) == 0) {
      if (line.size() < 4 || line.substr(line.size() - 2) != "]]")
        throw ConfigError("config line " + std::to_string(lineno) + ": bad table header");
      auto& arr = doc.table_arrays[trim(line.substr(2, line.size() - 4))];
      arr.emplace_back();
      current = &arr.back();
      continue;
    }
    if (line[0] == '[') {
      if (line.back() != ']')
        throw ConfigError("config line " + std::to_string(lineno) + ": bad table header");
      const std::string name = trim(line.substr(1, line.size() - 2));
      if (doc.tables.count(name))
        throw ConfigError("config line " + std::to_string(lineno) + ": duplicate table " + name);
      current = &doc.tables[name];
      continue;
    }
    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    const int start = lineno;
    while (bracket_balance(val) > 0 && std::getline(in, raw)) {
      ++lineno;
      val += " " + trim(strip_comment(raw));
    }
    if (key.empty()) throw ConfigError("config line " + std::to_string(start) + ": empty key");
    if (current->count(key))
      throw ConfigError("config line " + std::to_string(start) + ": duplicate key " + key);
    (*current)[key] = ValueParser(val, start).parse();
  }
  return doc;
}

const char* model_name(ModelKind m) {
  switch (m) {
    case ModelKind::TransmonCavity: return "transmon_cavity";
    case ModelKind::ParametricDuffing: return "parametric_duffing";
    default: return "oracle";
  }
}

std::vector<double> AxisSpec::values() const {
  std::vector<double> v(count);
  for (int i = 0; i < count; ++i) {
    const double t = count > 1 ? double(i) / (count - 1) : 0.0;
    v[i] = log_scale ? std::exp(std::log(min) + t * (std::log(max) - std::log(min)))
                     : min + t * (max - min);
  }
  if (count > 1) v.back() = max;
  return v;
}

SweepConfig parse_config(const std::string& text) {
  const TomlDocument doc = parse_toml(text);
  SweepConfig cfg;
  cfg.source = text;
  check_keys(doc.root,
             {"schema_version", "name", "model", "oracle_target", "observables", "workers", "oracle_dims"},
             "top level");
  cfg.schema_version = get_int(doc.root, "schema_version", -1);
  if (cfg.schema_version != kSchemaVersion)
    throw ConfigError("schema_version must be " + std::to_string(kSchemaVersion));
  cfg.name = get_string(doc.root, "name", cfg.name);
  cfg.model = parse_model(get_string(doc.root, "model", ""));
  cfg.oracle_target = parse_model(get_string(doc.root, "oracle_target", "parametric_duffing"));
  if (cfg.oracle_target == ModelKind::Oracle) throw ConfigError("oracle_target must be a model");
  cfg.observables = get_strings(doc.root, "observables", {});
  if (cfg.observables.empty()) throw ConfigError("no observables requested");
  cfg.workers = get_int(doc.root, "workers", 1);
  if (cfg.workers < 0) throw ConfigError("workers must be >= 0");
  if (const auto* d = find(doc.root, "oracle_dims")) {
    if (d->kind != TomlValue::Kind::Array) throw ConfigError("oracle_dims must be a list");
    cfg.oracle_dims.clear();
    for (const auto& e : d->array) {
      if (e.kind != TomlValue::Kind::Number || e.number < 2) throw ConfigError("bad oracle_dims");
      cfg.oracle_dims.push_back(int(e.number));
    }
  }

  for (const auto& [name, table] : doc.tables) {
    if (name != "params" && name != "qgrid" && name != "output" && name != "oracle_check")
      throw ConfigError("unknown table [" + name + "]");
  }
  for (const auto& [name, arr] : doc.table_arrays)
    if (name != "axis") throw ConfigError("unknown table array [[" + name + "]]");

  const ModelKind pm = cfg.model == ModelKind::Oracle ? cfg.oracle_target : cfg.model;
  if (auto it = doc.tables.find("params"); it != doc.tables.end())
    for (const auto& [k, v] : it->second) {
      if (v.kind != TomlValue::Kind::Number) throw ConfigError("parameter '" + k + "' must be a number");
      cfg.fixed_params.emplace_back(k, v.number);
    }
  if (auto it = doc.table_arrays.find("axis"); it != doc.table_arrays.end())
    for (const auto& t : it->second) {
      check_keys(t, {"name", "min", "max", "count", "scale"}, "[[axis]]");
      AxisSpec a;
      a.name = get_string(t, "name", "");
      a.min = get_number(t, "min", NAN);
      a.max = get_number(t, "max", NAN);
      a.count = get_int(t, "count", 0);
      const std::string sc = get_string(t, "scale", "linear");
      if (sc != "linear" && sc != "log") throw ConfigError("axis scale must be linear or log");
      a.log_scale = sc == "log";
      if (a.name.empty()) throw ConfigError("axis needs a name");
      if (!std::isfinite(a.min) || !std::isfinite(a.max)) throw ConfigError("axis range must be finite");
      if (a.count < 2) throw ConfigError("axis count must be >= 2");
      if (a.log_scale && !(a.min > 0 && a.max > 0)) throw ConfigError("log axis needs positive range");
      cfg.axes.push_back(a);
    }
  if (cfg.axes.size() > 2) throw ConfigError("at most two axes are supported");

  // every parameter name must resolve for the model
  {
    std::vector<std::pair<std::string, double>> probe = cfg.fixed_params;
    for (const auto& a : cfg.axes) probe.emplace_back(a.name, a.min);
    std::set<std::string> seen;
    for (const auto& [k, v] : probe)
      if (!seen.insert(k).second) throw ConfigError("parameter '" + k + "' given twice");
    (void)resolve_params(pm, probe);
  }

  if (auto it = doc.tables.find("qgrid"); it != doc.tables.end()) {
    check_keys(it->second, {"x_min", "x_max", "x_count", "y_min", "y_max", "y_count"}, "[qgrid]");
    cfg.qgrid.x = parse_grid_axis(it->second, "x", cfg.qgrid.x);
    cfg.qgrid.y = parse_grid_axis(it->second, "y", cfg.qgrid.y);
  }
  if (auto it = doc.tables.find("output"); it != doc.tables.end()) {
    const auto& t = it->second;
    check_keys(t, {"format", "path", "intensity", "color", "image", "timestamp"}, "[output]");
    cfg.output.formats = get_strings(t, "format", cfg.output.formats);
    for (const auto& f : cfg.output.formats)
      if (f != "csv" && f != "json" && f != "pgm") throw ConfigError("unknown output format '" + f + "'");
    cfg.output.path = get_string(t, "path", cfg.output.path);
    cfg.output.intensity = get_string(t, "intensity", cfg.output.intensity);
    if (cfg.output.intensity != "linear" && cfg.output.intensity != "log")
      throw ConfigError("intensity must be linear or log");
    cfg.output.color = get_bool(t, "color", false);
    cfg.output.image = get_string(t, "image", "");
    cfg.output.timestamp = get_bool(t, "timestamp", false);
  }
  if (auto it = doc.tables.find("oracle_check"); it != doc.tables.end()) {
    const auto& t = it->second;
    check_keys(t, {"enabled", "tolerance", "max_points", "seed"}, "[oracle_check]");
    cfg.oracle_check.enabled = get_bool(t, "enabled", false);
    cfg.oracle_check.tolerance = get_number(t, "tolerance", cfg.oracle_check.tolerance);
    cfg.oracle_check.max_points = get_int(t, "max_points", cfg.oracle_check.max_points);
    cfg.oracle_check.seed = std::uint64_t(get_number(t, "seed", 1));
    if (!(cfg.oracle_check.tolerance > 0) || cfg.oracle_check.max_points < 0)
      throw ConfigError("bad [oracle_check]");
  }
  for (const auto& o : cfg.observables) (void)observable_columns(cfg.model, o);
  return cfg;
}

SweepConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot read config '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

double to_mhz(double angular) { return angular / (2 * std::numbers::pi); }

PointParams resolve_params(ModelKind model,
                           const std::vector<std::pair<std::string, double>>& values) {
  if (model == ModelKind::Oracle) throw ConfigError("resolve_params needs a concrete model");
  const std::set<std::string> transmon_keys{"delta_c", "delta_ct", "g", "chi", "gamma_c",
                                            "gamma_t", "epsilon", "ej_over_ec"};
  const std::set<std::string> paramp_keys{"delta", "eps1", "eps2", "u", "gamma1", "gamma2"};
  const std::set<std::string> complex_keys{"epsilon", "eps1", "eps2"};
  const auto& keys = model == ModelKind::TransmonCavity ? transmon_keys : paramp_keys;

  struct Entry {
    double value;
    std::string unit;
  };
  std::map<std::string, Entry> base;
  std::map<std::string, double> phase;
  for (const auto& [k, v] : values) {
    std::string name = k, unit;
    for (const char* suffix : {"_mhz", "_g1", "_phase"}) {
      const std::string s = suffix;
      if (name.size() > s.size() && name.compare(name.size() - s.size(), s.size(), s) == 0) {
        unit = s.substr(1);
        name = name.substr(0, name.size() - s.size());
        break;
      }
    }
    if (!keys.count(name)) throw ConfigError("unknown parameter '" + k + "' for this model");
    if (unit == "phase") {
      if (!complex_keys.count(name)) throw ConfigError("'" + k + "': only drives carry a phase");
      phase[name] = v;
      continue;
    }
    if (unit == "g1" && model != ModelKind::ParametricDuffing)
      throw ConfigError("'" + k + "': _g1 units apply to the parametric model only");
    if (name == "ej_over_ec" && !unit.empty()) throw ConfigError("ej_over_ec is dimensionless");
    if (base.count(name)) throw ConfigError("parameter '" + name + "' given twice");
    base[name] = {v, unit};
  }
  auto angular = [&](const std::string& name, double gamma1, double def) {
    auto it = base.find(name);
    if (it == base.end()) return def;
    const auto& e = it->second;
    if (e.unit == "mhz") return 2 * std::numbers::pi * e.value;
    if (e.unit == "g1") return e.value * gamma1;
    return e.value;
  };
  auto drive = [&](const std::string& name, double gamma1) {
    const double mag = angular(name, gamma1, 0.0);
    auto it = phase.find(name);
    return std::polar(1.0, it == phase.end() ? 0.0 : it->second) * mag;
  };
  PointParams out;
  if (model == ModelKind::TransmonCavity) {
    auto& t = out.transmon;
    t.delta_c = angular("delta_c", 0, t.delta_c);
    t.delta_ct = angular("delta_ct", 0, t.delta_ct);
    t.g = angular("g", 0, t.g);
    t.chi = angular("chi", 0, t.chi);
    t.gamma_c = angular("gamma_c", 0, t.gamma_c);
    t.gamma_t = angular("gamma_t", 0, t.gamma_t);
    t.epsilon = drive("epsilon", 0);
    if (auto it = base.find("ej_over_ec"); it != base.end()) out.ej_over_ec = it->second.value;
  } else {
    auto& p = out.paramp;
    if (base.count("gamma1") && base["gamma1"].unit == "g1")
      throw ConfigError("gamma1 cannot be given in units of itself");
    p.gamma1 = angular("gamma1", 0, p.gamma1);
    p.delta = angular("delta", p.gamma1, p.delta);
    p.u = angular("u", p.gamma1, p.u);
    p.gamma2 = angular("gamma2", p.gamma1, p.gamma2);
    p.eps1 = drive("eps1", p.gamma1);
    p.eps2 = drive("eps2", p.gamma1);
  }
  return out;
}

}  // namespace steady
