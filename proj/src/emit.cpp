#include "steady/emit.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "steady/errors.hpp"

namespace steady {

namespace {

std::vector<std::pair<std::string, std::string>> manifest_lines(const SweepResult& r,
                                                                const SweepConfig& cfg) {
  auto m = r.manifest;
  if (cfg.output.timestamp) {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    m.emplace_back("timestamp", buf);
  }
  return m;
}

void write_manifest(std::ostringstream& out, const SweepResult& r, const SweepConfig& cfg) {
  for (const auto& [k, v] : manifest_lines(r, cfg)) out << "# " << k << ": " << v << "\n";
  std::istringstream src(cfg.source);
  std::string line;
  while (std::getline(src, line)) out << "# config: " << line << "\n";
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string o = "\"";
  for (char c : s) {
    if (c == '"') o += '"';
    o += c == '\n' ? ' ' : c;
  }
  return o + "\"";
}

nlohmann::ordered_json json_number(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string sweep_csv(const SweepResult& r, const SweepConfig& cfg) {
  std::ostringstream out;
  write_manifest(out, r, cfg);
  for (const auto& a : r.axis_names) out << a << ",";
  for (const auto& c : r.columns) out << c << ",";
  out << "series_terms,status\n";
  for (size_t i = 0; i < r.size(); ++i) {
    for (double c : r.coordinates(i)) out << format_number(c) << ",";
    for (double v : r.points[i].values) out << format_number(v) << ",";
    const auto& p = r.points[i];
    out << p.series_terms << "," << csv_escape(p.status == "ok" ? p.status : p.status + ": " + p.message)
        << "\n";
  }
  return out.str();
}

std::string sweep_json(const SweepResult& r, const SweepConfig& cfg) {
  nlohmann::ordered_json j;
  nlohmann::ordered_json man;
  for (const auto& [k, v] : manifest_lines(r, cfg)) man[k] = v;
  man["config"] = cfg.source;
  j["manifest"] = man;
  j["axes"] = nlohmann::ordered_json::array();
  for (size_t a = 0; a < r.axis_names.size(); ++a)
    j["axes"].push_back({{"name", r.axis_names[a]}, {"values", r.axis_values[a]}});
  j["columns"] = r.columns;
  auto rows = nlohmann::ordered_json::array();
  for (size_t i = 0; i < r.size(); ++i) {
    const auto& p = r.points[i];
    nlohmann::ordered_json row;
    row["coordinates"] = r.coordinates(i);
    auto vals = nlohmann::ordered_json::array();
    for (double v : p.values) vals.push_back(json_number(v));
    row["values"] = vals;
    row["series_terms"] = p.series_terms;
    row["status"] = p.status;
    if (p.status != "ok") row["message"] = p.message;
    rows.push_back(row);
  }
  j["rows"] = rows;
  auto checks = nlohmann::ordered_json::array();
  for (const auto& c : r.oracle_checks)
    checks.push_back({{"index", c.index},
                      {"passed", c.passed},
                      {"max_rel_error", json_number(c.max_rel_error)},
                      {"detail", c.detail}});
  j["oracle_checks"] = checks;
  return j.dump(1) + "\n";
}

std::string qgrid_csv(const QGrid& q, const SweepResult& r, const SweepConfig& cfg, size_t point) {
  std::ostringstream out;
  write_manifest(out, r, cfg);
  out << "# point: " << point << "\n";
  out << "# truncation_order: " << q.truncation_order << "\n";
  out << "# normalization_estimate: " << format_number(q.normalization_estimate) << "\n";
  out << "x,y,q\n";
  for (int iy = 0; iy < q.ny(); ++iy)
    for (int ix = 0; ix < q.nx(); ++ix)
      out << format_number(q.x_axis[ix]) << "," << format_number(q.y_axis[iy]) << ","
          << format_number(q.at(ix, iy)) << "\n";
  return out.str();
}

std::vector<std::uint8_t> map_intensity(const std::vector<double>& f, int w, int h, bool log_scale) {
  double lo = INFINITY, hi = -INFINITY;
  for (double v : f)
    if (std::isfinite(v)) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  std::vector<std::uint8_t> pix(size_t(w) * h, 0);
  if (!std::isfinite(lo)) return pix;
  const bool use_log = log_scale && hi > 0;
  const double floor = hi * 1e-6;
  auto t_of = [&](double v) {
    if (use_log) {
      const double a = std::log10(std::max(v, floor)), l0 = std::log10(floor), l1 = std::log10(hi);
      return (a - l0) / (l1 - l0);
    }
    return hi > lo ? (v - lo) / (hi - lo) : 1.0;
  };
  for (int row = 0; row < h; ++row)
    for (int x = 0; x < w; ++x) {
      const double v = f[size_t(h - 1 - row) * w + x];
      if (!std::isfinite(v)) continue;
      pix[size_t(row) * w + x] = std::uint8_t(std::lround(255 * std::clamp(t_of(v), 0.0, 1.0)));
    }
  return pix;
}

std::string pgm_image(const std::vector<std::uint8_t>& pix, int w, int h) {
  std::string s = "P5\n" + std::to_string(w) + " " + std::to_string(h) + "\n255\n";
  s.append(pix.begin(), pix.end());
  return s;
}

std::string ppm_image(const std::vector<std::uint8_t>& pix, int w, int h) {
  std::string s = "P6\n" + std::to_string(w) + " " + std::to_string(h) + "\n255\n";
  auto ch = [](double x) { return char(std::lround(255 * std::clamp(x, 0.0, 1.0))); };
  for (std::uint8_t p : pix) {
    const double t = p / 255.0;
    s += ch(1.5 - std::abs(4 * t - 3));
    s += ch(1.5 - std::abs(4 * t - 2));
    s += ch(1.5 - std::abs(4 * t - 1));
  }
  return s;
}

void write_file(const std::string& path, const std::string& content) {
  const auto parent = std::filesystem::path(path).parent_path();
  std::error_code ec;
  if (!parent.empty()) std::filesystem::create_directories(parent, ec);
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot write '" + path + "'");
  f.write(content.data(), std::streamsize(content.size()));
  if (!f) throw IoError("write failed for '" + path + "'");
}

std::vector<std::string> emit(const SweepResult& r, const SweepConfig& cfg) {
  std::vector<std::string> files;
  const auto& fmt = cfg.output.formats;
  auto has = [&](const char* f) { return std::find(fmt.begin(), fmt.end(), f) != fmt.end(); };
  const std::string& base = cfg.output.path;
  auto put = [&](const std::string& path, const std::string& content) {
    write_file(path, content);
    files.push_back(path);
  };
  auto image = [&](const std::string& stem, const std::vector<double>& field, int w, int h) {
    const auto pix = map_intensity(field, w, h, cfg.output.intensity == "log");
    put(stem + ".pgm", pgm_image(pix, w, h));
    if (cfg.output.color) put(stem + ".ppm", ppm_image(pix, w, h));
  };
  if (has("csv")) put(base + ".csv", sweep_csv(r, cfg));
  if (has("json")) put(base + ".json", sweep_json(r, cfg));
  if (has("pgm") && r.axis_names.size() == 2 && !cfg.output.image.empty()) {
    const int col = r.column(cfg.output.image);
    if (col < 0) throw ConfigError("output.image names an unknown column '" + cfg.output.image + "'");
    // axis 0 varies along y (rows), axis 1 along x
    const int h = int(r.axis_values[0].size()), w = int(r.axis_values[1].size());
    std::vector<double> field(size_t(w) * h);
    for (size_t i = 0; i < r.size(); ++i) field[i] = r.points[i].values[col];
    image(base + "_" + cfg.output.image, field, w, h);
  }
  for (size_t i = 0; i < r.qgrids.size(); ++i) {
    if (!r.qgrids[i]) continue;
    const std::string stem = base + "_q" + (r.size() > 1 ? "_" + std::to_string(i) : "");
    if (has("csv") || has("json")) put(stem + ".csv", qgrid_csv(*r.qgrids[i], r, cfg, i));
    if (has("pgm")) image(stem, r.qgrids[i]->values, r.qgrids[i]->nx(), r.qgrids[i]->ny());
  }
  return files;
}

}  // namespace steady
