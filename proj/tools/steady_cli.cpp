#include <CLI11.hpp>
#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <json.hpp>

#include "steady/config.hpp"
#include "steady/emit.hpp"
#include "steady/errors.hpp"
#include "steady/kernels.hpp"
#include "steady/sweep.hpp"
#include "steady/validation.hpp"

#ifndef STEADY_FIGURE_DIR
#define STEADY_FIGURE_DIR "configs/figures"
#endif

using namespace steady;

namespace {

int exit_code(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::Config: return 2;
    case ErrorKind::Io: return 3;
    default: return 4;
  }
}

void print_files(const std::vector<std::string>& files) {
  for (const auto& f : files) std::cout << "wrote " << f << "\n";
}

int cmd_sweep(const std::string& path, int workers, const std::string& out) {
  auto cfg = load_config(path);
  if (!out.empty()) cfg.output.path = out;
  const auto res = run_sweep(cfg, workers);
  print_files(emit(res, cfg));
  size_t failed = 0;
  for (const auto& p : res.points) failed += p.status != "ok";
  std::cout << res.size() << " points, " << failed << " with failures\n";
  for (const auto& c : res.oracle_checks)
    std::cout << (c.passed ? "oracle check PASS" : "oracle check FAIL") << " point " << c.index
              << " max rel err " << format_number(c.max_rel_error) << " (" << c.detail << ")\n";
  return 0;
}

int cmd_point(const std::string& path, const std::string& model, const std::vector<std::string>& sets,
              const std::vector<std::string>& observables) {
  SweepConfig cfg;
  if (!path.empty()) {
    cfg = load_config(path);
  } else {
    std::string text = "schema_version = 1\nmodel = \"" + model + "\"\nobservables = [\"qgrid\"]\n";
    cfg = parse_config(text);
    cfg.observables.clear();
  }
  cfg.axes.clear();
  for (const auto& s : sets) {
    const size_t eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + s + "'");
    const std::string key = s.substr(0, eq);
    double v;
    try {
      v = std::stod(s.substr(eq + 1));
    } catch (const std::logic_error&) {
      throw ConfigError("--set value for '" + key + "' is not a number");
    }
    auto it = std::find_if(cfg.fixed_params.begin(), cfg.fixed_params.end(),
                           [&](const auto& kv) { return kv.first == key; });
    if (it != cfg.fixed_params.end())
      it->second = v;
    else
      cfg.fixed_params.emplace_back(key, v);
  }
  if (!observables.empty()) cfg.observables = observables;
  if (cfg.observables.empty()) {
    if (cfg.model == ModelKind::TransmonCavity)
      cfg.observables = {"moment_b:0,1", "moment_b:1,1", "moment_b:0,2", "moment_b:2,2", "moment_a:0,1", "moment_a:1,1"};
    else if (cfg.model == ModelKind::ParametricDuffing)
      cfg.observables = {"moment:0,1", "moment:1,1", "moment:0,2", "moment:2,2"};
    else
      cfg.observables = {"expect:a", "expect:a+ a"};
  }
  const ModelKind pm = cfg.model == ModelKind::Oracle ? cfg.oracle_target : cfg.model;
  (void)resolve_params(pm, cfg.fixed_params);
  const auto res = run_sweep(cfg, 1);
  const auto& p = res.points.at(0);
  nlohmann::ordered_json j;
  j["model"] = model_name(cfg.model);
  nlohmann::ordered_json params;
  for (const auto& [k, v] : cfg.fixed_params) params[k] = v;
  j["params"] = params;
  nlohmann::ordered_json vals;
  for (size_t c = 0; c < res.columns.size(); ++c) {
    const double v = p.values[c];
    vals[res.columns[c]] = std::isfinite(v) ? nlohmann::ordered_json(v) : nlohmann::ordered_json(nullptr);
  }
  j["values"] = vals;
  j["series_terms"] = p.series_terms;
  j["status"] = p.status;
  if (p.status != "ok") j["message"] = p.message;
  std::cout << j.dump(2) << "\n";
  return p.status == "ok" ? 0 : 4;
}

int cmd_phase_diagram(double dmin, double dmax, double emin, double emax, int count, double u, double gamma1,
                      const std::string& out, int workers) {
  SweepConfig cfg = parse_config(
      "schema_version = 1\nmodel = \"parametric_duffing\"\nobservables = [\"phase\"]\n");
  cfg.name = "phase_diagram";
  cfg.fixed_params = {{"gamma1", gamma1}, {"u", u}};
  cfg.axes = {{"eps2", emin, emax, count, false}, {"delta", dmin, dmax, count, false}};
  cfg.output.formats = {"csv", "pgm"};
  cfg.output.path = out;
  cfg.output.image = "phase";
  cfg.output.color = true;
  cfg.source = "phase-diagram delta=[" + format_number(dmin) + "," + format_number(dmax) + "] eps2=[" +
               format_number(emin) + "," + format_number(emax) + "] count=" + std::to_string(count) +
               " u=" + format_number(u) + " gamma1=" + format_number(gamma1);
  const auto res = run_sweep(cfg, workers);
  print_files(emit(res, cfg));
  return 0;
}

int cmd_validate() {
  const auto checks = run_validation();
  int failed = 0;
  for (const auto& c : checks) {
    std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << "\n";
    failed += !c.passed;
  }
  std::cout << checks.size() - failed << "/" << checks.size() << " checks passed\n";
  return failed ? 1 : 0;
}

int cmd_figures(const std::string& dir, const std::string& out, int workers) {
  std::vector<std::filesystem::path> files;
  std::error_code ec;
  for (const auto& e : std::filesystem::directory_iterator(dir, ec))
    if (e.path().extension() == ".toml") files.push_back(e.path());
  if (ec) throw IoError("cannot list '" + dir + "'");
  if (files.empty()) throw IoError("no figure configs in '" + dir + "'");
  std::sort(files.begin(), files.end());
  for (const auto& f : files) {
    auto cfg = load_config(f.string());
    cfg.output.path = (std::filesystem::path(out) / f.stem()).string();
    const auto res = run_sweep(cfg, workers);
    print_files(emit(res, cfg));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Steady states of driven dissipative Kerr oscillators"};
  app.require_subcommand(1);
  std::string isa;
  app.add_option("--isa", isa, "force kernel ISA (scalar|avx2)");

  auto* sweep = app.add_subcommand("sweep", "run a parameter sweep from a config file");
  std::string sweep_cfg, sweep_out;
  int workers = -1;
  sweep->add_option("config", sweep_cfg, "config file")->required();
  sweep->add_option("--out", sweep_out, "output path prefix (overrides the config)");
  sweep->add_option("--workers", workers, "worker threads (0 = all cores)");

  auto* point = app.add_subcommand("point", "evaluate observables at one parameter set, print JSON");
  std::string point_cfg, point_model = "parametric_duffing";
  std::vector<std::string> sets, observables;
  point->add_option("config", point_cfg, "config file (axes are ignored)");
  point->add_option("--model", point_model, "model when no config is given");
  point->add_option("--set", sets, "parameter key=value (repeatable)");
  point->add_option("--observable", observables, "observable name (repeatable)");

  auto* phase = app.add_subcommand("phase-diagram", "classical fixed-point phases over (delta, eps2)");
  double dmin = -5, dmax = 5, emin = 0, emax = 5, u = 1, gamma1 = 1;
  int count = 200;
  std::string phase_out = "out/phase_diagram";
  phase->add_option("--delta-min", dmin);
  phase->add_option("--delta-max", dmax);
  phase->add_option("--eps2-min", emin);
  phase->add_option("--eps2-max", emax);
  phase->add_option("--count", count);
  phase->add_option("--u", u, "Kerr strength (same units as gamma1)");
  phase->add_option("--gamma1", gamma1);
  phase->add_option("--out", phase_out);
  phase->add_option("--workers", workers);

  app.add_subcommand("validate", "analytic results against the Lindblad oracle");

  auto* figs = app.add_subcommand("figures", "regenerate all bundled figure outputs");
  std::string fig_dir = STEADY_FIGURE_DIR, fig_out = "out/figures";
  figs->add_option("--configs", fig_dir, "directory of figure configs");
  figs->add_option("--out", fig_out, "output directory");
  figs->add_option("--workers", workers);

  CLI11_PARSE(app, argc, argv);
  try {
    if (isa == "scalar") kernels::force_isa(kernels::Isa::Scalar);
    else if (isa == "avx2") kernels::force_isa(kernels::Isa::Avx2);
    else if (!isa.empty()) throw ConfigError("--isa must be scalar or avx2");
    if (*sweep) return cmd_sweep(sweep_cfg, workers, sweep_out);
    if (*point) return cmd_point(point_cfg, point_model, sets, observables);
    if (*phase) return cmd_phase_diagram(dmin, dmax, emin, emax, count, u, gamma1, phase_out, workers);
    if (app.got_subcommand("validate")) return cmd_validate();
    if (*figs) return cmd_figures(fig_dir, fig_out, workers);
  } catch (const Error& e) {
    std::cerr << "error: " << error_kind_name(e.kind()) << ": " << e.what() << "\n";
    return exit_code(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 5;
  }
  return 0;
}
