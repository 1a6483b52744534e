#include "steady/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <random>
#include <sstream>
#include <thread>

#include "steady/errors.hpp"
#include "steady/kernels.hpp"
#include "steady/lindblad_oracle.hpp"
#include "steady/parametric_duffing.hpp"
#include "steady/transmon_cavity.hpp"

namespace steady {

namespace {

struct ObsName {
  std::string head;
  std::vector<int> ints;
  std::string text;
};

ObsName split_observable(const std::string& obs) {
  ObsName o;
  const size_t c = obs.find(':');
  o.head = obs.substr(0, c);
  if (c == std::string::npos) return o;
  o.text = obs.substr(c + 1);
  if (o.head == "expect") return o;
  std::stringstream ss(o.text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    try {
      size_t used = 0;
      const int v = std::stoi(part, &used);
      if (used != part.size() || v < 0) throw std::invalid_argument("");
      o.ints.push_back(v);
    } catch (const std::logic_error&) {
      throw ConfigError("bad observable arguments in '" + obs + "'");
    }
  }
  return o;
}

std::string ladder_column(const std::string& ops) {
  std::string s = "expect";
  std::stringstream ss(ops);
  std::string tok;
  while (ss >> tok) {
    s += "_";
    s += tok[0];
    if (tok.size() > 1) s += "d";
  }
  return s;
}

void need(const ObsName& o, size_t n, const std::string& obs) {
  if (o.ints.size() != n) throw ConfigError("observable '" + obs + "' needs " + std::to_string(n) + " integer argument(s)");
}

std::vector<std::string> complex_cols(const std::string& base) { return {base + "_re", base + "_im"}; }

const std::vector<std::string> kCatCols{"cat_mean_photons", "cat_peak_value", "cat_bridge_value",
                                        "cat_bridge_ratio", "cat_peak1_x",    "cat_peak1_y",
                                        "cat_peak2_x",      "cat_peak2_y"};
const std::vector<std::string> kQCols{"q_max", "q_norm", "q_local_maxima"};

}  // namespace

std::vector<std::string> observable_columns(ModelKind model, const std::string& obs) {
  const ObsName o = split_observable(obs);
  const std::string& h = o.head;
  if (h == "qgrid") {
    need(o, 0, obs);
    return kQCols;
  }
  if (h == "pn") {
    need(o, 1, obs);
    if (model == ModelKind::Oracle) throw ConfigError("pn is not available for the oracle model");
    std::vector<std::string> c;
    for (int n = 0; n <= o.ints[0]; ++n) c.push_back("pn_" + std::to_string(n));
    return c;
  }
  if (model == ModelKind::ParametricDuffing) {
    if (h == "moment") {
      need(o, 2, obs);
      return complex_cols("moment_" + std::to_string(o.ints[0]) + "_" + std::to_string(o.ints[1]));
    }
    if (h == "n_photons" || h == "abs_c") return {h};
    if (h == "dxmin") return {"dxmin", "theta_star"};
    if (h == "phase") return {"phase", "stable_points", "on_boundary"};
    if (h == "cat") return kCatCols;
  } else if (model == ModelKind::TransmonCavity) {
    if (h == "moment_b" || h == "moment_a") {
      need(o, 2, obs);
      return complex_cols(h + "_" + std::to_string(o.ints[0]) + "_" + std::to_string(o.ints[1]));
    }
    if (h == "abs_a" || h == "abs_b" || h == "ada" || h == "bdb" || h == "R") return {h};
    if (h == "peaks" || h == "multiphoton_peaks") {
      need(o, 1, obs);
      std::vector<std::string> c;
      for (int i = 0; i < 3; ++i)
        c.push_back(h + "_" + std::to_string(o.ints[0]) + "_" + std::to_string(i) + "_mhz");
      return c;
    }
    if (h == "validity") return {"levels_in_well", "mean_excitation", "valid"};
  } else {
    if (h == "expect") {
      if (o.text.empty()) throw ConfigError("expect needs a ladder string");
      return complex_cols(ladder_column(o.text));
    }
    if (h == "converged") return {"dims_used", "truncation_converged"};
  }
  throw ConfigError("unknown observable '" + obs + "' for model " + model_name(model));
}

std::vector<double> SweepResult::coordinates(size_t i) const {
  std::vector<double> c(axis_values.size());
  for (size_t a = axis_values.size(); a-- > 0;) {
    const size_t n = axis_values[a].size();
    c[a] = axis_values[a][i % n];
    i /= n;
  }
  return c;
}

int SweepResult::column(const std::string& name) const {
  auto it = std::find(columns.begin(), columns.end(), name);
  return it == columns.end() ? -1 : int(it - columns.begin());
}

namespace {

class PointEvaluator {
 public:
  PointEvaluator(const SweepConfig& cfg, const PointParams& pp) : cfg_(cfg), pp_(pp) {}

  std::vector<double> eval(const std::string& obs, std::optional<QGrid>& grid) {
    const ObsName o = split_observable(obs);
    const std::string& h = o.head;
    if (cfg_.model == ModelKind::Oracle) return eval_oracle(o, grid);
    if (h == "qgrid") {
      grid = solution().qfunction(cfg_.qgrid);
      return q_summary(*grid);
    }
    if (h == "pn") {
      std::vector<double> v;
      for (int n = 0; n <= o.ints[0]; ++n) v.push_back(solution().pn(n));
      return v;
    }
    if (cfg_.model == ModelKind::ParametricDuffing) return eval_paramp(o);
    return eval_transmon(o);
  }

  int terms() const { return sol_ ? sol_->size() : terms_; }

 private:
  const PotentialSolution& solution() {
    if (!sol_) {
      sol_ = cfg_.model == ModelKind::ParametricDuffing ? paramp_solution(pp_.paramp, {}, 26)
                                                        : transmon_solution(pp_.transmon);
    }
    return *sol_;
  }

  static std::vector<double> cx(cplx v) { return {v.real(), v.imag()}; }

  static std::vector<double> q_summary(const QGrid& q) {
    return {grid_argmax(q).value, q.normalization_estimate, double(local_maxima(q).size())};
  }

  std::vector<double> eval_paramp(const ObsName& o) {
    const auto& p = pp_.paramp;
    const std::string& h = o.head;
    if (h == "moment") return cx(solution().moment(o.ints[0], o.ints[1]));
    if (h == "n_photons") return {solution().moment(1, 1).real()};
    if (h == "abs_c") return {std::abs(solution().moment(0, 1))};
    if (h == "dxmin") {
      const auto m = min_quadrature_uncertainty(p);
      return {m.value, m.theta_star};
    }
    if (h == "phase") {
      const auto fp = classical_fixed_points(p);
      int stable = 0;
      for (const auto& x : fp.points) stable += x.stable;
      return {double(int(fp.phase)), double(stable), fp.on_boundary ? 1.0 : 0.0};
    }
    if (h == "cat") {
      const auto c = cat_metrics(p, cfg_.qgrid);
      return {c.mean_photons,
              c.peak_value,
              c.bridge_value,
              c.bridge_ratio,
              c.peak_positions[0].real(),
              c.peak_positions[0].imag(),
              c.peak_positions[1].real(),
              c.peak_positions[1].imag()};
    }
    throw ConfigError("unhandled observable " + h);
  }

  std::vector<double> eval_transmon(const ObsName& o) {
    const auto& t = pp_.transmon;
    const std::string& h = o.head;
    if (h == "moment_b") return cx(transmon_moment(t, o.ints[0], o.ints[1]));
    if (h == "moment_a") return cx(cavity_moment(t, o.ints[0], o.ints[1]));
    if (h == "abs_a") return {std::abs(cavity_moment(t, 0, 1))};
    if (h == "abs_b") return {std::abs(transmon_moment(t, 0, 1))};
    if (h == "ada") return {cavity_moment(t, 1, 1).real()};
    if (h == "bdb") return {transmon_moment(t, 1, 1).real()};
    if (h == "R") return {reflection(t)};
    if (h == "peaks" || h == "multiphoton_peaks") {
      const auto r = h == "peaks" ? predict_peaks(t, o.ints[0]) : predict_multiphoton_peaks(t, o.ints[0]);
      std::vector<double> v(3, NAN);
      for (size_t i = 0; i < r.size() && i < 3; ++i) v[i] = to_mhz(r[i]);
      return v;
    }
    if (h == "validity") {
      if (!(pp_.ej_over_ec > 0)) throw ConfigError("validity needs parameter ej_over_ec");
      const auto v = duffing_validity(t, pp_.ej_over_ec);
      return {v.levels_in_well, v.mean_excitation, v.valid ? 1.0 : 0.0};
    }
    throw ConfigError("unhandled observable " + h);
  }

  const oracle::SteadyDensityMatrix& oracle_state() {
    if (!state_) {
      if (cfg_.oracle_target == ModelKind::ParametricDuffing) {
        const auto p = pp_.paramp;
        auto build = [p](const std::vector<int>& d) { return oracle::paramp_spec(p, d[0]); };
        auto r = oracle::converged_solve(build, {"a+ a", "a a", "a"}, {cfg_.oracle_dims.at(0)});
        converged_ = r.truncation_converged;
        state_ = std::move(r.state);
      } else {
        std::vector<int> dims = cfg_.oracle_dims;
        if (dims.size() != 2) throw ConfigError("transmon oracle needs oracle_dims = [cavity, transmon]");
        state_ = oracle::steady_state(
            oracle::build_liouvillian(oracle::transmon_cavity_spec(pp_.transmon, dims)), dims);
        converged_ = false;
      }
      terms_ = int(state_->rho.rows());
    }
    return *state_;
  }

  std::vector<double> eval_oracle(const ObsName& o, std::optional<QGrid>& grid) {
    const auto& st = oracle_state();
    if (o.head == "expect") return cx(oracle::expectation(st, o.text));
    if (o.head == "converged") return {double(terms_), converged_ ? 1.0 : 0.0};
    if (o.head == "qgrid") {
      grid = oracle::qfunction_from_rho(oracle::reduced_density_matrix(st, 0), cfg_.qgrid);
      return q_summary(*grid);
    }
    throw ConfigError("unhandled observable " + o.head);
  }

  const SweepConfig& cfg_;
  PointParams pp_;
  std::optional<PotentialSolution> sol_;
  std::optional<oracle::SteadyDensityMatrix> state_;
  bool converged_ = false;
  int terms_ = 0;
};

OracleSpotCheck spot_check(const SweepConfig& cfg, const PointParams& pp, size_t index) {
  OracleSpotCheck chk;
  chk.index = index;
  const double tol = cfg.oracle_check.tolerance;
  auto rel = [](cplx a, cplx b) { return std::abs(a - b) / std::max(std::abs(b), 1e-9); };
  try {
    std::vector<std::pair<cplx, cplx>> pairs;
    if (cfg.model == ModelKind::ParametricDuffing) {
      const auto p = pp.paramp;
      const auto s = paramp_solution(p);
      auto build = [p](const std::vector<int>& d) { return oracle::paramp_spec(p, d[0]); };
      const auto r = oracle::converged_solve(build, {"a+ a", "a a", "a"}, {cfg.oracle_dims.at(0)});
      pairs = {{s.moment(1, 1), r.values[0]}, {s.moment(0, 2), r.values[1]}, {s.moment(0, 1), r.values[2]}};
      chk.detail = "n_photons, cc, c vs converged oracle dim " + std::to_string(r.dims_used[0]);
    } else if (cfg.model == ModelKind::TransmonCavity) {
      std::vector<int> dims = cfg.oracle_dims.size() == 2 ? cfg.oracle_dims : std::vector<int>{15, 8};
      const auto st = oracle::steady_state(
          oracle::build_liouvillian(oracle::transmon_cavity_spec(pp.transmon, dims)), dims);
      pairs = {{cavity_moment(pp.transmon, 0, 1), oracle::expectation(st, "a")},
               {transmon_moment(pp.transmon, 0, 1), oracle::expectation(st, "b")},
               {transmon_moment(pp.transmon, 1, 1), oracle::expectation(st, "b+ b")}};
      chk.detail = "a, b, bdb vs two-mode oracle";
    } else {
      chk.detail = "oracle model: nothing to compare";
      chk.passed = true;
      return chk;
    }
    for (const auto& [a, b] : pairs) chk.max_rel_error = std::max(chk.max_rel_error, rel(a, b));
    chk.passed = chk.max_rel_error <= tol;
  } catch (const Error& e) {
    chk.passed = false;
    chk.detail = std::string(error_kind_name(e.kind())) + ": " + e.what();
  }
  return chk;
}

}  // namespace

SweepResult run_sweep(const SweepConfig& cfg, int workers) {
  SweepResult res;
  for (const auto& a : cfg.axes) {
    res.axis_names.push_back(a.name);
    res.axis_values.push_back(a.values());
  }
  for (const auto& obs : cfg.observables) {
    const auto cols = observable_columns(cfg.model, obs);
    for (const auto& c : cols) {
      if (std::find(res.columns.begin(), res.columns.end(), c) != res.columns.end())
        throw ConfigError("observable '" + obs + "' requested twice");
      res.columns.push_back(c);
    }
  }
  size_t npts = 1;
  for (const auto& v : res.axis_values) npts *= v.size();
  res.points.resize(npts);
  const bool want_q = std::find(cfg.observables.begin(), cfg.observables.end(), "qgrid") !=
                      cfg.observables.end();
  res.qgrids.resize(want_q ? npts : 0);

  const ModelKind pm = cfg.model == ModelKind::Oracle ? cfg.oracle_target : cfg.model;
  auto params_at = [&](size_t i) {
    auto vals = cfg.fixed_params;
    const auto c = res.coordinates(i);
    for (size_t a = 0; a < c.size(); ++a) vals.emplace_back(res.axis_names[a], c[a]);
    return resolve_params(pm, vals);
  };

  auto work = [&](size_t i) {
    PointResult& pr = res.points[i];
    pr.values.assign(res.columns.size(), NAN);
    size_t col = 0;
    std::optional<PointParams> pp;
    try {
      pp = params_at(i);
    } catch (const Error& e) {
      pr.status = error_kind_name(e.kind());
      pr.message = e.what();
      return;
    }
    PointEvaluator ev(cfg, *pp);
    for (const auto& obs : cfg.observables) {
      const size_t width = observable_columns(cfg.model, obs).size();
      std::optional<QGrid> grid;
      try {
        const auto v = ev.eval(obs, grid);
        std::copy(v.begin(), v.end(), pr.values.begin() + col);
        if (grid && want_q) res.qgrids[i] = std::move(grid);
      } catch (const Error& e) {
        if (pr.status == "ok") {
          pr.status = error_kind_name(e.kind());
          pr.message = obs + ": " + e.what();
        }
      }
      col += width;
    }
    pr.series_terms = ev.terms();
  };

  int nw = workers > 0 ? workers : cfg.workers;
  if (nw <= 0) nw = int(std::max(1u, std::thread::hardware_concurrency()));
  nw = int(std::min<size_t>(size_t(nw), npts));
  if (nw <= 1) {
    for (size_t i = 0; i < npts; ++i) work(i);
  } else {
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < nw; ++w)
      pool.emplace_back([&] {
        for (size_t i = next++; i < npts; i = next++) work(i);
      });
    for (auto& t : pool) t.join();
  }

  if (cfg.oracle_check.enabled && cfg.oracle_check.max_points > 0) {
    std::mt19937_64 rng(cfg.oracle_check.seed);
    std::vector<size_t> idx(npts);
    for (size_t i = 0; i < npts; ++i) idx[i] = i;
    const size_t take = std::min<size_t>(npts, size_t(cfg.oracle_check.max_points));
    for (size_t i = 0; i < take; ++i) {
      const size_t j = i + size_t(rng() % (npts - i));
      std::swap(idx[i], idx[j]);
    }
    idx.resize(take);
    std::sort(idx.begin(), idx.end());
    for (size_t i : idx) {
      try {
        res.oracle_checks.push_back(spot_check(cfg, params_at(i), i));
      } catch (const Error& e) {
        res.oracle_checks.push_back({i, false, 0, e.what()});
      }
    }
  }

  res.manifest = {{"name", cfg.name},
                  {"model", model_name(cfg.model)},
                  {"schema_version", std::to_string(cfg.schema_version)},
                  {"code_version", STEADY_VERSION},
                  {"points", std::to_string(npts)},
                  {"intensity", cfg.output.intensity},
                  {"frequency_units", "MHz (nu = omega / 2 pi)"}};
  if (cfg.model == ModelKind::Oracle) res.manifest.emplace_back("oracle_target", model_name(cfg.oracle_target));
  return res;
}

}  // namespace steady
