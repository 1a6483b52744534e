#include "steady/validation.hpp"

#include <cmath>
#include <cstdio>

#include "steady/errors.hpp"
#include "steady/lindblad_oracle.hpp"
#include "steady/parametric_duffing.hpp"
#include "steady/transmon_cavity.hpp"

namespace steady {

namespace {

std::string fmt(const char* f, double a, double b = 0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

double rel_err(cplx a, cplx b, double floor) { return std::abs(a - b) / std::max(std::abs(b), floor); }

CheckResult paramp_exactness(const std::string& name, const ParampParams& p) {
  const auto s = paramp_solution(p);
  auto build = [p](const std::vector<int>& d) { return oracle::paramp_spec(p, d[0]); };
  const std::vector<std::string> obs{"a", "a+ a", "a a", "a+ a a", "a+ a+ a a", "a a a a"};
  const auto r = oracle::converged_solve(build, obs, {30});
  const std::pair<int, int> idx[] = {{0, 1}, {1, 1}, {0, 2}, {1, 2}, {2, 2}, {0, 4}};
  double worst = 0;
  for (size_t i = 0; i < obs.size(); ++i) {
    const cplx a = s.moment(idx[i].first, idx[i].second);
    if (std::abs(a - r.values[i]) > 1e-9) worst = std::max(worst, rel_err(a, r.values[i], 1e-300));
  }
  const auto rho = r.state.rho;
  double pn_worst = 0;
  for (int n = 0; n <= 20 && n < rho.rows(); ++n)
    pn_worst = std::max(pn_worst, std::abs(s.pn(n) - rho(n, n).real()));
  GridSpec g{{-4, 4, 41}, {-4, 4, 41}};
  const auto qa = s.qfunction(g);
  const auto qo = oracle::qfunction_from_rho(rho, g);
  double q_worst = 0;
  for (size_t i = 0; i < qa.values.size(); ++i) q_worst = std::max(q_worst, std::abs(qa.values[i] - qo.values[i]));
  const bool ok = r.truncation_converged && worst <= 1e-6 && pn_worst <= 1e-9 && q_worst <= 1e-9;
  return {name, ok,
          fmt("moment rel %.2e, P(n) abs %.2e", worst, pn_worst) + fmt(", Q abs %.2e, dim %.0f", q_worst, r.dims_used[0])};
}

CheckResult kerr_exactness() {
  const double delta = 0.7, chi = -1.3, gamma = 0.5;
  const cplx eps(0.9, 0.4);
  const cplx c = (gamma + 2.0 * cplx(0, 1) * delta) / (cplx(0, 1) * chi);
  const cplx x = 2.0 * eps / (cplx(0, 1) * chi);
  const auto s = kerr_solution(c, x);
  auto build = [&](const std::vector<int>& d) { return oracle::kerr_spec(delta, chi, eps, gamma, d[0]); };
  const auto r = oracle::converged_solve(build, {"a", "a+ a", "a+ a+ a a"}, {30});
  const double e = std::max({rel_err(s.moment(0, 1), r.values[0], 1e-12), rel_err(s.moment(1, 1), r.values[1], 1e-12),
                             rel_err(s.moment(2, 2), r.values[2], 1e-12)});
  return {"coherently driven Kerr mode (eliminated-model form) vs oracle", r.truncation_converged && e < 1e-6,
          fmt("max rel %.2e", e)};
}

CheckResult linear_cavity() {
  TransmonCavityParams p;
  p.delta_c = 1.3;
  p.g = 0;
  p.chi = -1;
  p.gamma_c = 2;
  p.gamma_t = 0.1;
  p.epsilon = {0.8, -0.3};
  const std::vector<int> dims{30, 2};
  const auto st = oracle::steady_state(oracle::build_liouvillian(oracle::transmon_cavity_spec(p, dims)), dims);
  const cplx a = oracle::expectation(st, "a");
  const cplx exact = cavity_moment(p, 0, 1);
  const double e = std::abs(a - exact);
  return {"driven linear cavity (g = 0) coherent amplitude", e < 1e-10, fmt("abs err %.2e", e)};
}

CheckResult two_mode(double gamma_ratio, double tol) {
  TransmonCavityParams p;
  p.delta_ct = 2500;
  p.g = 350;
  p.chi = -220;
  p.gamma_c = 2;
  p.gamma_t = p.gamma_c / gamma_ratio;
  p.epsilon = 1;
  p.delta_c = predict_peaks(p, 0).front();
  const std::vector<int> dims{15, 8};
  const auto st = oracle::steady_state(oracle::build_liouvillian(oracle::transmon_cavity_spec(p, dims)), dims);
  const double ea = rel_err(cavity_moment(p, 0, 1), oracle::expectation(st, "a"), 1e-12);
  const double eb = rel_err(transmon_moment(p, 0, 1), oracle::expectation(st, "b"), 1e-12);
  const double en = rel_err(transmon_moment(p, 1, 1), oracle::expectation(st, "b+ b"), 1e-12);
  const double e = std::max({ea, eb, en});
  return {fmt("adiabatic elimination vs two-mode oracle, gamma_c/gamma_t = %.0f", gamma_ratio), e <= tol,
          fmt("max rel %.2e (a, b, bdb), tolerance %.2g", e, tol)};
}

}  // namespace

std::vector<CheckResult> run_validation() {
  std::vector<CheckResult> out;
  auto guarded = [&](const std::string& name, auto&& fn) {
    try {
      out.push_back(fn());
    } catch (const Error& e) {
      out.push_back({name, false, std::string(error_kind_name(e.kind())) + ": " + e.what()});
    }
  };
  ParampParams a;
  a.delta = -12;
  a.u = 5;
  a.eps2 = 2;
  guarded("paramp", [&] { return paramp_exactness("parametric Duffing, U=5, delta=-12, eps2=2", a); });
  ParampParams b;
  b.delta = 0.5;
  b.eps1 = {0.7, 0.2};
  b.eps2 = {1.3, -0.5};
  b.u = 2;
  b.gamma2 = 0.4;
  guarded("paramp2", [&] { return paramp_exactness("parametric Duffing with coherent drive and two-photon loss", b); });
  ParampParams c;
  c.u = 0.1;
  c.gamma2 = 0.5;
  c.eps2 = 2.28;
  guarded("paramp3", [&] { return paramp_exactness("parametric Duffing, cat regime", c); });
  guarded("kerr", kerr_exactness);
  guarded("linear", linear_cavity);
  guarded("two-mode", [] { return two_mode(20, 0.05); });
  return out;
}

}  // namespace steady
