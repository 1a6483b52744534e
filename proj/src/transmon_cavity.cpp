#include "steady/transmon_cavity.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "steady/errors.hpp"

namespace steady {

namespace {

const cplx I(0, 1);

double binom(int n, int k) {
  return std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0));
}

cplx ipow(cplx z, int k) {
  cplx r = 1;
  for (int i = 0; i < k; ++i) r *= z;
  return r;
}

}  // namespace

void validate(const TransmonCavityParams& p) {
  auto finite = [](double v) { return std::isfinite(v); };
  if (!finite(p.delta_c) || !finite(p.delta_ct) || !finite(p.g) || !finite(p.chi) ||
      !finite(p.gamma_c) || !finite(p.gamma_t) || !finite(p.epsilon.real()) ||
      !finite(p.epsilon.imag()))
    throw DomainError("transmon-cavity parameters must be finite");
  if (!(p.gamma_c > 0)) throw DomainError("gamma_c must be > 0");
  if (p.gamma_t < 0) throw DomainError("gamma_t must be >= 0");
  if (p.chi == 0) throw DomainError("chi = 0 is not supported by the analytic solution");
}

EffectiveDuffingParams effective_params(const TransmonCavityParams& p) {
  validate(p);
  EffectiveDuffingParams e;
  e.gamma_c_eff = p.gamma_c + 2.0 * I * p.delta_c;
  e.gamma_t_eff = p.gamma_t + 2.0 * I * p.delta_t() + 4.0 * p.g * p.g / e.gamma_c_eff;
  e.eps_eff = 2.0 * p.g * p.epsilon / e.gamma_c_eff;
  e.d = e.gamma_t_eff / (2.0 * I * p.chi);
  e.c = e.gamma_t_eff / (I * p.chi);
  e.x = 2.0 * e.eps_eff / (I * p.chi);
  return e;
}

cplx transmon_moment(const TransmonCavityParams& p, int n, int m,
                     const SeriesControl& ctl) {
  if (n < 0 || m < 0) throw DomainError("transmon_moment: negative order");
  const auto e = effective_params(p);
  if (n == 0 && m == 0) return 1;
  if (e.x == 0.0) return 0;
  const cplx c = e.c, cb = std::conj(e.c);
  const cplx lx = std::log(e.x);
  cplx lv = double(m) * lx + double(n) * std::conj(lx);
  for (int i = 0; i < m; ++i) {
    if (near_nonpositive_integer(c + double(i))) throw PoleError("transmon_moment: Gamma pole");
    lv -= std::log(c + double(i));
  }
  for (int i = 0; i < n; ++i) {
    if (near_nonpositive_integer(cb + double(i))) throw PoleError("transmon_moment: Gamma pole");
    lv -= std::log(cb + double(i));
  }
  lv += hyp0f2_log_ratio(c, cb, m, n, 2 * std::norm(e.x), ctl);
  return std::exp(lv);
}

MomentTable transmon_moment_table(const TransmonCavityParams& p, int max_order,
                                  const SeriesControl& ctl) {
  MomentTable t;
  t.max_order = max_order;
  for (int n = 0; n <= max_order; ++n)
    for (int m = n; m <= max_order; ++m) {
      const cplx v = transmon_moment(p, n, m, ctl);
      t.entries[{n, m}] = v;
      t.entries[{m, n}] = std::conj(v);
    }
  for (int n = 0; n <= max_order; ++n) t.entries[{n, n}] = t.entries[{n, n}].real();
  return t;
}

cplx cavity_moment(const TransmonCavityParams& p, int n, int m,
                   const SeriesControl& ctl) {
  if (n < 0 || m < 0) throw DomainError("cavity_moment: negative order");
  if (n + m > kCavityMaxOrder) throw DomainError("cavity_moment: order above 8");
  const auto e = effective_params(p);
  const cplx eps = p.epsilon, epsb = std::conj(p.epsilon);
  CompensatedSum s;
  for (int j = 0; j <= m; ++j)
    for (int k = 0; k <= n; ++k) {
      const cplx b = transmon_moment(p, k, j, ctl);
      if (b == 0.0) continue;
      s.add(binom(m, j) * binom(n, k) * ipow(eps, m - j) * ipow(epsb, n - k) *
            ipow(-p.g, j + k) * b);
    }
  return ipow(2.0 / e.gamma_c_eff, m) * ipow(2.0 / std::conj(e.gamma_c_eff), n) *
         s.value();
}

MomentTable cavity_moment_table(const TransmonCavityParams& p, int max_order,
                                const SeriesControl& ctl) {
  MomentTable t;
  t.max_order = max_order;
  for (int n = 0; n <= max_order; ++n)
    for (int m = n; m <= max_order; ++m) {
      if (n + m > kCavityMaxOrder) continue;
      const cplx v = cavity_moment(p, n, m, ctl);
      t.entries[{n, m}] = v;
      t.entries[{m, n}] = std::conj(v);
    }
  for (int n = 0; 2 * n <= kCavityMaxOrder && n <= max_order; ++n)
    t.entries[{n, n}] = t.entries[{n, n}].real();
  return t;
}

double reflection(const TransmonCavityParams& p, const SeriesControl& ctl) {
  if (p.epsilon == 0.0) throw DomainError("reflection: epsilon = 0");
  const cplx a = cavity_moment(p, 0, 1, ctl);
  return std::abs(1.0 - p.gamma_c * a / p.epsilon);
}

std::vector<double> dressed_resonance_roots(double p0, double g, double gamma_c) {
  // monic form: D^3 + b D^2 + c D + d
  const double b = p0, c = (gamma_c * gamma_c - 4 * g * g) / 4, d = p0 * gamma_c * gamma_c / 4;
  const double q = (3 * c - b * b) / 9;
  const double r = (9 * b * c - 27 * d - 2 * b * b * b) / 54;
  const double disc = q * q * q + r * r;
  std::vector<double> roots;
  if (disc > 0) {
    const double sq = std::sqrt(disc);
    roots.push_back(-b / 3 + std::cbrt(r + sq) + std::cbrt(r - sq));
  } else {
    const double rq = std::sqrt(-q);
    const double arg = q == 0 ? 0.0 : std::clamp(r / (rq * rq * rq), -1.0, 1.0);
    const double th = std::acos(arg);
    for (int i = 0; i < 3; ++i)
      roots.push_back(2 * rq * std::cos((th + 2 * std::numbers::pi * i) / 3) - b / 3);
  }
  for (double& x : roots)
    for (int it = 0; it < 4; ++it) {
      const double f = ((x + b) * x + c) * x + d;
      const double df = (3 * x + 2 * b) * x + c;
      if (df == 0) break;
      const double step = f / df;
      if (!std::isfinite(step)) break;
      x -= step;
    }
  std::sort(roots.begin(), roots.end());
  const double scale = std::max({std::abs(b), std::sqrt(std::abs(c)), 1e-300});
  roots.erase(std::unique(roots.begin(), roots.end(),
                          [&](double u, double v) { return std::abs(u - v) <= 1e-12 * scale; }),
              roots.end());
  return roots;
}

std::vector<double> predict_peaks(const TransmonCavityParams& p, int k) {
  validate(p);
  if (k < 0) throw DomainError("predict_peaks: k must be >= 0");
  return dressed_resonance_roots(p.delta_ct - k * p.chi, p.g, p.gamma_c);
}

std::vector<double> predict_multiphoton_peaks(const TransmonCavityParams& p, int k) {
  validate(p);
  if (k < 0) throw DomainError("predict_multiphoton_peaks: k must be >= 0");
  return dressed_resonance_roots(p.delta_ct + 0.5 * k * p.chi, p.g, p.gamma_c);
}

double transmon_pn(const TransmonCavityParams& p, int n, const SeriesControl& ctl) {
  if (n < 0) throw DomainError("transmon_pn: negative n");
  const auto e = effective_params(p);
  if (e.x == 0.0) return n == 0 ? 1.0 : 0.0;
  const cplx c = e.c, cb = std::conj(e.c);
  const double ax2 = std::norm(e.x);
  double lv = n * std::log(ax2) - std::lgamma(n + 1.0);
  for (int i = 0; i < n; ++i) {
    if (near_nonpositive_integer(c + double(i))) throw PoleError("transmon_pn: Gamma pole");
    lv -= 2 * std::log(std::abs(c + double(i)));
  }
  const cplx lr = log_hyp0f2(c + double(n), cb + double(n), ax2, ctl) - log_hyp0f2(c, cb, 2 * ax2, ctl);
  return std::exp(lv + lr.real());
}

PotentialSolution transmon_solution(const TransmonCavityParams& p, const SeriesControl& ctl) {
  const auto e = effective_params(p);
  return kerr_solution(e.c, e.x, ctl);
}

QGrid transmon_qfunction(const TransmonCavityParams& p, const GridSpec& grid,
                         const SeriesControl& ctl) {
  return transmon_solution(p, ctl).qfunction(grid);
}

DuffingValidity duffing_validity(const TransmonCavityParams& p, double ej_over_ec) {
  if (!(ej_over_ec > 0)) throw DomainError("duffing_validity: E_J/E_C must be > 0");
  DuffingValidity v;
  v.levels_in_well = std::sqrt(ej_over_ec / 8);
  v.mean_excitation = transmon_moment(p, 1, 1).real();
  v.valid = v.mean_excitation < v.levels_in_well;
  return v;
}

double ej_over_ec_from(double omega_t, double e_c) {
  if (!(e_c > 0) || !(omega_t > 0)) throw DomainError("ej_over_ec_from: need positive inputs");
  const double r = (omega_t + e_c) / e_c;
  return r * r / 8;
}

}  // namespace steady
