#include "steady/parametric_duffing.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "steady/errors.hpp"

namespace steady {

namespace {

const cplx I(0, 1);
constexpr double kRescaleHi = 1e150;
constexpr double kRescaleLo = 1e-150;

}  // namespace

void validate(const ParampParams& p) {
  auto finite = [](double v) { return std::isfinite(v); };
  if (!finite(p.delta) || !finite(p.u) || !finite(p.gamma1) || !finite(p.gamma2) ||
      !finite(p.eps1.real()) || !finite(p.eps1.imag()) || !finite(p.eps2.real()) ||
      !finite(p.eps2.imag()))
    throw DomainError("parametric Duffing parameters must be finite");
  if (!(p.gamma1 > 0)) throw DomainError("gamma1 must be > 0");
  if (p.gamma2 < 0) throw DomainError("gamma2 must be >= 0");
  if (p.gamma2 == 0 && p.u == 0) throw DomainError("kappa2 = gamma2 + i u must be nonzero");
}

DerivedParampParams derived_params(const ParampParams& p) {
  validate(p);
  DerivedParampParams d;
  d.kappa1 = p.gamma1 + I * p.delta;
  d.kappa2 = p.gamma2 + I * p.u;
  d.a_const = d.kappa1 / d.kappa2;
  d.s = std::sqrt(p.eps2 / d.kappa2);
  d.b_const = d.s == 0.0 ? cplx(INFINITY, 0) : -p.eps1 / (d.kappa2 * d.s);
  if (p.eps1 == 0.0) d.b_const = 0;
  return d;
}

PotentialSolution paramp_solution(const ParampParams& p, const SeriesControl& ctl,
                                  int min_len) {
  const auto d = derived_params(p);
  if (p.eps1 == 0.0 && p.eps2 == 0.0) return PotentialSolution::vacuum();
  // h_k = (sqrt2 s)^k mu_k / sqrt(k!) with mu_k = (-1)^k 2F1(-k, A-B; 2A; 2).
  // Written through B s = -eps1/kappa2 and s^2 = eps2/kappa2, so no square-root
  // branch enters and eps2 = 0 reduces to the coherently driven Kerr sequence.
  const cplx two_a = 2.0 * d.a_const;
  const cplx bs = -p.eps1 / d.kappa2;
  const cplx s2 = p.eps2 / d.kappa2;
  const double r2 = std::sqrt(2.0);
  std::vector<cplx> mant{1.0};
  std::vector<double> scale{0.0};
  if (near_nonpositive_integer(two_a)) throw PoleError("paramp: 2A is a nonpositive integer");
  cplx prev = 1.0, cur = -r2 * bs / d.a_const;
  double lscale = 0;
  SequenceTail tail(min_len);
  tail.done(0, 0.0);
  for (int k = 1; k < ctl.max_terms; ++k) {
    mant.push_back(cur);
    scale.push_back(lscale);
    const double lh = std::abs(cur) > 0 ? std::log(std::abs(cur)) + lscale : -INFINITY;
    if (tail.done(k, lh)) return PotentialSolution::from_scaled(mant, scale);
    const cplx den = two_a + double(k);
    if (near_nonpositive_integer(den)) throw PoleError("paramp: 2A + k is a nonpositive integer");
    const cplx next = (-2.0 * r2 * bs * cur + 2.0 * s2 * std::sqrt(double(k)) * prev) /
                      (den * std::sqrt(double(k) + 1));
    prev = cur;
    cur = next;
    const double mag = std::max(std::abs(prev), std::abs(cur));
    if (mag > kRescaleHi || (mag > 0 && mag < kRescaleLo)) {
      const double f = 1 / mag;
      prev *= f;
      cur *= f;
      lscale += std::log(mag);
    }
  }
  throw NonConvergence("paramp: sequence did not decay within max_terms");
}

cplx moment(const ParampParams& p, int m, int n, const SeriesControl& ctl) {
  if (m < 0 || n < 0) throw DomainError("moment: negative order");
  if (m == 0 && n == 0) return 1;
  return paramp_solution(p, ctl, m + n + 10).moment(m, n);
}

MomentTable moment_table(const ParampParams& p, int max_order, const SeriesControl& ctl) {
  const auto s = paramp_solution(p, ctl, 2 * max_order + 10);
  MomentTable t;
  t.max_order = max_order;
  for (int m = 0; m <= max_order; ++m)
    for (int n = m; n <= max_order; ++n) {
      const cplx v = (m == 0 && n == 0) ? cplx(1) : s.moment(m, n);
      t.entries[{m, n}] = v;
      t.entries[{n, m}] = std::conj(v);
    }
  for (int m = 0; m <= max_order; ++m) t.entries[{m, m}] = t.entries[{m, m}].real();
  return t;
}

double pn(const ParampParams& p, int n, const SeriesControl& ctl) {
  return paramp_solution(p, ctl, n + 10).pn(n);
}

QGrid qfunction(const ParampParams& p, const GridSpec& grid, const SeriesControl& ctl) {
  return paramp_solution(p, ctl).qfunction(grid);
}

const char* phase_name(Phase ph) {
  switch (ph) {
    case Phase::One: return "One";
    case Phase::Two: return "Two";
    default: return "Three";
  }
}

std::array<double, 4> mean_field_jacobian(const ParampParams& p, cplx alpha) {
  const cplx kappa1 = p.gamma1 + I * p.delta;
  const cplx dp = -2.0 * I * p.u * std::norm(alpha) - kappa1;  // d f / d alpha
  const cplx dq = p.eps2 - I * p.u * alpha * alpha;           // d f / d conj(alpha)
  const cplx sum = dp + dq, dif = I * (dp - dq);
  return {sum.real(), dif.real(), sum.imag(), dif.imag()};
}

std::array<cplx, 2> eigenvalues_2x2(const std::array<double, 4>& j) {
  const double tr = j[0] + j[3], det = j[0] * j[3] - j[1] * j[2];
  const cplx disc = std::sqrt(cplx(tr * tr / 4 - det, 0));
  return {tr / 2 - disc, tr / 2 + disc};
}

FixedPointSet classical_fixed_points(const ParampParams& p) {
  validate(p);
  if (p.eps1 != 0.0 || p.gamma2 != 0)
    throw DomainError("classical_fixed_points: requires eps1 = 0 and gamma2 = 0");
  if (p.u == 0) throw DomainError("classical_fixed_points: requires u != 0");
  FixedPointSet out;
  const double e2 = std::abs(p.eps2);
  const double scale = std::max({p.gamma1, std::abs(p.delta), e2});
  auto add = [&](cplx alpha) {
    FixedPoint fp;
    fp.alpha = alpha;
    fp.eigenvalues = eigenvalues_2x2(mean_field_jacobian(p, alpha));
    const double top = std::max(fp.eigenvalues[0].real(), fp.eigenvalues[1].real());
    fp.stable = top < 0;
    if (std::abs(top) <= 1e-12 * scale) out.on_boundary = true;
    out.points.push_back(fp);
  };
  add(0.0);
  if (e2 >= p.gamma1) {
    const double disc = std::sqrt(e2 * e2 - p.gamma1 * p.gamma1);
    std::vector<double> r2s{(-p.delta + disc) / p.u};
    if (disc > 0) r2s.push_back((-p.delta - disc) / p.u);
    for (double r2 : r2s) {
      if (!(r2 > 0)) continue;
      const cplx e = (p.gamma1 + I * (p.delta + p.u * r2)) / p.eps2;  // exp(-2i phi)
      const double phi = -0.5 * std::arg(e);
      const cplx alpha = std::sqrt(r2) * std::polar(1.0, phi);
      add(alpha);
      add(-alpha);
    }
  }
  int stable = 0;
  for (const auto& fp : out.points) stable += fp.stable;
  out.phase = stable >= 3 ? Phase::Three : stable == 2 ? Phase::Two : Phase::One;
  return out;
}

QuadratureMin min_quadrature_uncertainty(const ParampParams& p, const SeriesControl& ctl) {
  const auto s = paramp_solution(p, ctl);
  const double n = s.moment(1, 1).real();
  const cplx cc = s.moment(0, 2);
  QuadratureMin r;
  r.value = n - std::abs(cc) + 0.5;
  r.theta_star = cc == 0.0 ? 0.0 : 0.5 * (std::numbers::pi - std::arg(cc));
  return r;
}

CatMetrics cat_metrics(const ParampParams& p, const GridSpec& grid, const SeriesControl& ctl) {
  const auto s = paramp_solution(p, ctl);
  const QGrid q = s.qfunction(grid);
  const auto peaks = local_maxima(q);
  if (peaks.size() < 2) throw DegenerateState("cat_metrics: fewer than two Q maxima");
  const auto& a = peaks[0];
  const auto& b = peaks[1];
  if (std::max(std::abs(a.ix - b.ix), std::abs(a.iy - b.iy)) < 2)
    throw DegenerateState("cat_metrics: maxima closer than two grid cells");
  CatMetrics m;
  m.peak_positions = {cplx(q.x_axis[a.ix], q.y_axis[a.iy]), cplx(q.x_axis[b.ix], q.y_axis[b.iy])};
  m.peak_value = std::min(a.value, b.value);
  constexpr int kSamples = 401;
  std::vector<cplx> line(kSamples);
  for (int i = 0; i < kSamples; ++i) {
    const double t = double(i) / (kSamples - 1);
    line[i] = m.peak_positions[0] + t * (m.peak_positions[1] - m.peak_positions[0]);
  }
  const auto vals = s.q_points(line);
  m.bridge_value = *std::min_element(vals.begin(), vals.end());
  m.bridge_ratio = m.bridge_value / m.peak_value;
  m.mean_photons = s.moment(1, 1).real();
  return m;
}

}  // namespace steady
