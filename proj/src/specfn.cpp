#include "steady/specfn.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <numbers>

#include "steady/errors.hpp"

namespace steady {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kRescaleAbove = 1e280;
constexpr double kRescaleBy = 1e-280;

const double kLanczos[9] = {0.99999999999980993,     676.5203681218851,
                            -1259.1392167224028,     771.32342877765313,
                            -176.61502916214059,     12.507343278686905,
                            -0.13857109526572012,    9.9843695780195716e-6,
                            1.5056327351493116e-7};

cplx lanczos_log_gamma(cplx z) {
  z -= 1.0;
  cplx x = kLanczos[0];
  for (int i = 1; i < 9; ++i) x += kLanczos[i] / (z + double(i));
  cplx t = z + 7.5;
  return 0.5 * std::log(2 * kPi) + (z + 0.5) * std::log(t) - t + std::log(x);
}

// log sin(pi z) for Im z >= 0, continuous in the closed upper half plane
cplx log_sinpi_upper(cplx z) {
  const cplx I(0, 1);
  return -I * kPi * z + std::log(1.0 - std::exp(2.0 * I * kPi * z)) +
         I * (kPi / 2) - std::log(2.0);
}

void check_pole(cplx z, const char* what) {
  if (near_nonpositive_integer(z))
    throw PoleError(std::string(what) + ": parameter at a nonpositive integer");
}

}  // namespace

const char* error_kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::Pole: return "PoleError";
    case ErrorKind::NonConvergence: return "NonConvergence";
    case ErrorKind::Domain: return "DomainError";
    case ErrorKind::Dimension: return "DimensionError";
    case ErrorKind::SingularSystem: return "SingularSystem";
    case ErrorKind::DegenerateState: return "DegenerateState";
    case ErrorKind::Config: return "ConfigError";
    case ErrorKind::Io: return "IoError";
    default: return "Error";
  }
}

void CompensatedSum::add(cplx v) {
  auto step = [](double& s, double& c, double x) {
    double t = s + x;
    if (std::abs(s) >= std::abs(x))
      c += (s - t) + x;
    else
      c += (x - t) + s;
    s = t;
  };
  step(sr_, cr_, v.real());
  step(si_, ci_, v.imag());
}

bool near_nonpositive_integer(cplx z, double tol) {
  if (std::abs(z.imag()) > tol) return false;
  if (z.real() > tol) return false;
  return std::abs(z.real() - std::round(z.real())) <= tol;
}

cplx log_gamma(cplx z) {
  check_pole(z, "log_gamma");
  if (z.real() >= 0.5) return lanczos_log_gamma(z);
  if (z.imag() < 0) return std::conj(log_gamma(std::conj(z)));
  return std::log(kPi) - log_sinpi_upper(z) - log_gamma(1.0 - z);
}

cplx complex_power(cplx base, cplx expnt) {
  if (base == cplx(0, 0)) {
    if (expnt.imag() == 0 && expnt.real() > 0) return 0;
    if (expnt == cplx(0, 0)) return 1;
    throw DomainError("complex_power: zero base with non-positive-real exponent");
  }
  if (expnt == cplx(0, 0)) return 1;
  return std::exp(expnt * std::log(base));
}

cplx hyp0f2_log_ratio(cplx a1, cplx a2, int m, int n, double x,
                      const SeriesControl& ctl) {
  if (m < 0 || n < 0) throw DomainError("hyp0f2_log_ratio: negative shift");
  if (!(x >= 0) || !std::isfinite(x))
    throw DomainError("hyp0f2_log_ratio: argument must be finite and >= 0");
  check_pole(a1, "hyp0f2_log_ratio");
  check_pole(a2, "hyp0f2_log_ratio");
  check_pole(a1 + double(m), "hyp0f2_log_ratio");
  check_pole(a2 + double(n), "hyp0f2_log_ratio");
  if ((m == 0 && n == 0) || x == 0) return 0;

  const cplx b1 = a1 + double(m), b2 = a2 + double(n);
  cplx tn = 1, td = 1;
  CompensatedSum sn, sd;
  cplx pn = 1, pd = 1;
  sn.add(1);
  sd.add(1);
  for (int k = 0; k < ctl.max_terms; ++k) {
    const double kk = k;
    const cplx rn = x / ((kk + 1) * (b1 + kk) * (b2 + kk));
    const cplx rd = x / ((kk + 1) * (a1 + kk) * (a2 + kk));
    tn *= rn;
    td *= rd;
    if (ctl.use_compensated_sum) {
      sn.add(tn);
      sd.add(td);
    } else {
      pn += tn;
      pd += td;
    }
    cplx vn = ctl.use_compensated_sum ? sn.value() : pn;
    cplx vd = ctl.use_compensated_sum ? sd.value() : pd;
    const bool past_peak = std::abs(rn) < 0.5 && std::abs(rd) < 0.5;
    if (past_peak && std::abs(tn) <= ctl.rel_tol * std::abs(vn) &&
        std::abs(td) <= ctl.rel_tol * std::abs(vd))
      return std::log(vn / vd);
    if (std::max(std::abs(vn), std::abs(vd)) > kRescaleAbove) {
      tn *= kRescaleBy;
      td *= kRescaleBy;
      CompensatedSum a, b;
      a.add(vn * kRescaleBy);
      b.add(vd * kRescaleBy);
      sn = a;
      sd = b;
      pn *= kRescaleBy;
      pd *= kRescaleBy;
    }
  }
  throw NonConvergence("hyp0f2_log_ratio: max_terms reached");
}

cplx log_hyp0f2(cplx a1, cplx a2, double x, const SeriesControl& ctl) {
  if (!(x >= 0) || !std::isfinite(x))
    throw DomainError("log_hyp0f2: argument must be finite and >= 0");
  check_pole(a1, "log_hyp0f2");
  check_pole(a2, "log_hyp0f2");
  if (x == 0) return 0;
  cplx t = 1;
  CompensatedSum s;
  s.add(1);
  double log_scale = 0;
  for (int k = 0; k < ctl.max_terms; ++k) {
    const double kk = k;
    const cplx r = x / ((kk + 1) * (a1 + kk) * (a2 + kk));
    t *= r;
    s.add(t);
    cplx v = s.value();
    if (std::abs(r) < 0.5 && std::abs(t) <= ctl.rel_tol * std::abs(v))
      return std::log(v) + log_scale;
    if (std::abs(v) > kRescaleAbove) {
      t *= kRescaleBy;
      CompensatedSum a;
      a.add(v * kRescaleBy);
      s = a;
      log_scale -= std::log(kRescaleBy);
    }
  }
  throw NonConvergence("log_hyp0f2: max_terms reached");
}

namespace {

using mp_float = boost::multiprecision::cpp_bin_float_100;

struct MpComplex {
  mp_float re, im;
};

MpComplex mul(const MpComplex& a, const MpComplex& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

MpComplex div(const MpComplex& a, const MpComplex& b) {
  mp_float den = b.re * b.re + b.im * b.im;
  return {(a.re * b.re + a.im * b.im) / den, (a.im * b.re - a.re * b.im) / den};
}

cplx hyp2f1_extended(int jneg, cplx b, cplx c, double z) {
  MpComplex term{1, 0}, sum{1, 0};
  const MpComplex bb{b.real(), b.imag()}, cc{c.real(), c.imag()};
  const mp_float zz = z;
  for (int k = 0; k < jneg; ++k) {
    MpComplex bk{bb.re + k, bb.im}, ck{cc.re + k, cc.im};
    MpComplex num = mul(term, bk);
    mp_float scal = mp_float(k - jneg) * zz / mp_float(k + 1);
    num.re *= scal;
    num.im *= scal;
    term = div(num, ck);
    sum.re += term.re;
    sum.im += term.im;
  }
  return {static_cast<double>(sum.re), static_cast<double>(sum.im)};
}

}  // namespace

Hyp2f1Result hyp2f1_terminating(int jneg, cplx b, cplx c, double z,
                                bool allow_fallback, bool compensated) {
  if (jneg < 0) throw DomainError("hyp2f1_terminating: jneg must be >= 0");
  for (int k = 0; k < jneg; ++k)
    if (std::abs(c + double(k)) <= kPoleTol)
      throw PoleError("hyp2f1_terminating: Pochhammer denominator vanishes");
  Hyp2f1Result res;
  cplx term = 1;
  CompensatedSum s;
  cplx plain = 1;
  s.add(1);
  double max_partial = 1;
  for (int k = 0; k < jneg; ++k) {
    term *= double(k - jneg) * (b + double(k)) * z / ((c + double(k)) * double(k + 1));
    s.add(term);
    plain += term;
    max_partial = std::max(max_partial, std::abs(compensated ? s.value() : plain));
  }
  res.value = compensated ? s.value() : plain;
  const double mag = std::abs(res.value);
  res.cancellation = mag > 0 ? max_partial / mag : INFINITY;
  res.reliable = res.cancellation <= kCancellationLimit;
  if (!res.reliable && allow_fallback) {
    res.value = hyp2f1_extended(jneg, b, c, z);
    res.extended_precision = true;
    res.reliable = true;
  }
  return res;
}

std::vector<cplx> hyp2f1_terminating_sequence(int kmax, cplx b, cplx c,
                                              double z) {
  if (kmax < 0) throw DomainError("hyp2f1_terminating_sequence: kmax < 0");
  for (int k = 0; k < kmax; ++k)
    if (std::abs(c + double(k)) <= kPoleTol)
      throw PoleError("hyp2f1_terminating_sequence: c + k vanishes");
  std::vector<cplx> f(kmax + 1);
  f[0] = 1;
  if (kmax == 0) return f;
  f[1] = 1.0 - b * z / c;
  for (int k = 1; k < kmax; ++k) {
    const double kk = k;
    f[k + 1] = ((2 * kk + c - (b + kk) * z) * f[k] + kk * (z - 1) * f[k - 1]) /
               (c + kk);
  }
  return f;
}

}  // namespace steady
