#include "steady/potential_solution.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "steady/errors.hpp"
#include "steady/kernels.hpp"

namespace steady {

namespace {

double log_factorial(int n) { return std::lgamma(double(n) + 1); }

}  // namespace

PotentialSolution PotentialSolution::from_scaled(
    const std::vector<cplx>& mant, const std::vector<double>& log_scale) {
  if (mant.size() != log_scale.size() || mant.empty())
    throw DomainError("potential solution: bad sequence");
  double top = -INFINITY;
  for (size_t k = 0; k < mant.size(); ++k)
    if (std::abs(mant[k]) > 0)
      top = std::max(top, std::log(std::abs(mant[k])) + log_scale[k]);
  if (!std::isfinite(top)) throw DomainError("potential solution: zero sequence");
  PotentialSolution s;
  s.h_.resize(mant.size());
  double norm = 0;
  for (size_t k = 0; k < mant.size(); ++k) {
    s.h_[k] = std::abs(mant[k]) > 0 ? mant[k] * std::exp(log_scale[k] - top) : 0.0;
    norm += std::norm(s.h_[k]);
  }
  const double inv = 1 / std::sqrt(norm);
  for (auto& v : s.h_) v *= inv;
  return s;
}

PotentialSolution PotentialSolution::vacuum() {
  PotentialSolution s;
  s.h_ = {1.0};
  return s;
}

cplx PotentialSolution::moment(int ncreate, int nannih) const {
  if (ncreate < 0 || nannih < 0) throw DomainError("moment: negative order");
  const int top = std::max(ncreate, nannih);
  const double shift = 0.5 * (ncreate + nannih) * std::numbers::ln2;
  CompensatedSum s;
  for (int j = 0; j + top < size(); ++j) {
    const cplx a = h_[j + nannih], b = h_[j + ncreate];
    if (a == 0.0 || b == 0.0) continue;
    const double w = std::exp(0.5 * (log_factorial(j + nannih) + log_factorial(j + ncreate)) -
                              log_factorial(j) - shift);
    s.add(w * a * std::conj(b));
  }
  return s.value();
}

double PotentialSolution::pn(int n) const {
  if (n < 0) throw DomainError("pn: negative n");
  double s = 0;
  for (int j = 0; j + n < size(); ++j) {
    const int k = j + n;
    if (h_[k] == 0.0) continue;
    s += std::norm(h_[k]) *
         std::exp(log_factorial(k) - log_factorial(n) - log_factorial(j) - k * std::numbers::ln2);
  }
  return s;
}

Eigen::MatrixXcd PotentialSolution::density_matrix(int dim) const {
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
  for (int n = 0; n < dim; ++n)
    for (int m = n; m < dim; ++m) {
      cplx acc = 0;
      for (int j = 0; j + std::max(n, m) < size(); ++j) {
        const cplx a = h_[j + n], b = h_[j + m];
        if (a == 0.0 || b == 0.0) continue;
        const double lw = 0.5 * (log_factorial(j + n) - log_factorial(n) + log_factorial(j + m) -
                                 log_factorial(m)) -
                          log_factorial(j) -
                          (j + 0.5 * (n + m)) * std::numbers::ln2;
        acc += std::exp(lw) * a * std::conj(b);
      }
      rho(n, m) = acc;
      rho(m, n) = std::conj(acc);
    }
  return rho;
}

PotentialSolution::QCoefficients PotentialSolution::q_coefficients() const {
  // c_jk = h_{j+k} sqrt((j+k)!) / (sqrt(j!) k!) 2^{-(j+k)/2}, polynomial in conj(alpha)
  QCoefficients c;
  const int n = size();
  c.n = n;
  c.re.assign(size_t(n) * n, 0.0);
  c.im.assign(size_t(n) * n, 0.0);
  c.len.assign(n, 0);
  for (int j = 0; j < n; ++j) {
    c.len[j] = n - j;
    for (int k = 0; j + k < n; ++k) {
      const cplx h = h_[j + k];
      if (h == 0.0) continue;
      const double lw = 0.5 * log_factorial(j + k) - 0.5 * log_factorial(j) - log_factorial(k) -
                        0.5 * (j + k) * std::numbers::ln2;
      const cplx v = h * std::exp(lw);
      c.re[size_t(j) * n + k] = v.real();
      c.im[size_t(j) * n + k] = v.imag();
    }
  }
  return c;
}

void PotentialSolution::q_eval(const QCoefficients& c, const double* x, const double* y,
                               int npts, double* out) const {
  kernels::PolyBatch batch{c.re.data(), c.im.data(), c.len.data(), c.n, c.n};
  std::vector<double> zim(npts);
  for (int i = 0; i < npts; ++i) zim[i] = -y[i];
  kernels::poly_norm_sum(batch, x, zim.data(), npts, out);
  for (int i = 0; i < npts; ++i)
    out[i] *= std::exp(-(x[i] * x[i] + y[i] * y[i])) / std::numbers::pi;
}

QGrid PotentialSolution::qfunction(const GridSpec& grid) const {
  QGrid q = make_empty_grid(grid);
  const auto coeffs = q_coefficients();
  const int nx = q.nx();
  std::vector<double> ys(nx);
  for (int iy = 0; iy < q.ny(); ++iy) {
    std::fill(ys.begin(), ys.end(), q.y_axis[iy]);
    q_eval(coeffs, q.x_axis.data(), ys.data(), nx, q.values.data() + size_t(iy) * nx);
  }
  q.truncation_order = size() - 1;
  q.normalization_estimate = riemann_sum(q);
  return q;
}

std::vector<double> PotentialSolution::q_points(const std::vector<cplx>& alpha) const {
  const auto coeffs = q_coefficients();
  const int n = int(alpha.size());
  std::vector<double> x(n), y(n), out(n);
  for (int i = 0; i < n; ++i) {
    x[i] = alpha[i].real();
    y[i] = alpha[i].imag();
  }
  q_eval(coeffs, x.data(), y.data(), n, out.data());
  return out;
}

bool SequenceTail::done(int k, double log_abs_h) {
  max_log_ = std::max(max_log_, log_abs_h);
  const double lhs = 2 * log_abs_h + 8 * std::log(double(k) + 1);
  if (k >= min_len_ && lhs < 2 * max_log_ + std::log(1e-34))
    ++quiet_;
  else
    quiet_ = 0;
  return quiet_ >= 5;
}

PotentialSolution kerr_solution(cplx c, cplx x, const SeriesControl& ctl,
                                int min_len) {
  if (x == 0.0) return PotentialSolution::vacuum();
  if (near_nonpositive_integer(c)) throw PoleError("kerr_solution: Gamma pole at c");
  // log h_k = k log(sqrt2 x) - log Gamma(c+k) - log(k!)/2
  const cplx lx = std::log(std::sqrt(2.0) * x);
  cplx lg = log_gamma(c);
  std::vector<cplx> mant;
  std::vector<double> scale;
  SequenceTail tail(min_len);
  for (int k = 0; k < ctl.max_terms; ++k) {
    const cplx lh = double(k) * lx - lg - 0.5 * log_factorial(k);
    mant.push_back(std::exp(cplx(0, lh.imag())));
    scale.push_back(lh.real());
    if (tail.done(k, lh.real())) return PotentialSolution::from_scaled(mant, scale);
    lg += std::log(c + double(k));
  }
  throw NonConvergence("kerr_solution: sequence did not decay within max_terms");
}

}  // namespace steady
