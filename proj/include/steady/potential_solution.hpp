#pragma once

#include <Eigen/Dense>
#include <vector>

#include "steady/qgrid.hpp"
#include "steady/specfn.hpp"

namespace steady {

// Steady state of a single driven Kerr-type mode whose generalized-P
// distribution integrates to
//   <a^dag^m a^n> = sum_j (2^j / j!) f_{j+n} conj(f_{j+m}) / norm.
// Stored as the rescaled sequence h_k = f_k 2^{k/2} / sqrt(k!), normalized so
// that sum_k |h_k|^2 = 1. Everything (moments, rho, P(n), Q) follows from h.
class PotentialSolution {
 public:
  // h_k = mant[k] * exp(log_scale[k]); zero mantissas are allowed.
  static PotentialSolution from_scaled(const std::vector<cplx>& mant,
                                       const std::vector<double>& log_scale);
  static PotentialSolution vacuum();

  int size() const { return int(h_.size()); }
  const std::vector<cplx>& h() const { return h_; }

  // <a^dag^ncreate a^nannih>
  cplx moment(int ncreate, int nannih) const;
  double pn(int n) const;
  Eigen::MatrixXcd density_matrix(int dim) const;
  QGrid qfunction(const GridSpec& grid) const;
  // Q(alpha) = <alpha|rho|alpha>/pi at arbitrary points.
  std::vector<double> q_points(const std::vector<cplx>& alpha) const;

 private:
  struct QCoefficients {
    std::vector<double> re, im;
    std::vector<int> len;
    int n = 0;
  };
  QCoefficients q_coefficients() const;
  void q_eval(const QCoefficients& c, const double* x, const double* y, int npts,
              double* out) const;

  std::vector<cplx> h_;
};

// Decides when a generated sequence is long enough: |h_k|^2 (k+1)^8 below
// 1e-34 of the running maximum for 5 consecutive k past min_len.
class SequenceTail {
 public:
  explicit SequenceTail(int min_len) : min_len_(min_len) {}
  bool done(int k, double log_abs_h);

 private:
  int min_len_;
  double max_log_ = -INFINITY;
  int quiet_ = 0;
};

// f_k = x^k / Gamma(c + k): the coherently driven Kerr oscillator.
PotentialSolution kerr_solution(cplx c, cplx x, const SeriesControl& ctl = {},
                                int min_len = 16);

}  // namespace steady
