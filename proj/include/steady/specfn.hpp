#pragma once

#include <complex>
#include <vector>

namespace steady {

using cplx = std::complex<double>;

struct SeriesControl {
  double rel_tol = 1e-14;
  int max_terms = 10000;
  bool use_compensated_sum = true;
};

constexpr double kPoleTol = 1e-12;

// true when z is within kPoleTol of 0, -1, -2, ...
bool near_nonpositive_integer(cplx z, double tol = kPoleTol);

// Principal branch of log Gamma(z), continuous off the negative real axis.
cplx log_gamma(cplx z);

// exp(expnt * Log(base)), principal branch.
cplx complex_power(cplx base, cplx expnt);

// log[ 0F2(a1+m, a2+n; x) / 0F2(a1, a2; x) ], x >= 0.
cplx hyp0f2_log_ratio(cplx a1, cplx a2, int m, int n, double x,
                      const SeriesControl& ctl = {});

// log 0F2(a1, a2; x); only used where the value itself is needed.
cplx log_hyp0f2(cplx a1, cplx a2, double x, const SeriesControl& ctl = {});

struct Hyp2f1Result {
  cplx value;
  double cancellation = 1.0;  // max |partial sum| / |value|
  bool extended_precision = false;
  bool reliable = true;
};

constexpr double kCancellationLimit = 1e6;

// 2F1(-jneg, b; c; z) as a finite sum. With allow_fallback the sum is redone
// at ~100 digits when the cancellation indicator exceeds kCancellationLimit.
Hyp2f1Result hyp2f1_terminating(int jneg, cplx b, cplx c, double z,
                                bool allow_fallback = true,
                                bool compensated = true);

// F_k = 2F1(-k, b; c; z) for k = 0..kmax via the contiguous relation in the
// first parameter.
std::vector<cplx> hyp2f1_terminating_sequence(int kmax, cplx b, cplx c,
                                              double z);

// Neumaier-compensated complex accumulator.
class CompensatedSum {
 public:
  void add(cplx v);
  cplx value() const { return {sr_ + cr_, si_ + ci_}; }

 private:
  double sr_ = 0, cr_ = 0, si_ = 0, ci_ = 0;
};

}  // namespace steady
