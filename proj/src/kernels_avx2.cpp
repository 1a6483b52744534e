#include <immintrin.h>

#include "steady/kernels.hpp"

namespace steady::kernels::detail {

void poly_norm_sum_avx2(const PolyBatch& c, const double* z_re,
                        const double* z_im, int npts, double* out) {
  int p = 0;
  for (; p + 4 <= npts; p += 4) {
    const __m256d zr = _mm256_loadu_pd(z_re + p);
    const __m256d zi = _mm256_loadu_pd(z_im + p);
    __m256d acc = _mm256_setzero_pd();
    for (int j = 0; j < c.rows; ++j) {
      const int n = c.len[j];
      if (n <= 0) continue;
      const double* cr = c.c_re + size_t(j) * c.stride;
      const double* ci = c.c_im + size_t(j) * c.stride;
      __m256d pr = _mm256_set1_pd(cr[n - 1]);
      __m256d pi = _mm256_set1_pd(ci[n - 1]);
      for (int k = n - 2; k >= 0; --k) {
        // (pr + i pi)(zr + i zi) + c_k
        __m256d tr = _mm256_fmsub_pd(pr, zr, _mm256_mul_pd(pi, zi));
        __m256d ti = _mm256_fmadd_pd(pr, zi, _mm256_mul_pd(pi, zr));
        pr = _mm256_add_pd(tr, _mm256_set1_pd(cr[k]));
        pi = _mm256_add_pd(ti, _mm256_set1_pd(ci[k]));
      }
      acc = _mm256_fmadd_pd(pr, pr, acc);
      acc = _mm256_fmadd_pd(pi, pi, acc);
    }
    _mm256_storeu_pd(out + p, acc);
  }
  if (p < npts) poly_norm_sum_scalar(c, z_re + p, z_im + p, npts - p, out + p);
}

}  // namespace steady::kernels::detail
