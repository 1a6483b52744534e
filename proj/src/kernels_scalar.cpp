#include "steady/kernels.hpp"

namespace steady::kernels::detail {

void poly_norm_sum_scalar(const PolyBatch& c, const double* z_re,
                          const double* z_im, int npts, double* out) {
  for (int p = 0; p < npts; ++p) {
    const double zr = z_re[p], zi = z_im[p];
    double acc = 0;
    for (int j = 0; j < c.rows; ++j) {
      const int n = c.len[j];
      if (n <= 0) continue;
      const double* cr = c.c_re + size_t(j) * c.stride;
      const double* ci = c.c_im + size_t(j) * c.stride;
      double pr = cr[n - 1], pi = ci[n - 1];
      for (int k = n - 2; k >= 0; --k) {
        const double tr = pr * zr - pi * zi + cr[k];
        const double ti = pr * zi + pi * zr + ci[k];
        pr = tr;
        pi = ti;
      }
      acc += pr * pr + pi * pi;
    }
    out[p] = acc;
  }
}

}  // namespace steady::kernels::detail
