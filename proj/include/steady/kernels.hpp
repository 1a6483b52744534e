#pragma once

#include <optional>

namespace steady::kernels {

enum class Isa { Scalar, Avx2 };

const char* isa_name(Isa isa);

// Best ISA the running CPU supports and this build was compiled for.
Isa detected_isa();

// Override used by tests and benchmarks; nullopt restores detection.
void force_isa(std::optional<Isa> isa);
Isa active_isa();

// Batched sum of squared complex polynomials:
//   out[p] = sum_j | sum_{k < len[j]} C[j][k] * z_p^k |^2
// C is row-major with row stride `stride`, split into real/imag arrays.
struct PolyBatch {
  const double* c_re;
  const double* c_im;
  const int* len;
  int rows;
  int stride;
};

void poly_norm_sum(const PolyBatch& coeffs, const double* z_re,
                   const double* z_im, int npts, double* out);
void poly_norm_sum(const PolyBatch& coeffs, const double* z_re,
                   const double* z_im, int npts, double* out, Isa isa);

namespace detail {
void poly_norm_sum_scalar(const PolyBatch& c, const double* z_re,
                          const double* z_im, int npts, double* out);
#if defined(STEADY_HAVE_AVX2)
void poly_norm_sum_avx2(const PolyBatch& c, const double* z_re,
                        const double* z_im, int npts, double* out);
#endif
}  // namespace detail

}  // namespace steady::kernels
