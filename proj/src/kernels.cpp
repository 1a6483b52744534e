#include "steady/kernels.hpp"

#include <atomic>

namespace steady::kernels {

namespace {
std::atomic<int> g_forced{-1};
}

const char* isa_name(Isa isa) {
  return isa == Isa::Avx2 ? "avx2" : "scalar";
}

Isa detected_isa() {
#if defined(STEADY_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  static const bool ok =
      __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  if (ok) return Isa::Avx2;
#endif
  return Isa::Scalar;
}

void force_isa(std::optional<Isa> isa) {
  g_forced.store(isa ? int(*isa) : -1);
}

Isa active_isa() {
  int f = g_forced.load();
  if (f < 0) return detected_isa();
  if (Isa(f) == Isa::Avx2 && detected_isa() != Isa::Avx2) return Isa::Scalar;
  return Isa(f);
}

void poly_norm_sum(const PolyBatch& c, const double* z_re, const double* z_im,
                   int npts, double* out) {
  poly_norm_sum(c, z_re, z_im, npts, out, active_isa());
}

void poly_norm_sum(const PolyBatch& c, const double* z_re, const double* z_im,
                   int npts, double* out, Isa isa) {
#if defined(STEADY_HAVE_AVX2)
  if (isa == Isa::Avx2 && detected_isa() == Isa::Avx2) {
    detail::poly_norm_sum_avx2(c, z_re, z_im, npts, out);
    return;
  }
#endif
  (void)isa;
  detail::poly_norm_sum_scalar(c, z_re, z_im, npts, out);
}

}  // namespace steady::kernels
