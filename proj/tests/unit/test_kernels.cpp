#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "steady/kernels.hpp"

using namespace steady;
using namespace steady::kernels;

namespace {

struct Batch {
  std::vector<double> re, im;
  std::vector<int> len;
  int rows, stride;
  PolyBatch view() const { return {re.data(), im.data(), len.data(), rows, stride}; }
};

Batch random_batch(std::mt19937_64& rng, int rows, int stride) {
  Batch b{std::vector<double>(size_t(rows) * stride), std::vector<double>(size_t(rows) * stride),
          std::vector<int>(rows), rows, stride};
  for (int j = 0; j < rows; ++j) {
    b.len[j] = 1 + int(rng() % stride);
    for (int k = 0; k < stride; ++k) {
      b.re[size_t(j) * stride + k] = testutil::uniform(rng, -1, 1) / (1 + k);
      b.im[size_t(j) * stride + k] = testutil::uniform(rng, -1, 1) / (1 + k);
    }
  }
  return b;
}

}  // namespace

TEST_CASE("scalar kernel matches a naive evaluation") {
  std::mt19937_64 rng(1);
  const Batch b = random_batch(rng, 7, 9);
  std::vector<double> x{0.3, -1.2, 2.0}, y{0.1, 0.7, -0.4}, out(3);
  detail::poly_norm_sum_scalar(b.view(), x.data(), y.data(), 3, out.data());
  for (int p = 0; p < 3; ++p) {
    const cplx z{x[p], y[p]};
    double want = 0;
    for (int j = 0; j < b.rows; ++j) {
      cplx s = 0, zk = 1;
      for (int k = 0; k < b.len[j]; ++k, zk *= z) s += cplx(b.re[j * b.stride + k], b.im[j * b.stride + k]) * zk;
      want += std::norm(s);
    }
    CHECK(out[p] == doctest::Approx(want).epsilon(1e-13));
  }
}

TEST_CASE("AVX2 kernel agrees with the scalar reference") {
  if (detected_isa() != Isa::Avx2) {
    MESSAGE("AVX2 not available on this machine; only the scalar path is exercised");
    return;
  }
  std::mt19937_64 rng(2);
  // point counts that hit the 4-wide body and every tail length
  for (int npts : {1, 3, 4, 5, 8, 13, 121}) {
    const Batch b = random_batch(rng, 11, 17);
    std::vector<double> x(npts), y(npts), s(npts), v(npts);
    for (int i = 0; i < npts; ++i) {
      x[i] = testutil::uniform(rng, -4, 4);
      y[i] = testutil::uniform(rng, -4, 4);
    }
    poly_norm_sum(b.view(), x.data(), y.data(), npts, s.data(), Isa::Scalar);
    poly_norm_sum(b.view(), x.data(), y.data(), npts, v.data(), Isa::Avx2);
    for (int i = 0; i < npts; ++i) CHECK(v[i] == doctest::Approx(s[i]).epsilon(1e-13));
  }
}

TEST_CASE("forced ISA is honoured and reset") {
  force_isa(Isa::Scalar);
  CHECK(active_isa() == Isa::Scalar);
  force_isa(std::nullopt);
  CHECK(active_isa() == detected_isa());
  CHECK(std::string(isa_name(Isa::Avx2)) == "avx2");
}
