#pragma once

#include <cmath>
#include <complex>
#include <random>

#include "steady/specfn.hpp"

namespace testutil {

using steady::cplx;

inline double rel_err(cplx got, cplx want, double floor = 0) {
  return std::abs(got - want) / std::max(std::abs(want), floor);
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

}  // namespace testutil
