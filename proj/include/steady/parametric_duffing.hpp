#pragma once

#include <array>
#include <vector>

#include "steady/potential_solution.hpp"
#include "steady/qgrid.hpp"
#include "steady/specfn.hpp"
#include "steady/transmon_cavity.hpp"

namespace steady {

// H = delta c^dag c + i(eps1 c^dag - h.c.) + (i/2)(eps2 c^dag^2 - h.c.)
//     + (u/2) c^dag^2 c^2, collapse operators sqrt(2 gamma1) c, sqrt(gamma2) c^2.
struct ParampParams {
  double delta = 0;
  cplx eps1 = 0;
  cplx eps2 = 0;
  double u = 0;
  double gamma1 = 1;
  double gamma2 = 0;
};

void validate(const ParampParams& p);

struct DerivedParampParams {
  cplx kappa1;   // gamma1 + i delta
  cplx kappa2;   // gamma2 + i u
  cplx a_const;  // kappa1 / kappa2
  cplx b_const;  // -eps1 / (kappa2 s), s = sqrt(eps2 / kappa2)
  cplx s;        // principal sqrt(eps2 / kappa2)
};

DerivedParampParams derived_params(const ParampParams& p);

PotentialSolution paramp_solution(const ParampParams& p, const SeriesControl& ctl = {},
                                  int min_len = 16);

// <c^dag^m c^n>
cplx moment(const ParampParams& p, int m, int n, const SeriesControl& ctl = {});
MomentTable moment_table(const ParampParams& p, int max_order, const SeriesControl& ctl = {});
double pn(const ParampParams& p, int n, const SeriesControl& ctl = {});
QGrid qfunction(const ParampParams& p, const GridSpec& grid, const SeriesControl& ctl = {});

enum class Phase { One = 1, Two = 2, Three = 3 };
const char* phase_name(Phase ph);

struct FixedPoint {
  cplx alpha;
  bool stable;
  std::array<cplx, 2> eigenvalues;
};

struct FixedPointSet {
  std::vector<FixedPoint> points;
  Phase phase = Phase::One;
  bool on_boundary = false;
};

// Jacobian of the mean-field flow d alpha/dt = eps2 conj(alpha) - i u |alpha|^2 alpha
// - (gamma1 + i delta) alpha, in (Re alpha, Im alpha) coordinates.
std::array<double, 4> mean_field_jacobian(const ParampParams& p, cplx alpha);
std::array<cplx, 2> eigenvalues_2x2(const std::array<double, 4>& j);

FixedPointSet classical_fixed_points(const ParampParams& p);

struct QuadratureMin {
  double value;
  double theta_star;
};

// <c^dag c> - |<cc>| + 1/2 and the angle at which it is attained.
QuadratureMin min_quadrature_uncertainty(const ParampParams& p, const SeriesControl& ctl = {});

struct CatMetrics {
  std::array<cplx, 2> peak_positions;
  double peak_value;
  double bridge_value;
  double bridge_ratio;
  double mean_photons;
};

CatMetrics cat_metrics(const ParampParams& p, const GridSpec& grid, const SeriesControl& ctl = {});

}  // namespace steady
