#pragma once

#include <map>
#include <utility>
#include <vector>

#include "steady/potential_solution.hpp"
#include "steady/qgrid.hpp"
#include "steady/specfn.hpp"

namespace steady {

// Cavity coupled to a transmon treated as a Duffing oscillator. All rates and
// detunings in one consistent angular unit. Delta_t = delta_c + delta_ct.
struct TransmonCavityParams {
  double delta_c = 0;
  double delta_ct = 0;
  double g = 0;
  double chi = -1;
  double gamma_c = 1;
  double gamma_t = 0;
  cplx epsilon = 0;

  double delta_t() const { return delta_c + delta_ct; }
};

void validate(const TransmonCavityParams& p);

struct EffectiveDuffingParams {
  cplx gamma_c_eff;  // gamma_c + 2i delta_c
  cplx gamma_t_eff;  // gamma_t + 2i delta_t + 4 g^2 / gamma_c_eff
  cplx eps_eff;      // 2 g epsilon / gamma_c_eff
  cplx d;            // gamma_t_eff / (2 i chi)
  cplx c;            // gamma_t_eff / (i chi), Gamma-function parameter
  cplx x;            // 2 eps_eff / (i chi), drive parameter
};

EffectiveDuffingParams effective_params(const TransmonCavityParams& p);

struct MomentTable {
  int max_order = 0;
  std::map<std::pair<int, int>, cplx> entries;

  cplx at(int n, int m) const { return entries.at({n, m}); }
};

// <b^dag^n b^m>
cplx transmon_moment(const TransmonCavityParams& p, int n, int m,
                     const SeriesControl& ctl = {});
MomentTable transmon_moment_table(const TransmonCavityParams& p, int max_order,
                                  const SeriesControl& ctl = {});

constexpr int kCavityMaxOrder = 8;

// <a^dag^n a^m>, n + m <= kCavityMaxOrder
cplx cavity_moment(const TransmonCavityParams& p, int n, int m,
                   const SeriesControl& ctl = {});
MomentTable cavity_moment_table(const TransmonCavityParams& p, int max_order,
                                const SeriesControl& ctl = {});

// |1 - gamma_c <a> / epsilon|
double reflection(const TransmonCavityParams& p, const SeriesControl& ctl = {});

// Real roots of delta_c + delta_ct - 4 g^2 delta_c / (gamma_c^2 + 4 delta_c^2) = k chi.
std::vector<double> predict_peaks(const TransmonCavityParams& p, int k);

// Same dressed-detuning equation with right-hand side -k chi / 2: the k+1
// photon resonances of the driven Kerr mode.
std::vector<double> predict_multiphoton_peaks(const TransmonCavityParams& p, int k);

// Real roots of 4 D^3 + 4 p0 D^2 + (gamma_c^2 - 4 g^2) D + p0 gamma_c^2 = 0.
std::vector<double> dressed_resonance_roots(double p0, double g, double gamma_c);

double transmon_pn(const TransmonCavityParams& p, int n, const SeriesControl& ctl = {});

PotentialSolution transmon_solution(const TransmonCavityParams& p,
                                    const SeriesControl& ctl = {});

QGrid transmon_qfunction(const TransmonCavityParams& p, const GridSpec& grid,
                         const SeriesControl& ctl = {});

struct DuffingValidity {
  double levels_in_well;
  double mean_excitation;
  bool valid;
};

DuffingValidity duffing_validity(const TransmonCavityParams& p, double ej_over_ec);

// E_J/E_C from the transmon frequency and charging energy, inverting
// omega_t = sqrt(8 E_J E_C) - E_C.
double ej_over_ec_from(double omega_t, double e_c);

}  // namespace steady
