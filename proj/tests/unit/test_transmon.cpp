#include <algorithm>
#include <numeric>

#include "doctest.h"
#include "helpers.hpp"
#include "steady/errors.hpp"
#include "steady/lindblad_oracle.hpp"
#include "steady/transmon_cavity.hpp"

using namespace steady;
using testutil::rel_err;
using testutil::uniform;

namespace {

// rates in MHz-equivalents; the steady state only depends on ratios
TransmonCavityParams dispersive(double delta_c, cplx eps, double gamma_t = 0.1) {
  TransmonCavityParams p;
  p.delta_c = delta_c;
  p.delta_ct = 2500;
  p.g = 350;
  p.chi = -220;
  p.gamma_c = 2;
  p.gamma_t = gamma_t;
  p.epsilon = eps;
  return p;
}

constexpr double kTransmonLine = -2548.0754913072769;

TransmonCavityParams random_params(std::mt19937_64& rng) {
  TransmonCavityParams p;
  p.delta_c = uniform(rng, -5, 5);
  p.delta_ct = uniform(rng, -5, 5);
  p.g = uniform(rng, 0.1, 3);
  p.chi = uniform(rng, 0.3, 2) * (rng() % 4 ? -1 : 1);
  p.gamma_c = uniform(rng, 1, 6);
  p.gamma_t = uniform(rng, 0.01, 0.5);
  p.epsilon = std::polar(uniform(rng, 0.05, 3), uniform(rng, -M_PI, M_PI));
  return p;
}

}  // namespace

TEST_CASE("effective parameters") {
  TransmonCavityParams p = dispersive(0, 1);
  CHECK(effective_params(p).gamma_c_eff == cplx(2, 0));
  p.g = 0;
  p.delta_c = 3;
  auto e = effective_params(p);
  CHECK(std::abs(e.gamma_t_eff - cplx(0.1, 2 * 2503)) < 1e-12);
  CHECK(e.eps_eff == cplx(0, 0));

  TransmonCavityParams r;
  r.delta_c = 2 * M_PI * 115;
  r.g = 2 * M_PI * 115;
  r.chi = -2 * M_PI * 220;
  r.gamma_c = 2 * M_PI * 2;
  r.gamma_t = 2 * M_PI * 0.1;
  r.epsilon = 2 * M_PI * 0.5;
  e = effective_params(r);
  const cplx gc{r.gamma_c, 2 * r.delta_c};
  const cplx gt = cplx(r.gamma_t, 2 * r.delta_t()) + 4 * r.g * r.g / gc;
  CHECK(std::abs(e.gamma_c_eff - gc) < 1e-12 * std::abs(gc));
  CHECK(rel_err(e.gamma_t_eff, gt) < 1e-14);
  CHECK(rel_err(e.eps_eff, 2 * r.g * r.epsilon / gc) < 1e-14);
  CHECK(rel_err(e.c, gt / (cplx(0, 1) * r.chi)) < 1e-14);
  CHECK(rel_err(e.d, gt / (cplx(0, 2) * r.chi)) < 1e-14);
}

TEST_CASE("validation rejects bad parameters") {
  TransmonCavityParams p = dispersive(0, 1);
  p.chi = 0;
  CHECK_THROWS_AS(validate(p), DomainError);
  p = dispersive(0, 1);
  p.gamma_c = 0;
  CHECK_THROWS_AS(transmon_moment(p, 1, 1), DomainError);
  p = dispersive(0, 1);
  CHECK_THROWS_AS(cavity_moment(p, 5, 4), DomainError);
}

// reference values: independent mpmath evaluation of the eliminated model
TEST_CASE("transmon and cavity moments against references") {
  struct Case {
    TransmonCavityParams p;
    cplx a, b;
    double bdb;
  };
  TransmonCavityParams res;
  res.delta_c = 115;
  res.g = 115;
  res.chi = -220;
  res.gamma_c = 2;
  res.gamma_t = 0.1;
  res.epsilon = 0.3;
  const Case cases[] = {
      {dispersive(kTransmonLine, 1), {0.030589396376222534, 0.0005208139597069825},
       {-0.0010218933789608012, 0.2226959153890759}, 0.4441745161627095},
      {dispersive(57, 30), {1.9505710572259045, 1.8230224323047535}, {0.3770334502404144, -0.32287306484051803},
       1.6076501011684452},
      {dispersive(40, 30), {0.3711210719548665, 3.2866930438447897}, {0.4602760019481049, -0.05180438834868414},
       0.21692552031837514},
      {res, {0.24561396727313553, 1.155568707995663e-05}, {0.0004844777107918211, -0.24561406775737105},
       0.07017639891896271},
  };
  for (const auto& c : cases) {
    CAPTURE(c.p.delta_c);
    CHECK(rel_err(cavity_moment(c.p, 0, 1), c.a) < 1e-10);
    CHECK(rel_err(transmon_moment(c.p, 0, 1), c.b) < 1e-10);
    CHECK(rel_err(transmon_moment(c.p, 1, 1), c.bdb) < 1e-10);
  }
}

TEST_CASE("undriven system is the vacuum") {
  const auto p = dispersive(10, 0);
  for (int n = 0; n <= 3; ++n)
    for (int m = 0; m <= 3; ++m) {
      const cplx want = n == 0 && m == 0 ? 1.0 : 0.0;
      CHECK(std::abs(transmon_moment(p, n, m) - want) < 1e-15);
      CHECK(std::abs(cavity_moment(p, n, m) - want) < 1e-15);
    }
  CHECK(transmon_pn(p, 0) == doctest::Approx(1.0));
  CHECK(transmon_pn(p, 2) == 0.0);
  CHECK(duffing_validity(p, 200).mean_excitation == 0.0);
  CHECK(duffing_validity(p, 200).valid);
}

TEST_CASE("cavity moments follow from transmon moments") {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 20; ++i) {
    const auto p = random_params(rng);
    const auto e = effective_params(p);
    const cplx b = transmon_moment(p, 0, 1), bdb = transmon_moment(p, 1, 1);
    CHECK(rel_err(cavity_moment(p, 0, 1), 2.0 / e.gamma_c_eff * (p.epsilon - p.g * b), 1e-12) < 1e-12);
    const cplx ada = 4.0 / std::norm(e.gamma_c_eff) *
                     (std::norm(p.epsilon) - p.g * std::conj(p.epsilon) * b - p.g * p.epsilon * std::conj(b) +
                      p.g * p.g * bdb);
    CHECK(rel_err(cavity_moment(p, 1, 1), ada, 1e-12) < 1e-11);
  }
  auto p = dispersive(3.7, cplx(0.4, -0.9));
  p.g = 0;
  CHECK(rel_err(cavity_moment(p, 0, 1), 2.0 * p.epsilon / cplx(p.gamma_c, 2 * p.delta_c)) < 1e-14);
  CHECK(std::abs(transmon_moment(p, 1, 1)) == 0.0);
}

TEST_CASE("reflection") {
  auto p = dispersive(0, 1);
  p.g = 0;
  CHECK(reflection(p) == doctest::Approx(1.0).epsilon(1e-14));
  p.delta_c = 1e7;
  CHECK(reflection(p) == doctest::Approx(1.0).epsilon(1e-6));
  p.epsilon = 0;
  CHECK_THROWS_AS(reflection(p), DomainError);

  // low-power point on the dressed cavity line
  TransmonCavityParams q = dispersive(0, 0.1);
  q.g = 340;
  q.delta_c = predict_peaks(q, 0).back();
  const std::vector<int> dims{6, 4};
  const auto st = oracle::steady_state(oracle::build_liouvillian(oracle::transmon_cavity_spec(q, dims)), dims);
  const double r_oracle = std::abs(1.0 - q.gamma_c * oracle::expectation(st, "a") / q.epsilon);
  CHECK(std::abs(reflection(q) - r_oracle) < 0.05 * r_oracle);
}

TEST_CASE("peak prediction") {
  TransmonCavityParams p;
  p.g = 115;
  p.gamma_c = 2;
  p.chi = -220;
  const auto r = predict_peaks(p, 0);
  REQUIRE(r.size() == 3);
  const double split = std::sqrt(115.0 * 115.0 - 1.0);
  CHECK(std::abs(r[0] + split) < 1e-9 * split);
  CHECK(std::abs(r[1]) < 1e-9);
  CHECK(std::abs(r[2] - split) < 1e-9 * split);

  p.g = 0;
  p.delta_ct = 40;
  for (int k = 0; k < 3; ++k) {
    const auto z = predict_peaks(p, k);
    REQUIRE(z.size() == 1);
    CHECK(z[0] == doctest::Approx(k * p.chi - p.delta_ct));
  }

  std::mt19937_64 rng(8);
  for (int i = 0; i < 50; ++i) {
    const auto q = random_params(rng);
    const int k = int(rng() % 4);
    for (double dc : predict_peaks(q, k)) {
      const double lhs = dc + q.delta_ct - 4 * q.g * q.g * dc / (q.gamma_c * q.gamma_c + 4 * dc * dc);
      CHECK(std::abs(lhs - k * q.chi) < 1e-9 * std::abs(k * q.chi - q.delta_ct) + 1e-3 * q.gamma_c);
    }
  }
  CHECK_THROWS_AS(predict_peaks(p, -1), DomainError);
}

TEST_CASE("multi-photon ridges of |<b>| sit on the predicted detunings") {
  // dispersive system; drive strong enough to resolve the k = 1, 2 lines
  for (int k = 0; k <= 2; ++k) {
    TransmonCavityParams p = dispersive(0, k == 0 ? 1 : 30);
    p.g = 340;
    const double root = predict_multiphoton_peaks(p, k).front();
    std::vector<double> v;
    for (double dc = root - 15; dc <= root + 15; dc += 0.02) {
      p.delta_c = dc;
      v.push_back(std::abs(transmon_moment(p, 0, 1)));
    }
    double at = 1e300;
    for (size_t i = 1; i + 1 < v.size(); ++i) {
      const double dc = root - 15 + 0.02 * double(i);
      if (v[i] > v[i - 1] && v[i] >= v[i + 1] && std::abs(dc - root) < std::abs(at - root)) at = dc;
    }
    CAPTURE(k);
    CHECK(std::abs(at - root) < p.gamma_c);
  }
}

TEST_CASE("photon-number distribution") {
  const auto p = dispersive(kTransmonLine, 1);
  double sum = 0;
  for (int n = 0; n < 40; ++n) {
    const double v = transmon_pn(p, n);
    CHECK(v >= 0);
    sum += v;
  }
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));

  const std::vector<int> dims{6, 4};
  const auto st = oracle::steady_state(oracle::build_liouvillian(oracle::transmon_cavity_spec(p, dims)), dims);
  const Eigen::MatrixXcd rb = oracle::reduced_density_matrix(st, 1);
  for (int n = 0; n < 3; ++n) {
    CAPTURE(n);
    CHECK(std::abs(transmon_pn(p, n) - rb(n, n).real()) < 0.05 * rb(n, n).real());
  }
}

TEST_CASE("transmon Q-function") {
  GridSpec g;
  g.x = {-3, 3, 61};
  g.y = {-3, 3, 61};
  const auto vac = transmon_qfunction(dispersive(0, 0), g);
  for (int iy = 0; iy < vac.ny(); iy += 7)
    for (int ix = 0; ix < vac.nx(); ix += 7) {
      const double r2 = vac.x_axis[ix] * vac.x_axis[ix] + vac.y_axis[iy] * vac.y_axis[iy];
      CHECK(vac.at(ix, iy) == doctest::Approx(std::exp(-r2) / M_PI).epsilon(1e-13));
    }

  GridSpec wide;
  wide.x = {-6, 6, 121};
  wide.y = {-6, 6, 121};
  // delta_c = 40 is is unimodal with this sign convention; its mirror about
  // the dressed cavity line is bistable
  CHECK(local_maxima(transmon_qfunction(dispersive(40, 30), wide)).size() == 1);
  CHECK(local_maxima(transmon_qfunction(dispersive(57, 30), wide)).size() == 2);

  // anti-normally ordered moments by quadrature
  const auto p = dispersive(57, 30);
  GridSpec fine;
  fine.x = {-7, 7, 281};
  fine.y = {-7, 7, 281};
  const auto q = transmon_qfunction(p, fine);
  const double da = (fine.x.step()) * (fine.y.step());
  cplx first = 0;
  double second = 0, norm = 0;
  for (int iy = 0; iy < q.ny(); ++iy)
    for (int ix = 0; ix < q.nx(); ++ix) {
      const cplx al{q.x_axis[ix], q.y_axis[iy]};
      const double w = q.at(ix, iy) * da;
      norm += w;
      first += al * w;
      second += std::norm(al) * w;
    }
  CHECK(norm == doctest::Approx(1.0).epsilon(0.01));
  CHECK(rel_err(first, transmon_moment(p, 0, 1)) < 0.01);
  CHECK(second == doctest::Approx(transmon_moment(p, 1, 1).real() + 1).epsilon(0.01));
}

TEST_CASE("Duffing validity estimate") {
  const double r = ej_over_ec_from(2 * M_PI * 9200, 2 * M_PI * 220);
  const auto v = duffing_validity(dispersive(40, 30), r);
  CHECK(int(v.levels_in_well) == 5);
  CHECK(v.levels_in_well == doctest::Approx(std::sqrt(r / 8)));
  CHECK(v.mean_excitation == doctest::Approx(transmon_moment(dispersive(40, 30), 1, 1).real()));
  CHECK(v.valid);
  CHECK_THROWS_AS(duffing_validity(dispersive(40, 30), 0), DomainError);
}

TEST_CASE("moment table invariants on random parameters") {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 30; ++i) {
    const auto p = random_params(rng);
    const auto t = transmon_moment_table(p, 6);
    CHECK(std::abs(t.at(0, 0) - 1.0) < 1e-14);
    for (int n = 0; n <= 6; ++n)
      for (int m = 0; n + m <= 6; ++m) CHECK(std::abs(t.at(n, m) - std::conj(t.at(m, n))) <= 1e-10 * std::abs(t.at(n, m)) + 1e-300);
    for (int n = 1; n <= 3; ++n) {
      CHECK(std::abs(t.at(n, n).imag()) <= 1e-10 * std::abs(t.at(n, n)));
      CHECK(t.at(n, n).real() >= 0);
    }
    CHECK(std::norm(t.at(1, 2)) <= t.at(1, 1).real() * t.at(2, 2).real() * (1 + 1e-10));
    const auto c = cavity_moment_table(p, 4);
    CHECK(c.at(1, 1).real() >= 0);
    CHECK(std::abs(c.at(1, 1).imag()) <= 1e-10 * std::abs(c.at(1, 1)));
  }
}

TEST_CASE("weak-drive linearization") {
  auto p = dispersive(kTransmonLine + 3, 1);
  double prev = 1e9;
  for (double s : {1.0, 0.1, 0.01, 0.001}) {
    p.epsilon = s;
    const auto e = effective_params(p);
    const double dev = std::abs(transmon_moment(p, 0, 1) / (2.0 * e.eps_eff / e.gamma_t_eff) - 1.0);
    CHECK(dev < prev);
    prev = dev;
  }
  CHECK(prev < 1e-4);
}
