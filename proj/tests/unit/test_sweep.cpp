#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "doctest.h"
#include "steady/config.hpp"
#include "steady/emit.hpp"
#include "steady/errors.hpp"
#include "steady/parametric_duffing.hpp"
#include "steady/sweep.hpp"
#include "steady/transmon_cavity.hpp"

using namespace steady;

namespace {

const char* kGrid = R"(schema_version = 1
name = "grid"
model = "parametric_duffing"
observables = ["n_photons", "moment:0,2", "dxmin"]
[params]
u_g1 = 2
gamma2 = 0.1
[[axis]]
name = "eps2_g1"
min = 0.5
max = 3
count = 6
[[axis]]
name = "delta_g1"
min = -2
max = 2
count = 5
)";

std::vector<std::string> data_rows(const std::string& csv) {
  std::vector<std::string> rows;
  std::istringstream in(csv);
  std::string line;
  while (std::getline(in, line))
    if (!line.empty() && line[0] != '#') rows.push_back(line);
  return rows;
}

}  // namespace

TEST_CASE("config parsing and units") {
  const auto cfg = parse_config(kGrid);
  CHECK(cfg.axes.size() == 2);
  CHECK(cfg.axes[0].values().front() == 0.5);
  CHECK(cfg.axes[0].values().back() == 3);

  const auto pp = resolve_params(ModelKind::TransmonCavity, {{"g_mhz", 115}, {"epsilon_mhz", 2}, {"epsilon_phase", 0.5}});
  CHECK(pp.transmon.g == doctest::Approx(2 * M_PI * 115));
  CHECK(std::abs(pp.transmon.epsilon - std::polar(4 * M_PI, 0.5)) < 1e-12);
  CHECK(to_mhz(pp.transmon.g) == doctest::Approx(115));
  const auto q = resolve_params(ModelKind::ParametricDuffing, {{"gamma1_mhz", 1}, {"u_g1", 5}, {"eps2_mhz", 2}});
  CHECK(q.paramp.u == doctest::Approx(5 * 2 * M_PI));
  CHECK(q.paramp.eps2.real() == doctest::Approx(2 * 2 * M_PI));

  AxisSpec log_axis{"x", 1, 100, 3, true};
  CHECK(log_axis.values()[1] == doctest::Approx(10));

  CHECK_THROWS_AS(parse_config("schema_version = 2\nmodel = \"parametric_duffing\"\nobservables = [\"n_photons\"]\n"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config(std::string(kGrid) + "bogus = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("schema_version = 1\nmodel = \"parametric_duffing\"\nobservables = [\"nope\"]\n"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config("schema_version = 1\nmodel = \"parametric_duffing\"\nobservables = [\"n_photons\"]\n"
                               "[params]\ng_mhz = 3\n"),
                  ConfigError);
  CHECK_THROWS_AS(observable_columns(ModelKind::TransmonCavity, "cat"), ConfigError);
  CHECK(observable_columns(ModelKind::ParametricDuffing, "moment:1,2") ==
        std::vector<std::string>{"moment_1_2_re", "moment_1_2_im"});
}

TEST_CASE("single-point sweep equals the direct call") {
  const auto cfg = parse_config(R"(schema_version = 1
model = "parametric_duffing"
observables = ["moment:1,1", "pn:2"]
[params]
delta = -12
u = 5
eps2 = 4.25
)");
  const auto r = run_sweep(cfg);
  REQUIRE(r.size() == 1);
  ParampParams p;
  p.delta = -12;
  p.u = 5;
  p.eps2 = 4.25;
  CHECK(r.points[0].values[r.column("moment_1_1_re")] == moment(p, 1, 1).real());
  CHECK(r.points[0].values[r.column("pn_2")] == pn(p, 2));
  CHECK(r.points[0].status == "ok");
}

TEST_CASE("deterministic and independent of worker count") {
  const auto cfg = parse_config(kGrid);
  const auto a = run_sweep(cfg, 1), b = run_sweep(cfg, 1), c = run_sweep(cfg, 3);
  CHECK(sweep_csv(a, cfg) == sweep_csv(b, cfg));
  CHECK(sweep_csv(a, cfg) == sweep_csv(c, cfg));
  CHECK(sweep_json(a, cfg) == sweep_json(c, cfg));
  const auto rows = data_rows(sweep_csv(a, cfg));
  CHECK(rows.size() == 31);
  CHECK(rows[0] == "eps2_g1,delta_g1,n_photons,moment_0_2_re,moment_0_2_im,dxmin,theta_star,series_terms,status");
}

TEST_CASE("2x2 sweep table and JSON mirror") {
  const auto cfg = parse_config(R"(schema_version = 1
model = "transmon_cavity"
observables = ["abs_b"]
[params]
g = 1
chi = -1
gamma_c = 2
gamma_t = 0.1
[[axis]]
name = "epsilon"
min = 0.5
max = 1
count = 2
[[axis]]
name = "delta_c"
min = -1
max = 1
count = 2
)");
  const auto r = run_sweep(cfg);
  const auto rows = data_rows(sweep_csv(r, cfg));
  REQUIRE(rows.size() == 5);
  CHECK(rows[1].rfind("0.5,-1,", 0) == 0);
  CHECK(rows[4].rfind("1,1,", 0) == 0);
  const auto j = nlohmann::json::parse(sweep_json(r, cfg));
  CHECK(j["rows"].size() == 4);
  CHECK(j["columns"][0] == "abs_b");
  CHECK(j["manifest"]["model"] == "transmon_cavity");
  CHECK(j["manifest"].contains("timestamp") == false);
  TransmonCavityParams p;
  p.g = 1;
  p.chi = -1;
  p.gamma_c = 2;
  p.gamma_t = 0.1;
  p.epsilon = 1;
  p.delta_c = -1;
  CHECK(j["rows"][2]["values"][0].get<double>() == std::abs(transmon_moment(p, 0, 1)));
}

TEST_CASE("failures stay local to their grid point") {
  // u = 0 with gamma2 = 0 has no analytic solution; weak drive has no cat
  const auto cfg = parse_config(R"(schema_version = 1
model = "parametric_duffing"
observables = ["n_photons", "cat"]
[params]
delta = -3
eps2 = 3.5
[[axis]]
name = "u"
min = -1
max = 1
count = 5
)");
  const auto r = run_sweep(cfg, 2);
  REQUIRE(r.size() == 5);
  CHECK(r.points[2].status == "DomainError");
  CHECK(std::isnan(r.points[2].values[0]));
  for (size_t i : {0, 1, 3, 4}) {
    CAPTURE(i);
    CHECK(std::isfinite(r.points[i].values[0]));
  }
  const auto csv = sweep_csv(r, cfg);
  CHECK(csv.find("DomainError") != std::string::npos);

  auto weak = cfg;
  weak.fixed_params = {{"delta", -3}, {"eps2", 0.2}};
  const auto w = run_sweep(weak);
  CHECK(w.points[0].status == "DegenerateState");
  CHECK(std::isfinite(w.points[0].values[0]));
}

TEST_CASE("PGM brightest pixel is the Q argmax") {
  ParampParams p;
  p.delta = -2;
  p.u = 1;
  p.eps2 = {1.5, 0.8};
  GridSpec g;
  g.x = {-3, 3, 47};
  g.y = {-2, 2, 29};
  const auto q = qfunction(p, g);
  const auto top = grid_argmax(q);
  const auto pix = map_intensity(q.values, q.nx(), q.ny(), false);
  const std::string img = pgm_image(pix, q.nx(), q.ny());
  const std::string header = "P5\n47 29\n255\n";
  REQUIRE(img.compare(0, header.size(), header) == 0);
  size_t best = 0;
  for (size_t i = 0; i < pix.size(); ++i)
    if (std::uint8_t(img[header.size() + i]) > std::uint8_t(img[header.size() + best])) best = i;
  const int row = int(best / q.nx()), col = int(best % q.nx());
  CHECK(col == top.ix);
  CHECK(q.ny() - 1 - row == top.iy);
}

TEST_CASE("golden Q grid") {
  const auto cfg = load_config(STEADY_SOURCE_DIR "/configs/figures/fig6a_q.toml");
  const auto r = run_sweep(cfg);
  REQUIRE(r.qgrids.size() == 1);
  const auto got = data_rows(qgrid_csv(*r.qgrids[0], r, cfg, 0));
  std::ifstream f(STEADY_SOURCE_DIR "/tests/data/fig6a_q_golden.csv");
  REQUIRE(f);
  std::string line;
  size_t i = 0;
  double worst = 0;
  while (std::getline(f, line)) {
    REQUIRE(i < got.size());
    if (i > 0) {
      double a[3], b[3];
      REQUIRE(std::sscanf(line.c_str(), "%lf,%lf,%lf", &a[0], &a[1], &a[2]) == 3);
      REQUIRE(std::sscanf(got[i].c_str(), "%lf,%lf,%lf", &b[0], &b[1], &b[2]) == 3);
      for (int k = 0; k < 3; ++k) worst = std::max(worst, std::abs(a[k] - b[k]));
    } else {
      CHECK(line == got[0]);
    }
    ++i;
  }
  CHECK(i == got.size());
  CHECK(worst < 1e-9);
}

TEST_CASE("oracle spot checks") {
  const auto cfg = parse_config(R"(schema_version = 1
model = "parametric_duffing"
observables = ["n_photons"]
oracle_dims = [20]
[params]
delta = -1
u = 2
[[axis]]
name = "eps2"
min = 0.5
max = 2
count = 6
[oracle_check]
enabled = true
max_points = 2
seed = 7
)");
  const auto r = run_sweep(cfg);
  REQUIRE(r.oracle_checks.size() == 2);
  for (const auto& c : r.oracle_checks) CHECK(c.passed);
  const auto again = run_sweep(cfg);
  CHECK(again.oracle_checks[0].index == r.oracle_checks[0].index);
}

TEST_CASE("oracle model sweep") {
  const auto cfg = parse_config(R"(schema_version = 1
model = "oracle"
oracle_target = "parametric_duffing"
observables = ["expect:a+ a", "converged"]
oracle_dims = [16]
[params]
delta = -12
u = 5
eps2 = 2
)");
  const auto r = run_sweep(cfg);
  ParampParams p;
  p.delta = -12;
  p.u = 5;
  p.eps2 = 2;
  CHECK(r.points[0].values[0] == doctest::Approx(moment(p, 1, 1).real()).epsilon(1e-8));
  CHECK(r.points[0].values[r.column("truncation_converged")] == 1.0);
}

TEST_CASE("emit writes the configured files") {
  auto cfg = parse_config(kGrid);
  cfg.output.formats = {"csv", "json", "pgm"};
  cfg.output.image = "n_photons";
  cfg.output.color = true;
  const auto dir = std::filesystem::temp_directory_path() / "steady_emit_test";
  std::filesystem::create_directories(dir);
  cfg.output.path = (dir / "grid").string();
  const auto files = emit(run_sweep(cfg), cfg);
  CHECK(files.size() == 4);
  for (const auto& f : files) CHECK(std::filesystem::file_size(f) > 0);
  // a directory squatting on the output name
  std::filesystem::create_directories(dir / "blocked.csv");
  cfg.output.path = (dir / "blocked").string();
  cfg.output.formats = {"csv"};
  CHECK_THROWS_AS(emit(run_sweep(cfg), cfg), IoError);
  std::filesystem::remove_all(dir);
}
