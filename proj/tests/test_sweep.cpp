#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "mmsim/config.hpp"
#include "mmsim/render.hpp"
#include "mmsim/sweep.hpp"
#include "mmsim/sweep_io.hpp"

using namespace mmsim;
namespace fs = std::filesystem;

namespace {

std::string csv_of(const SweepResult& r) {
  std::ostringstream os;
  write_csv(r, os);
  return os.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::path(MMSIM_BINARY_DIR) / "scratch";
  fs::create_directories(dir);
  return dir / name;
}

std::size_t count(const std::string& hay, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = hay.find(needle); pos != std::string::npos; pos = hay.find(needle, pos + 1)) ++n;
  return n;
}

}  // namespace

TEST_CASE("axis endpoints are exact") {
  const Axis a{"Delta1", -2.0, 2.0, 201};
  CHECK(a.value(0) == -2.0);
  CHECK(a.value(200) == 2.0);
  CHECK(a.value(100) == 0.0);
  CHECK(a.value(75) == doctest::Approx(-0.5).epsilon(1e-15));
  const Axis b{"Delta_m1", 0.8, 1.1, 7};
  CHECK(b.value(6) == 1.1);
}

TEST_CASE("presets") {
  SUBCASE("fig5a") {
    const auto s = preset("fig5a");
    REQUIRE(s.axes.size() == 1);
    CHECK(s.axes[0].name == "Delta_sym");
    CHECK(s.axes[0].start == -2.0);
    CHECK(s.axes[0].stop == 2.0);
    CHECK(std::find(s.fixed.begin(), s.fixed.end(), std::pair<std::string, double>{"hop_Gamma", 0.5}) != s.fixed.end());
    std::vector<std::string> ids;
    for (const auto& p : s.pairs) ids.push_back(p.id());
    CHECK(ids == std::vector<std::string>{"c1-c2", "m1-b1", "m2-b2", "c1-m2", "c2-m1", "c1-b2", "c2-b1"});
  }
  SUBCASE("fig3e") {
    const auto s = preset("fig3e");
    CHECK(std::find(s.fixed.begin(), s.fixed.end(), std::pair<std::string, double>{"hop_Gamma", 0.8}) != s.fixed.end());
    REQUIRE(s.pairs.size() == 2);
    CHECK(s.pairs[0].id() == "c1-m2");
    CHECK(s.pairs[1].id() == "c2-m1");
  }
  SUBCASE("fig5d is antisymmetric") { CHECK(preset("fig5d").axes[0].name == "Delta_antisym"); }
  SUBCASE("fig2e sweeps magnon detunings at the optimal cavity point") {
    const auto s = preset("fig2e");
    CHECK(s.axes[0].name == "Delta_m1");
    CHECK(s.axes[1].stop == 1.1);
    REQUIRE(s.optimize_cavity_for);
    CHECK(s.optimize_cavity_for->id() == "c1-m2");
  }
  SUBCASE("fig4 hopping axis in kappa_c units") {
    const auto s = preset("fig4g");
    CHECK(s.axes[1].name == "hop_Gamma");
    CHECK(s.axes[1].unit == AxisUnit::kappa_c);
    CHECK(s.pairs[0].id() == "c1-m2");
  }
  SUBCASE("every preset is valid") {
    const auto names = preset_names();
    CHECK(names.size() == 31);
    for (const auto& n : names) {
      CHECK_NOTHROW(validate(preset(n)));
      CHECK(preset(n).name == n);
    }
  }
  SUBCASE("unknown name lists the valid ones") {
    try {
      preset("fig6a");
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      const std::string msg = e.what();
      CHECK(msg.find("fig2a") != std::string::npos);
      CHECK(msg.find("fig5f") != std::string::npos);
    }
  }
}

TEST_CASE("spec validation") {
  SweepSpec s;
  s.pairs = {parse_pair("c1-c2")};
  CHECK_THROWS_AS(validate(s), ConfigError);  // no axes
  s.axes = {{"Delta1", -1, 1, 1}};
  CHECK_THROWS_AS(validate(s), ConfigError);  // count < 2
  s.axes = {{"Delta1", 1, 1, 5}};
  CHECK_THROWS_AS(validate(s), ConfigError);  // start == stop
  s.axes = {{"Delta3", -1, 1, 5}};
  CHECK_THROWS_AS(validate(s), ConfigError);
  s.axes = {{"Delta1", -1, 1, 5, AxisUnit::kappa_c}};
  CHECK_THROWS_AS(validate(s), ConfigError);
  s.axes = {{"Delta_sym", -1, 1, 5}, {"Delta2", -1, 1, 5}};
  CHECK_THROWS_AS(validate(s), ConfigError);  // both write Delta2
  s.axes = {{"Delta1", -1, 1, 5}, {"Delta2", -1, 1, 5}, {"hop_Gamma", 0, 1, 5}};
  CHECK_THROWS_AS(validate(s), ConfigError);
  s.axes = {{"Delta1", -1, 1, 5}};
  s.pairs.clear();
  CHECK_THROWS_AS(validate(s), ConfigError);
  s.margin_only = true;
  CHECK_NOTHROW(validate(s));
  s.fixed = {{"temperature", 1.0}};
  CHECK_THROWS_AS(validate(s), ConfigError);
}

TEST_CASE("coordinates") {
  auto p = SystemParams::table1();
  const double wb = p.omega_b_ref();
  apply_coordinate(p, "Delta_antisym", 0.3);
  CHECK(p.sub[0].Delta_c == doctest::Approx(0.3 * wb));
  CHECK(p.sub[1].Delta_c == doctest::Approx(-0.3 * wb));
  apply_coordinate(p, "Delta_sym", -0.7);
  CHECK(p.sub[0].Delta_c == p.sub[1].Delta_c);
  apply_coordinate(p, "hop_Gamma", 4.0, AxisUnit::kappa_c);
  CHECK(p.hop_Gamma == doctest::Approx(4.0 * p.sub[0].kappa_c));
  apply_coordinate(p, "Delta_m2", 0.9);
  CHECK(p.sub[1].Delta_m == doctest::Approx(0.9 * wb));
  CHECK_THROWS_AS(apply_coordinate(p, "kappa", 1.0), ConfigError);
}

TEST_CASE("decoupled grid: cross-cavity pairs vanish everywhere") {
  SweepSpec s;
  s.axes = {{"Delta1", -1.0, 1.0, 2}, {"Delta2", -1.0, 1.0, 2}};
  s.fixed = {{"hop_Gamma", 0.0}};
  s.pairs.assign(pair_catalog().begin(), pair_catalog().end());
  const auto r = run_sweep(s, SystemParams::table1());
  CHECK(r.points.size() == 4);
  for (const auto& pt : r.points) {
    REQUIRE(pt.flag == PointFlag::ok);
    for (const auto& pair : pair_catalog())
      if (pair.cross_cavity()) CHECK(*pt.log_neg[pair.index()] == 0.0);
  }
}

TEST_CASE("worker count does not change a single byte") {
  const auto spec = preset("fig3b").with_resolution(17);
  const auto base = SystemParams::table1();
  const std::string serial = csv_of(run_sweep_serial(spec, base));
  for (int w : {1, 2, 3, 8}) CHECK(csv_of(run_sweep(spec, base, w)) == serial);
}

TEST_CASE("grid points are pure functions of their coordinates") {
  SweepSpec a;
  a.axes = {{"Delta1", -2.0, 2.0, 9}, {"Delta2", -2.0, 2.0, 9}};
  a.fixed = {{"hop_Gamma", 0.5}};
  a.pairs = {parse_pair("c1-c2"), parse_pair("m1-b1")};
  SweepSpec b = a;
  b.axes = {{"Delta1", -1.0, 1.0, 5}, {"Delta2", -2.0, 0.0, 5}};  // shares (-1..1) x (-2..0) at step 0.5
  const auto ra = run_sweep(a, SystemParams::table1(), 2);
  const auto rb = run_sweep(b, SystemParams::table1(), 1);
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j < 5; ++j) {
      const auto& x = ra.at(i + 2, j);
      const auto& y = rb.at(i, j);
      CHECK(x.coord == y.coord);
      CHECK(x.stability_margin == y.stability_margin);
      CHECK(x.log_neg == y.log_neg);
    }
}

TEST_CASE("fig2a grid is symmetric under exchanging the cavities") {
  const auto r = run_sweep(preset("fig2a").with_resolution(21), SystemParams::table1());
  const std::size_t k = parse_pair("c1-c2").index();
  for (std::size_t i = 0; i < 21; ++i)
    for (std::size_t j = 0; j < 21; ++j) CHECK(std::abs(*r.at(i, j).log_neg[k] - *r.at(j, i).log_neg[k]) < 1e-8);
}

TEST_CASE("cavity optimisation picks the coarse-scan argmax") {
  const auto spec = preset("fig2d");
  const auto base = resolve_base(spec, SystemParams::table1(), 1);
  SweepSpec coarse;
  coarse.axes = {{"Delta1", -2.0, 2.0, cavity_optimum_grid}, {"Delta2", -2.0, 2.0, cavity_optimum_grid}};
  coarse.fixed = spec.fixed;
  coarse.pairs = {parse_pair("c1-c2")};
  const auto scan = run_sweep(coarse, SystemParams::table1());
  double best = -1;
  std::array<double, 2> at{};
  for (const auto& pt : scan.points)
    if (pt.log_neg[0] && *pt.log_neg[0] > best) {
      best = *pt.log_neg[0];
      at = pt.coord;
    }
  const double wb = base.omega_b_ref();
  CHECK(base.sub[0].Delta_c == doctest::Approx(at[0] * wb));
  CHECK(base.sub[1].Delta_c == doctest::Approx(at[1] * wb));
  CHECK(base.sub[0].Delta_m == doctest::Approx(wb));
}

TEST_CASE("failures become flags, not exceptions") {
  auto p = SystemParams::table1();
  for (auto& s : p.sub) s.kappa_c = s.kappa_m = s.g_cm = 0;
  SweepSpec s;
  s.axes = {{"Delta1", 0.0, 1.0, 2}};
  s.fixed = {{"Delta2", 0.0}, {"Delta_m1", 0.0}, {"Delta_m2", 0.0}};
  s.pairs = {parse_pair("c1-c2")};
  const auto r = run_sweep(s, p);
  CHECK(r.at(0).flag == PointFlag::error);
  CHECK(std::isnan(r.at(0).stability_margin));
  CHECK(r.at(0).message.find("singular") != std::string::npos);
  CHECK(csv_of(r).find("NA,error,NA") != std::string::npos);
}

TEST_CASE("stability sweep: working regime is stable and the margin is continuous") {
  auto spec = preset("fig5a");
  spec.margin_only = true;
  spec.pairs.clear();
  const auto r = run_sweep(spec, SystemParams::table1());
  const double wb = SystemParams::table1().omega_b_ref();
  double max_jump = 0;
  for (std::size_t i = 0; i < r.rows(); ++i) {
    CHECK(r.at(i).stability_margin < 0);
    if (i > 0) max_jump = std::max(max_jump, std::abs(r.at(i).stability_margin - r.at(i - 1).stability_margin));
  }
  // grid step is 0.005 omega_b; the abscissa moves at most at rate ~1
  CHECK(max_jump < 0.01 * wb);
}

TEST_CASE("lossless chains are marginal or worse") {
  auto p = SystemParams::table1();
  for (auto& s : p.sub) s.kappa_c = s.kappa_m = s.gamma_b = 0;
  SweepSpec s;
  s.axes = {{"Delta1", -1.0, 1.0, 5}};
  s.margin_only = true;
  const auto r = run_sweep(s, p);
  for (const auto& pt : r.points) CHECK(pt.stability_margin >= -1e-6 * p.omega_b_ref());
}

TEST_CASE("csv layout") {
  SweepSpec s;
  s.axes = {{"Delta1", -1.0, 1.0, 3}, {"Delta2", -1.0, 1.0, 4}};
  s.fixed = {{"hop_Gamma", 0.5}};
  s.pairs = {parse_pair("c1-c2"), parse_pair("b1-b2")};
  const auto csv = csv_of(run_sweep(s, SystemParams::table1()));
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  CHECK(line == "Delta1,Delta2,stability_margin,flag,c1-c2,b1-b2");
  std::getline(in, line);
  CHECK(line.rfind("-1,-1,", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 13);
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(NAN) == "NA");
}

TEST_CASE("metadata sidecar") {
  const auto spec = preset("fig5b").with_resolution(5);
  const auto r = run_sweep(spec, SystemParams::table1());
  const auto j = sweep_metadata(r, {"hop_Gamma=1e6"});
  CHECK(j["overrides"][0] == "hop_Gamma=1e6");
  CHECK(j["spec"]["name"] == "fig5b");
  CHECK(j["points"] == 5);
  CHECK(j["flags"]["ok"] == 5);
  CHECK(j["resolved_params"]["hop_Gamma"].get<double>() == doctest::Approx(8e6));
  CHECK(j["params_hash"] == params_hash(r.base));
  CHECK(params_hash(r.base) != params_hash(SystemParams::table1()));
  CHECK(sidecar_path("out/a.csv") == fs::path("out/a.csv.meta.json"));
}

TEST_CASE("rendering") {
  SUBCASE("heatmap: one cell per grid point") {
    const auto r = run_sweep(preset("fig2a").with_resolution(6), SystemParams::table1());
    const auto svg = heatmap_svg(r, parse_pair("c1-c2"));
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(count(svg, "<rect") == 36 + 64 + 2);  // cells, colour bar, background and frame
    CHECK(svg.find("ωb") != std::string::npos);
    CHECK_THROWS_AS(line_plot_svg(r, parse_pair("c1-c2")), ConfigError);
  }
  SUBCASE("line plots for every pair") {
    const auto r = run_sweep(preset("fig5a").with_resolution(11), SystemParams::table1());
    const auto files = render_sweep(r, scratch("fig5a.csv"));
    CHECK(files.size() == 7);
    for (const auto& f : files) CHECK(fs::file_size(f) > 0);
    CHECK(files[0].filename() == "fig5a_c1-c2.svg");
  }
}
