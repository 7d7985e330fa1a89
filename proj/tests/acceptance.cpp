// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails. Runs every preset at full resolution, so expect a few
// minutes on a single core.

#include <Eigen/Dense>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <sstream>
#include <string>

#include <omp.h>

#include "mmsim/entanglement.hpp"
#include "mmsim/sweep.hpp"
#include "mmsim/sweep_io.hpp"
#include "oracles.hpp"

using namespace mmsim;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void verdict(int id, bool pass, const std::string& what, const std::string& detail) {
  std::printf("criterion %2d: %s  %s  [%s]\n", id, pass ? "PASS" : "FAIL", what.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string csv_of(const SweepResult& r) {
  std::ostringstream os;
  write_csv(r, os);
  return os.str();
}

// Aggregates over every evaluated preset point.
struct Tally {
  std::size_t points = 0, ok = 0, unstable = 0, unphysical = 0, errors = 0;
  double worst_residual = 0;
  double worst_offset = INFINITY;
  std::string first_error;
};

struct PresetStats {
  std::size_t points = 0, nonnegative_margin = 0;
  double max_margin = -INFINITY;
};

PresetStats absorb(const SweepResult& r, Tally& t) {
  PresetStats s;
  for (const auto& pt : r.points) {
    ++t.points;
    ++s.points;
    switch (pt.flag) {
      case PointFlag::ok:
        ++t.ok;
        t.worst_residual = std::max(t.worst_residual, pt.lyapunov_residual);
        t.worst_offset = std::min(t.worst_offset, pt.min_symplectic_offset);
        break;
      case PointFlag::unstable: ++t.unstable; break;
      case PointFlag::unphysical: ++t.unphysical; break;
      case PointFlag::error:
        ++t.errors;
        if (t.first_error.empty()) t.first_error = pt.message;
        break;
    }
    if (!(pt.stability_margin < 0)) ++s.nonnegative_margin;
    if (std::isfinite(pt.stability_margin)) s.max_margin = std::max(s.max_margin, pt.stability_margin);
  }
  return s;
}

// Relabelling 1 <-> 2 swaps the subsystems in the base and transposes the
// grid (both axes share a range). Compares E(c1-m2), E(c1-b2) at each point
// with E(c2-m1), E(c2-b1) of the relabelled system.
double mirror_gap(const SweepResult& r) {
  const std::size_t cm = parse_pair("c1-m2").index(), mc = parse_pair("c2-m1").index();
  const std::size_t cb = parse_pair("c1-b2").index(), bc = parse_pair("c2-b1").index();
  SystemParams swapped = r.base;
  std::swap(swapped.sub[0], swapped.sub[1]);
  double gap = 0;
  for (std::size_t i = 0; i < r.rows(); ++i)
    for (std::size_t j = 0; j < r.cols(); ++j) {
      const auto& a = r.at(i, j);
      if (a.flag != PointFlag::ok) continue;
      const auto b = evaluate_point(r.spec, swapped, static_cast<int>(j), static_cast<int>(i));
      if (b.flag != PointFlag::ok) return INFINITY;
      gap = std::max({gap, std::abs(*a.log_neg[cm] - *b.log_neg[mc]), std::abs(*a.log_neg[cb] - *b.log_neg[bc])});
    }
  return gap;
}

}  // namespace

int main() {
  const SystemParams base = SystemParams::table1();
  const double wb = base.omega_b_ref();

  // -- sweep every preset once; criteria 1, 2, 7, 9, 10, 12 read from these
  std::printf("evaluating all presets at full resolution...\n");
  std::fflush(stdout);
  Tally tally;
  std::map<std::string, PresetStats> stats;
  double fig2a_seconds = 0;
  std::string fig2a_csv;
  double worst_mirror = 0;
  const auto t_all = Clock::now();
  for (const auto& name : preset_names()) {
    const auto t0 = Clock::now();
    const SweepResult r = run_sweep(preset(name), base, name == "fig2a" ? 8 : 0);
    if (name == "fig2a") {
      fig2a_seconds = seconds_since(t0);
      fig2a_csv = csv_of(r);
    }
    stats[name] = absorb(r, tally);
    if (name.rfind("fig2", 0) == 0) worst_mirror = std::max(worst_mirror, mirror_gap(r));
    std::printf("  %-6s %6zu points  %7.2f s\n", name.c_str(), r.points.size(), seconds_since(t0));
    std::fflush(stdout);
  }
  std::printf("  total %.1f s\n", seconds_since(t_all));

  // 1. residuals over every evaluated point, plus per-point cost
  {
    std::mt19937 rng(1);
    std::uniform_real_distribution<double> det(-2.0, 2.0);
    const int samples = 400;
    const auto t0 = Clock::now();
    for (int i = 0; i < samples; ++i) {
      SystemParams p = base;
      apply_coordinate(p, "Delta1", det(rng));
      apply_coordinate(p, "Delta2", det(rng));
      (void)full_report(p);
    }
    const double ms = 1e3 * seconds_since(t0) / samples;
    const bool pass = tally.errors == 0 && tally.unphysical == 0 && tally.worst_residual < 1e-10 && ms < 5.0;
    verdict(1, pass, "Lyapunov residual < 1e-10 on every preset point, < 5 ms per point",
            "evaluated " + std::to_string(tally.ok) + ", errors " + std::to_string(tally.errors) +
                ", worst residual " + fmt(tally.worst_residual) + ", " + fmt(ms) + " ms/point" +
                (tally.first_error.empty() ? "" : ", first error: " + tally.first_error));
  }

  // 2. uncertainty relation at every stable point
  verdict(2, tally.unphysical == 0 && tally.worst_offset >= physicality_tol,
          "every stable covariance satisfies the uncertainty relation",
          "min offset " + fmt(tally.worst_offset) + ", unphysical " + std::to_string(tally.unphysical));

  // 3. two-mode squeezed vacuum
  {
    double worst = 0;
    for (double r : {0.1, 0.5, 1.0, 2.0}) worst = std::max(worst, std::abs(log_negativity(oracle::tmsv(r)) - 2 * r));
    verdict(3, worst < 1e-9, "two-mode squeezed vacuum gives E_N = 2r", "max error " + fmt(worst));
  }

  // 4. damped cavity block with its detuning rotation
  {
    const auto& s = base.sub[0];
    double worst = 0;
    for (double n : {0.0, 1.0, 20.3}) {
      Eigen::MatrixXd M(2, 2);
      M << -s.kappa_c, s.Delta_c, -s.Delta_c, -s.kappa_c;
      const Eigen::MatrixXd D = s.kappa_c * (2 * n + 1) * Eigen::MatrixXd::Identity(2, 2);
      const Eigen::MatrixXd want = (n + 0.5) * Eigen::MatrixXd::Identity(2, 2);
      worst = std::max(worst, oracle::rel_err(solve_lyapunov(M, D).V, want));
    }
    verdict(4, worst < 1e-12, "single damped mode relaxes to (n + 1/2) I", "max relative error " + fmt(worst));
  }

  // 5. no hopping, no cross-cavity entanglement
  {
    SweepSpec s;
    s.axes = {{"Delta1", -2.0, 2.0, 21}, {"Delta2", -2.0, 2.0, 21}};
    s.fixed = {{"Delta_m1", 1.0}, {"Delta_m2", 1.0}, {"hop_Gamma", 0.0}};
    s.pairs.assign(pair_catalog().begin(), pair_catalog().end());
    const auto t0 = Clock::now();
    const auto r = run_sweep(s, base);
    const double secs = seconds_since(t0);
    double worst = 0;
    std::size_t missing = 0;
    for (const auto& pt : r.points)
      for (const auto& pair : pair_catalog()) {
        if (!pair.cross_cavity()) continue;
        if (!pt.log_neg[pair.index()]) ++missing;
        else worst = std::max(worst, *pt.log_neg[pair.index()]);
      }
    verdict(5, missing == 0 && worst < 1e-12 && secs < 10.0, "hopping off: nine cross-cavity pairs vanish on 21x21",
            "max " + fmt(worst) + ", missing " + std::to_string(missing) + ", " + fmt(secs) + " s");
  }

  // 6. peak location on the 81x81 cavity-detuning map
  {
    const auto r = run_sweep(preset("fig2a").with_resolution(81), base);
    const std::size_t k = parse_pair("c1-c2").index();
    std::size_t bi = 0, bj = 0;
    double best = -1;
    for (std::size_t i = 0; i < r.rows(); ++i)
      for (std::size_t j = 0; j < r.cols(); ++j) {
        const auto& v = r.at(i, j).log_neg[k];
        if (v && *v > best) {
          best = *v;
          bi = i;
          bj = j;
        }
      }
    // (-0.5, -0.5) is index 30 on a 0.05 grid from -2; 0.15 is three cells
    const long di = std::labs(static_cast<long>(bi) - 30), dj = std::labs(static_cast<long>(bj) - 30);
    const bool located = di <= 3 && dj <= 3;
    const auto& blue = r.at(60, 60);  // (1, 1)
    const double e_blue = blue.log_neg[k].value_or(NAN);
    verdict(6, located && e_blue > 0,
            "E_N(c1-c2) peaks within 0.15 of (-0.5, -0.5) and is positive at (1, 1)",
            "argmax (" + fmt(r.axis_values[0][bi]) + ", " + fmt(r.axis_values[1][bj]) + ") value " + fmt(best) +
                ", E_N at (1, 1) = " + fmt(e_blue));
  }

  // 7. mirrored pairs on all fig2 grids
  verdict(7, worst_mirror < 1e-8, "E(c1-m2) and E(c1-b2) equal E(c2-m1) and E(c2-b1) under 1 <-> 2 relabelling, fig2a-f",
          "max gap " + fmt(worst_mirror));

  // 8. magnitude band along the symmetric detuning line
  {
    const auto r = run_sweep(preset("fig5a"), base);
    const std::size_t cc = parse_pair("c1-c2").index();
    const std::size_t mb1 = parse_pair("m1-b1").index(), mb2 = parse_pair("m2-b2").index();
    double max_cc = 0, max_mb = 0;
    for (const auto& pt : r.points) {
      if (pt.flag != PointFlag::ok) continue;
      max_cc = std::max(max_cc, *pt.log_neg[cc]);
      max_mb = std::max({max_mb, *pt.log_neg[mb1], *pt.log_neg[mb2]});
    }
    const bool pass = max_cc >= 0.3 && max_cc <= 0.9 && max_mb >= 0.1 && max_mb <= 0.35;
    verdict(8, pass, "fig5a: max E(c1-c2) in [0.3, 0.9], max E(m-b) in [0.1, 0.35]",
            "max E(c1-c2) " + fmt(max_cc) + ", max E(m-b) " + fmt(max_mb));
  }

  // 9. stability across the plotted presets
  {
    std::size_t bad = 0, points = 0;
    double worst = -INFINITY;
    std::vector<std::string> names = {"fig2a"};
    for (char c = 'a'; c <= 'i'; ++c) names.push_back(std::string("fig3") + c);
    for (char c = 'a'; c <= 'f'; ++c) names.push_back(std::string("fig5") + c);
    for (const auto& n : names) {
      bad += stats[n].nonnegative_margin;
      points += stats[n].points;
      worst = std::max(worst, stats[n].max_margin);
    }
    verdict(9, bad == 0, "stability margin < 0 on fig2a, fig3a-i, fig5a-f",
            std::to_string(points) + " points, " + std::to_string(bad) + " not stable, max margin " +
                fmt(worst / wb) + " omega_b");
  }

  // 10. byte-identical CSV across worker counts
  {
    const auto spec = preset("fig2a");
    const bool same1 = csv_of(run_sweep(spec, base, 1)) == fig2a_csv;
    const bool same3 = csv_of(run_sweep(spec, base, 3)) == fig2a_csv;
    verdict(10, same1 && same3, "fig2a CSV identical with 1, 3 and 8 workers",
            std::string("1 vs 8: ") + (same1 ? "same" : "differs") + ", 3 vs 8: " + (same3 ? "same" : "differs"));
  }

  // 11. direct solution against time integration
  {
    std::mt19937 rng(4242);
    double worst = 0;
    for (int trial = 0; trial < 10; ++trial) {
      const Eigen::MatrixXd M = oracle::random_stable(4, rng);
      const Eigen::MatrixXd D = oracle::random_psd(4, rng);
      const double decay = -M.eigenvalues().real().maxCoeff();
      const double fastest = M.eigenvalues().cwiseAbs().maxCoeff();
      const Eigen::MatrixXd V_int = oracle::integrate_lyapunov(M, D, 0.05 / fastest, 40.0 / decay);
      worst = std::max(worst, oracle::rel_err(solve_lyapunov(M, D).V, V_int));
    }
    verdict(11, worst < 1e-6, "Lyapunov solve matches RK4-integrated stationary covariance (10 random 4x4)",
            "max relative error " + fmt(worst));
  }

  // 12. desk-scale runtime
  verdict(12, fig2a_seconds < 300.0, "fig2a at 201x201 with 8 workers in under 5 minutes",
          fmt(fig2a_seconds) + " s on " + std::to_string(omp_get_num_procs()) + " cores");

  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
