#include "mmsim/sweep.hpp"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <set>

namespace mmsim {

std::string_view to_string(AxisUnit u) { return u == AxisUnit::omega_b ? "omega_b" : "kappa_c"; }

double Axis::value(int i) const {
  if (i == count - 1) return stop;
  return start + (stop - start) * static_cast<double>(i) / static_cast<double>(count - 1);
}

SweepSpec SweepSpec::with_resolution(int count) const {
  SweepSpec out = *this;
  for (auto& a : out.axes) a.count = count;
  return out;
}

namespace {

const std::set<std::string, std::less<>> coordinate_names = {
    "Delta1", "Delta2", "Delta_m1", "Delta_m2", "hop_Gamma", "Delta_sym", "Delta_antisym"};

// Subsystem detunings each coordinate writes to; used to reject axes that
// fight over the same parameter.
std::vector<std::string> touched(std::string_view name) {
  if (name == "Delta_sym" || name == "Delta_antisym") return {"Delta1", "Delta2"};
  return {std::string(name)};
}

}  // namespace

void validate(const SweepSpec& spec) {
  if (spec.axes.empty() || spec.axes.size() > 2)
    throw ConfigError("a sweep needs one or two axes");
  std::set<std::string> seen;
  for (const Axis& a : spec.axes) {
    if (!coordinate_names.contains(a.name))
      throw ConfigError("unknown sweep axis '" + a.name +
                        "' (expected Delta1 Delta2 Delta_m1 Delta_m2 hop_Gamma Delta_sym "
                        "Delta_antisym)");
    if (a.count < 2) throw ConfigError("axis '" + a.name + "' needs at least 2 points");
    if (!(std::isfinite(a.start) && std::isfinite(a.stop)) || a.start == a.stop)
      throw ConfigError("axis '" + a.name + "' needs distinct finite start and stop");
    if (a.unit == AxisUnit::kappa_c && a.name != "hop_Gamma")
      throw ConfigError("only hop_Gamma may be measured in units of kappa_c");
    for (const auto& t : touched(a.name))
      if (!seen.insert(t).second) throw ConfigError("sweep axes overlap on '" + t + "'");
  }
  for (const auto& [name, value] : spec.fixed) {
    if (!coordinate_names.contains(name)) throw ConfigError("unknown fixed parameter '" + name + "'");
    if (!std::isfinite(value)) throw ConfigError("fixed parameter '" + name + "' must be finite");
  }
  if (spec.pairs.empty() && !spec.margin_only) throw ConfigError("a sweep needs at least one pair");
}

void apply_coordinate(SystemParams& p, std::string_view name, double value, AxisUnit unit) {
  const double scale = unit == AxisUnit::omega_b ? p.omega_b_ref() : p.sub[0].kappa_c;
  const double v = value * scale;
  if (name == "Delta1") p.sub[0].Delta_c = v;
  else if (name == "Delta2") p.sub[1].Delta_c = v;
  else if (name == "Delta_m1") p.sub[0].Delta_m = v;
  else if (name == "Delta_m2") p.sub[1].Delta_m = v;
  else if (name == "hop_Gamma") p.hop_Gamma = v;
  else if (name == "Delta_sym") p.sub[0].Delta_c = p.sub[1].Delta_c = v;
  else if (name == "Delta_antisym") {
    p.sub[0].Delta_c = v;
    p.sub[1].Delta_c = -v;
  } else {
    throw ConfigError("unknown coordinate '" + std::string(name) + "'");
  }
}

PointResult evaluate_point(const SweepSpec& spec, const SystemParams& base, int i, int j,
                           const PhysicalConstants& consts) {
  PointResult out;
  SystemParams p = base;
  out.coord[0] = spec.axes[0].value(i);
  apply_coordinate(p, spec.axes[0].name, out.coord[0], spec.axes[0].unit);
  if (spec.axes.size() == 2) {
    out.coord[1] = spec.axes[1].value(j);
    apply_coordinate(p, spec.axes[1].name, out.coord[1], spec.axes[1].unit);
  }

  ReportOptions opts;
  opts.margin_only = spec.margin_only;
  try {
    const EntanglementReport rep = full_report(p, consts, opts);
    out.stability_margin = rep.stability_margin;
    out.flag = rep.flag;
    out.message = rep.message;
    out.lyapunov_residual = rep.lyapunov_residual;
    out.min_symplectic_offset = rep.min_symplectic_offset;
    out.log_neg = rep.log_neg;
  } catch (const std::exception& err) {
    out.flag = PointFlag::error;
    out.stability_margin = std::nan("");
    out.message = err.what();
  }
  return out;
}

namespace {

SweepResult prepare(const SweepSpec& spec, const SystemParams& base) {
  SweepResult r;
  r.spec = spec;
  r.base = base;
  for (std::size_t a = 0; a < spec.axes.size(); ++a) {
    r.axis_values[a].resize(spec.axes[a].count);
    for (int i = 0; i < spec.axes[a].count; ++i) r.axis_values[a][i] = spec.axes[a].value(i);
  }
  r.points.resize(r.rows() * r.cols());
  return r;
}

void evaluate_row(SweepResult& r, std::size_t i, const PhysicalConstants& consts) {
  for (std::size_t j = 0; j < r.cols(); ++j)
    r.points[i * r.cols() + j] =
        evaluate_point(r.spec, r.base, static_cast<int>(i), static_cast<int>(j), consts);
}

int resolve_workers(int workers) { return workers > 0 ? workers : omp_get_max_threads(); }

SweepResult run(const SweepSpec& spec, const SystemParams& params, int workers, bool serial,
                const PhysicalConstants& consts) {
  validate(spec);
  require_valid(params);
  const auto t0 = std::chrono::steady_clock::now();

  SweepResult r = prepare(spec, resolve_base(spec, params, serial ? 1 : workers, consts));
  const auto rows = static_cast<long>(r.rows());
  if (serial) {
    r.workers = 1;
    for (long i = 0; i < rows; ++i) evaluate_row(r, static_cast<std::size_t>(i), consts);
  } else {
    r.workers = resolve_workers(workers);
#pragma omp parallel for schedule(dynamic) num_threads(r.workers)
    for (long i = 0; i < rows; ++i) evaluate_row(r, static_cast<std::size_t>(i), consts);
  }

  r.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

}  // namespace

SystemParams resolve_base(const SweepSpec& spec, const SystemParams& params, int workers,
                          const PhysicalConstants& consts) {
  SystemParams base = params;
  for (const auto& [name, value] : spec.fixed) apply_coordinate(base, name, value);
  if (!spec.optimize_cavity_for) return base;

  SweepSpec coarse;
  coarse.name = spec.name + ":cavity-optimum";
  coarse.axes = {{"Delta1", -2.0, 2.0, cavity_optimum_grid}, {"Delta2", -2.0, 2.0, cavity_optimum_grid}};
  coarse.pairs = {*spec.optimize_cavity_for};
  const SweepResult scan = workers == 1 ? run_sweep_serial(coarse, base, consts)
                                        : run_sweep(coarse, base, workers, consts);

  const std::size_t k = spec.optimize_cavity_for->index();
  const PointResult* best = nullptr;
  for (const auto& pt : scan.points)
    if (pt.log_neg[k] && (!best || *pt.log_neg[k] > *best->log_neg[k])) best = &pt;
  if (!best) throw ConfigError("cavity-detuning optimisation found no stable point");
  apply_coordinate(base, "Delta1", best->coord[0]);
  apply_coordinate(base, "Delta2", best->coord[1]);
  return base;
}

SweepResult run_sweep(const SweepSpec& spec, const SystemParams& params, int workers,
                      const PhysicalConstants& consts) {
  return run(spec, params, workers, /*serial=*/false, consts);
}

SweepResult run_sweep_serial(const SweepSpec& spec, const SystemParams& params,
                             const PhysicalConstants& consts) {
  return run(spec, params, 1, /*serial=*/true, consts);
}

// ---------------------------------------------------------------------------
// Presets

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (char c = 'a'; c <= 'f'; ++c) names.push_back(std::string("fig2") + c);
  for (char c = 'a'; c <= 'i'; ++c) names.push_back(std::string("fig3") + c);
  for (char c = 'a'; c <= 'j'; ++c) names.push_back(std::string("fig4") + c);
  for (char c = 'a'; c <= 'f'; ++c) names.push_back(std::string("fig5") + c);
  return names;
}

namespace {

using M = Mode;

std::vector<ModePair> family(int f) {
  switch (f) {
    case 0: return {ModePair(M::c1, M::c2)};
    case 1: return {ModePair(M::c1, M::m2), ModePair(M::c2, M::m1)};
    default: return {ModePair(M::c1, M::b2), ModePair(M::c2, M::b1)};
  }
}

constexpr double fig2_hopping = 0.5;

SweepSpec cavity_map(double hop) {
  SweepSpec s;
  s.axes = {{"Delta1", -2.0, 2.0, default_grid_2d}, {"Delta2", -2.0, 2.0, default_grid_2d}};
  s.fixed = {{"Delta_m1", 1.0}, {"Delta_m2", 1.0}, {"hop_Gamma", hop}};
  return s;
}

}  // namespace

SweepSpec preset(std::string_view name) {
  const auto names = preset_names();
  if (std::find(names.begin(), names.end(), name) == names.end()) {
    std::string msg = "unknown preset '" + std::string(name) + "'; valid presets:";
    for (const auto& n : names) msg += " " + n;
    throw ConfigError(msg);
  }
  const char fig = name[3];
  const int panel = name[4] - 'a';
  SweepSpec s;

  if (fig == '2') {
    s = cavity_map(fig2_hopping);
    s.pairs = family(panel % 3);
    if (panel >= 3) {
      s.axes = {{"Delta_m1", 0.8, 1.1, default_grid_2d}, {"Delta_m2", 0.8, 1.1, default_grid_2d}};
      s.optimize_cavity_for = s.pairs.front();
    }
  } else if (fig == '3') {
    static constexpr double hops[] = {0.5, 0.8, 1.0};
    s = cavity_map(hops[panel / 3]);
    s.pairs = family(panel % 3);
  } else if (fig == '4') {
    // hopping axis in units of kappa_c, 0..10
    s.axes = {{"Delta1", -2.0, 2.0, default_grid_2d},
              {"hop_Gamma", 0.0, 10.0, default_grid_2d, AxisUnit::kappa_c}};
    s.fixed = {{"Delta2", panel < 5 ? 1.0 : -1.0}, {"Delta_m1", 1.0}, {"Delta_m2", 1.0}};
    static const std::array<ModePair, 5> panel_pairs = {
        ModePair(M::c1, M::c2), ModePair(M::c1, M::m2), ModePair(M::c2, M::m1),
        ModePair(M::c1, M::b2), ModePair(M::c2, M::b1)};
    s.pairs = {panel_pairs[panel % 5]};
  } else {
    static constexpr double hops[] = {0.5, 0.8, 1.0};
    s.axes = {{panel < 3 ? "Delta_sym" : "Delta_antisym", -2.0, 2.0, default_grid_1d}};
    s.fixed = {{"Delta_m1", 1.0}, {"Delta_m2", 1.0}, {"hop_Gamma", hops[panel % 3]}};
    s.pairs = {ModePair(M::c1, M::c2), ModePair(M::m1, M::b1), ModePair(M::m2, M::b2),
               ModePair(M::c1, M::m2), ModePair(M::c2, M::m1), ModePair(M::c1, M::b2),
               ModePair(M::c2, M::b1)};
  }
  s.name = std::string(name);
  return s;
}

}  // namespace mmsim
