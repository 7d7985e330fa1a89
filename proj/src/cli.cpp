#include "mmsim/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "mmsim/config.hpp"
#include "mmsim/render.hpp"
#include "mmsim/sweep.hpp"
#include "mmsim/sweep_io.hpp"

namespace mmsim {

namespace fs = std::filesystem;

namespace {

struct Options {
  std::string config;
  std::vector<std::string> overrides;
  std::vector<std::string> points;  // name=value in omega_b units
  std::string preset_name;
  std::vector<std::string> axes;
  std::vector<std::string> pairs;
  int grid = 0;
  std::string out;
  std::string json;
  bool render = false;
  int workers = 0;
  std::string dump_matrices;
  std::string dump_covariance;
  bool list = false;
};

std::pair<std::string, double> split_assignment(const std::string& s) {
  const auto eq = s.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("expected name=value, got '" + s + "'");
  const std::string value = s.substr(eq + 1);
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != value.size()) throw ConfigError("not a number in '" + s + "'");
  return {s.substr(0, eq), v};
}

// name:start:stop:count[:unit]
Axis parse_axis(const std::string& s) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  for (std::string part; std::getline(ss, part, ':');) parts.push_back(part);
  if (parts.size() != 4 && parts.size() != 5)
    throw ConfigError("axis '" + s + "' should be name:start:stop:count[:unit]");
  Axis a;
  a.name = parts[0];
  try {
    a.start = std::stod(parts[1]);
    a.stop = std::stod(parts[2]);
    a.count = std::stoi(parts[3]);
  } catch (const std::exception&) {
    throw ConfigError("axis '" + s + "' has a malformed number");
  }
  if (parts.size() == 5) {
    if (parts[4] == "omega_b") a.unit = AxisUnit::omega_b;
    else if (parts[4] == "kappa_c") a.unit = AxisUnit::kappa_c;
    else throw ConfigError("axis unit must be omega_b or kappa_c, got '" + parts[4] + "'");
  }
  return a;
}

SystemParams load_params(const Options& o) {
  SystemParams p = load_config(o.config, o.overrides);
  for (const auto& pt : o.points) {
    const auto [name, value] = split_assignment(pt);
    apply_coordinate(p, name, value);
  }
  require_valid(p);
  return p;
}

nlohmann::json invocation_json(const Options& o, const SystemParams& p) {
  return {{"code_version", MMSIM_VERSION},
          {"config", o.config},
          {"overrides", o.overrides},
          {"points", o.points},
          {"resolved_params", to_json(p)},
          {"params_hash", params_hash(p)}};
}

void write_matrix_csv(const Eigen::MatrixXd& m, const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  const auto order = canonical_order();
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    out << (j ? "," : "") << (m.cols() == 12 ? std::string(label(order[j])) : std::to_string(j));
  out << '\n';
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) out << (j ? "," : "") << format_number(m(i, j));
    out << '\n';
  }
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

std::string fmt(double v, int prec = 6) {
  std::ostringstream os;
  os << std::setprecision(prec) << v;
  return os.str();
}

int cmd_report(const Options& o, std::ostream& out) {
  const SystemParams p = load_params(o);
  const PhysicalConstants consts;
  const DerivedDrive drive = derive_drive(p, consts);
  const EntanglementReport rep = full_report(p, consts);
  const SteadyState& ss = rep.steady_state;
  const double wb = p.omega_b_ref();

  out << "drive power " << fmt(drive.drive_power * 1e3) << " mW (ratio to 9.8 mW: "
      << fmt(drive.power_ratio_to_table, 4) << ")\n";
  for (int k = 0; k < 2; ++k)
    out << "subsystem " << k + 1 << ": |<m>| " << fmt(std::abs(ss.m_avg[k])) << "  <q> "
        << fmt(ss.q_avg[k]) << "  Delta_m_eff " << fmt(ss.Delta_m_eff[k] / wb)
        << " omega_b  |G_eff| " << fmt(std::abs(ss.G_eff[k]) / wb) << " omega_b\n";
  out << "mean field: " << ss.iterations << " iterations, residual " << fmt(ss.residual, 3) << '\n';
  out << "stability margin " << fmt(rep.stability_margin / wb) << " omega_b\n";

  nlohmann::json j = invocation_json(o, p);
  j["stability_margin"] = rep.stability_margin;
  j["flag"] = std::string(to_string(rep.flag));
  j["drive_power"] = drive.drive_power;

  if (rep.flag == PointFlag::unstable) {
    out << "unstable: no steady state\n";
    if (!o.json.empty()) write_json(j, o.json);
    return exit_unstable;
  }
  if (rep.flag != PointFlag::ok) out << "flag " << to_string(rep.flag) << ": " << rep.message << '\n';
  out << "lyapunov residual " << fmt(rep.lyapunov_residual, 3) << "  min symplectic offset "
      << fmt(rep.min_symplectic_offset, 3) << '\n';
  for (const ModePair& pair : pair_catalog()) {
    const auto v = rep.at(pair);
    out << "E_N " << std::left << std::setw(6) << pair.id() << ' '
        << (v ? fmt(*v, 8) : std::string("NA")) << '\n';
    j["log_neg"][pair.id()] = v ? nlohmann::json(*v) : nlohmann::json(nullptr);
  }

  if (!o.dump_matrices.empty() || !o.dump_covariance.empty()) {
    const Mat12 M = build_drift(p, ss);
    const Mat12 D = build_diffusion(p, consts);
    if (!o.dump_matrices.empty()) {
      fs::create_directories(o.dump_matrices);
      write_matrix_csv(M, fs::path(o.dump_matrices) / "drift.csv");
      write_matrix_csv(D, fs::path(o.dump_matrices) / "diffusion.csv");
      write_json(invocation_json(o, p), fs::path(o.dump_matrices) / "meta.json");
    }
    if (!o.dump_covariance.empty())
      write_matrix_csv(solve_lyapunov(M, D, rep.stability_margin).V, o.dump_covariance);
  }
  if (!o.json.empty()) write_json(j, o.json);
  return exit_ok;
}

SweepSpec build_spec(const Options& o, bool margin_only) {
  SweepSpec spec;
  if (!o.preset_name.empty()) {
    if (!o.axes.empty()) throw ConfigError("use either --preset or --axis, not both");
    spec = preset(o.preset_name);
  } else {
    if (o.axes.empty()) throw ConfigError("a sweep needs --preset or --axis");
    for (const auto& a : o.axes) spec.axes.push_back(parse_axis(a));
  }
  if (!o.pairs.empty()) {
    spec.pairs.clear();
    for (const auto& id : o.pairs) spec.pairs.push_back(parse_pair(id));
  }
  if (o.grid > 0) spec = spec.with_resolution(o.grid);
  if (margin_only) {
    spec.margin_only = true;
    spec.pairs.clear();
    spec.optimize_cavity_for.reset();
  }
  return spec;
}

int cmd_sweep(const Options& o, bool margin_only, std::ostream& out) {
  if (o.out.empty()) throw ConfigError("--out is required");
  const SystemParams p = load_params(o);
  const SweepSpec spec = build_spec(o, margin_only);
  validate(spec);
  const SweepResult r = run_sweep(spec, p, o.workers);

  write_csv(r, fs::path(o.out));
  nlohmann::json meta = sweep_metadata(r, o.overrides);
  meta["config"] = o.config;
  meta["points_overrides"] = o.points;
  write_json(meta, sidecar_path(o.out));
  std::size_t unstable = 0, failed = 0;
  double worst = -INFINITY;
  for (const auto& pt : r.points) {
    unstable += pt.flag == PointFlag::unstable;
    failed += pt.flag == PointFlag::error || pt.flag == PointFlag::unphysical;
    if (std::isfinite(pt.stability_margin)) worst = std::max(worst, pt.stability_margin);
  }
  out << r.points.size() << " points -> " << o.out << " (" << fmt(r.elapsed_seconds, 3) << " s, "
      << r.workers << " workers)\n"
      << "unstable " << unstable << ", failed " << failed << ", max margin "
      << fmt(worst / r.base.omega_b_ref()) << " omega_b\n";
  if (o.render)
    for (const auto& path : render_sweep(r, o.out)) out << "wrote " << path.string() << '\n';
  return exit_ok;
}

int cmd_preset(const Options& o, std::ostream& out) {
  if (o.list || o.preset_name.empty()) {
    for (const auto& n : preset_names()) out << n << '\n';
    return exit_ok;
  }
  out << to_json(preset(o.preset_name)).dump(2) << '\n';
  return exit_ok;
}

int cmd_dump(const Options& o, std::ostream& out) {
  if (o.out.empty()) throw ConfigError("--out <dir> is required");
  const SystemParams p = load_params(o);
  const PhysicalConstants consts;
  const SteadyState ss = solve_steady_state(p, consts);
  const LinearModel model = build_linear_model(p, ss, consts);
  fs::create_directories(o.out);
  const fs::path dir(o.out);
  write_matrix_csv(model.M, dir / "drift.csv");
  write_matrix_csv(model.D, dir / "diffusion.csv");
  nlohmann::json meta = invocation_json(o, p);
  meta["stability_margin"] = model.stability_margin;
  if (model.stable()) {
    write_matrix_csv(solve_lyapunov(model.M, model.D, model.stability_margin).V,
                     dir / "covariance.csv");
  }
  write_json(meta, dir / "meta.json");
  out << "wrote " << dir.string() << (model.stable() ? "" : " (unstable: no covariance)") << '\n';
  return exit_ok;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Steady-state entanglement of two hopping-coupled cavity magnomechanical systems",
               "mmsim"};
  app.set_version_flag("--version", std::string(MMSIM_VERSION));
  app.require_subcommand(1);
  Options o;

  auto add_config = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "TOML parameter file (Hz)")->required();
    sub->add_option("--set", o.overrides, "override key=value in file units (repeatable)");
    sub->add_option("--point", o.points,
                    "set Delta1, Delta2, Delta_m1, Delta_m2, hop_Gamma, Delta_sym or "
                    "Delta_antisym in units of omega_b (repeatable)");
  };
  auto add_grid = [&](CLI::App* sub) {
    add_config(sub);
    sub->add_option("--preset", o.preset_name, "named protocol");
    sub->add_option("--axis", o.axes, "name:start:stop:count[:unit], up to two");
    sub->add_option("--grid", o.grid, "resample every axis to N points");
    sub->add_option("--out", o.out, "output CSV")->required();
    sub->add_option("--workers", o.workers, "threads (0 = all)");
    sub->add_flag("--render", o.render, "write SVG plots beside the CSV");
  };

  auto* report = app.add_subcommand("report", "one parameter point: mean field, stability, E_N");
  add_config(report);
  report->add_option("--json", o.json, "machine-readable report");
  report->add_option("--dump-matrices", o.dump_matrices, "write drift.csv and diffusion.csv here");
  report->add_option("--dump-covariance", o.dump_covariance, "write the 12x12 covariance CSV");

  auto* sweep = app.add_subcommand("sweep", "E_N over a 1-D or 2-D grid");
  add_grid(sweep);
  sweep->add_option("--pairs", o.pairs, "pair ids such as c1-c2");

  auto* stability = app.add_subcommand("stability", "stability margin over a grid");
  add_grid(stability);

  auto* pre = app.add_subcommand("preset", "list or show named protocols");
  pre->add_flag("--list", o.list, "list preset names");
  pre->add_option("name", o.preset_name, "preset to show");

  auto* dump = app.add_subcommand("dump", "write drift, diffusion and covariance CSVs");
  add_config(dump);
  dump->add_option("--out", o.out, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? exit_ok : exit_config;
  }

  try {
    if (report->parsed()) return cmd_report(o, out);
    if (sweep->parsed()) return cmd_sweep(o, false, out);
    if (stability->parsed()) return cmd_sweep(o, true, out);
    if (pre->parsed()) return cmd_preset(o, out);
    return cmd_dump(o, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return exit_config;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << '\n';
    return exit_io;
  } catch (const fs::filesystem_error& e) {
    err << "i/o error: " << e.what() << '\n';
    return exit_io;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_failure;
  }
}

int run_cli(int argc, const char* const* argv) { return run_cli(argc, argv, std::cout, std::cerr); }

}  // namespace mmsim
