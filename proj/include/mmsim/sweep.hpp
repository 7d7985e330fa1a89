#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mmsim/entanglement.hpp"
#include "mmsim/modes.hpp"
#include "mmsim/params.hpp"

namespace mmsim {

enum class AxisUnit { omega_b, kappa_c };

std::string_view to_string(AxisUnit u);

/// One swept parameter. Values are multiples of `unit`; grid endpoints are
/// hit exactly.
struct Axis {
  std::string name;  // Delta1 Delta2 Delta_m1 Delta_m2 hop_Gamma Delta_sym Delta_antisym
  double start = 0;
  double stop = 0;
  int count = 0;
  AxisUnit unit = AxisUnit::omega_b;

  double value(int i) const;
};

struct SweepSpec {
  std::string name = "custom";
  std::vector<Axis> axes;                            // one or two
  std::vector<std::pair<std::string, double>> fixed;  // applied before the axes, omega_b units
  std::vector<ModePair> pairs;
  // Cavity detunings are first set to the argmax of this pair over a coarse
  // Delta1 x Delta2 scan (used by the magnon-detuning panels).
  std::optional<ModePair> optimize_cavity_for;
  bool margin_only = false;

  /// Same protocol with every axis resampled to `count` points.
  SweepSpec with_resolution(int count) const;
};

inline constexpr int default_grid_2d = 201;
inline constexpr int default_grid_1d = 801;
inline constexpr int cavity_optimum_grid = 41;

/// Throws ConfigError describing the first problem found.
void validate(const SweepSpec& spec);

/// Sets one named coordinate on a parameter set.
void apply_coordinate(SystemParams& params, std::string_view name, double value,
                      AxisUnit unit = AxisUnit::omega_b);

std::vector<std::string> preset_names();

/// fig2a..fig2f, fig3a..fig3i, fig4a..fig4j, fig5a..fig5f. Throws
/// ConfigError listing the valid names.
SweepSpec preset(std::string_view name);

struct PointResult {
  std::array<double, 2> coord{};  // axis values (second unused for 1-D)
  double stability_margin = 0;
  PointFlag flag = PointFlag::ok;
  std::array<std::optional<double>, n_pairs> log_neg{};
  double lyapunov_residual = 0;
  double min_symplectic_offset = 0;
  std::string message;
};

struct SweepResult {
  SweepSpec spec;
  SystemParams base;  // after fixed overrides and cavity optimisation
  std::array<std::vector<double>, 2> axis_values;
  std::vector<PointResult> points;  // axis-1 major
  double elapsed_seconds = 0;
  int workers = 1;

  std::size_t rows() const { return axis_values[0].size(); }
  std::size_t cols() const { return axis_values[1].empty() ? 1 : axis_values[1].size(); }
  const PointResult& at(std::size_t i, std::size_t j = 0) const { return points[i * cols() + j]; }
};

/// Evaluates one grid point; never throws for numerical failures (they
/// become flag=error).
PointResult evaluate_point(const SweepSpec& spec, const SystemParams& base, int i, int j,
                           const PhysicalConstants& consts = {});

/// Applies fixed overrides and, if requested, the cavity-detuning optimum.
SystemParams resolve_base(const SweepSpec& spec, const SystemParams& params, int workers,
                          const PhysicalConstants& consts = {});

/// OpenMP map over grid rows. Output is bit-identical for any worker count.
SweepResult run_sweep(const SweepSpec& spec, const SystemParams& params, int workers = 0,
                      const PhysicalConstants& consts = {});

/// Single-threaded reference with the same per-point code path.
SweepResult run_sweep_serial(const SweepSpec& spec, const SystemParams& params,
                             const PhysicalConstants& consts = {});

}  // namespace mmsim
