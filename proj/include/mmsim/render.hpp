#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "mmsim/sweep.hpp"

namespace mmsim {

// Minimal SVG output: a heatmap per pair for 2-D sweeps, a line plot per
// pair for 1-D sweeps. Fixed viridis-like colormap, axes in sweep units.

std::string heatmap_svg(const SweepResult& result, const ModePair& pair);
std::string line_plot_svg(const SweepResult& result, const ModePair& pair);
std::string margin_plot_svg(const SweepResult& result);

/// Writes `<stem>_<pair>.svg` for every requested pair beside `csv_path`
/// and returns the paths. Throws IoError.
std::vector<std::filesystem::path> render_sweep(const SweepResult& result,
                                                const std::filesystem::path& csv_path);

}  // namespace mmsim
