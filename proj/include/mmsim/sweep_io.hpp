#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "mmsim/sweep.hpp"

namespace mmsim {

/// One row per grid point: axis1[,axis2],stability_margin,flag,<pair ids>.
/// Missing values are written as NA. Numbers use the shortest
/// round-trip representation, so equal results give equal bytes.
void write_csv(const SweepResult& result, std::ostream& out);
void write_csv(const SweepResult& result, const std::filesystem::path& path);

/// Shortest round-trip decimal form ("NA" for NaN).
std::string format_number(double v);

nlohmann::json to_json(const SweepSpec& spec);

/// FNV-1a over the canonical TOML serialisation.
std::string params_hash(const SystemParams& params);

nlohmann::json sweep_metadata(const SweepResult& result, const std::vector<std::string>& overrides);

void write_json(const nlohmann::json& j, const std::filesystem::path& path);

/// `<out>.meta.json` next to a CSV.
std::filesystem::path sidecar_path(const std::filesystem::path& csv_path);

}  // namespace mmsim
