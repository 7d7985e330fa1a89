#pragma once

// TOML configuration. Files use ordinary frequencies in Hz; everything in
// SystemParams is angular (rad/s). The conversion happens only here.
//
//   hop_Gamma = 5.0e6                    # Hz
//   hopping_convention = "hamiltonian"   # or "as_printed"
//   [cavity1]                            # cavity, magnon and phonon of subsystem 1
//   omega_c = 10e9  Delta_c = -5e6  kappa_c = 1e6
//   omega_m = 10e9  Delta_m = 10e6  kappa_m = 1e6
//   omega_b = 10e6  gamma_b = 100   g_cm = 3.2e6  g_mb = 0.3
//   omega_rabi = ...                     # optional, Hz
//   [cavity2]                            # same keys
//   [drive]
//   B0 = 3.9e-5  sphere_diameter = 250e-6  rho_spin = 4.22e27
//   magnon_detuning_reference = "effective"   # or "bare"
//   target_G = ...  omega_rabi = ...     # optional, Hz
//   [bath]
//   temperature = 0.01                   # K
//
// Absent keys keep the bundled table1.toml values; unknown keys are rejected.

#include <filesystem>
#include <span>
#include <string>
#include <string_view>

#include "json.hpp"
#include "mmsim/params.hpp"

namespace mmsim {

/// Parses TOML text. `overrides` are "key=value" or "section.key=value"
/// strings applied after the file, with values in file units.
/// Throws ConfigError (with line/column for syntax errors).
SystemParams parse_config(std::string_view text, std::string_view source_name = "<string>",
                          std::span<const std::string> overrides = {});

SystemParams load_config(const std::filesystem::path& path,
                         std::span<const std::string> overrides = {});

/// Serialises back to the file format (Hz); round-trips through parse_config.
std::string to_toml(const SystemParams& params);

/// Fully resolved parameters in file units, for metadata sidecars.
nlohmann::json to_json(const SystemParams& params);

/// Location of the bundled table1.toml.
std::filesystem::path bundled_table1_path();

}  // namespace mmsim
