#pragma once

#include <array>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace mmsim {

constexpr double two_pi = 2.0 * std::numbers::pi;

inline constexpr double hz_to_rad(double hz) { return two_pi * hz; }
inline constexpr double rad_to_hz(double rad) { return rad / two_pi; }

// Error hierarchy; the CLI maps these onto its exit codes.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct UnstableError : NumericalError {
  using NumericalError::NumericalError;
};
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// CODATA 2018 values, SI units.
struct PhysicalConstants {
  double hbar = 1.054571817e-34;     // J s
  double k_B = 1.380649e-23;         // J/K
  double c_light = 299792458.0;      // m/s
  double mu0 = 1.25663706212e-6;     // vacuum permeability
  double gamma0 = two_pi * 28.0e9;   // rad/(s T)
};

enum class HoppingConvention {
  hamiltonian,  // -i*Gamma*c_j, from Gamma (c1 c2^+ + c1^+ c2)
  as_printed,   // +Gamma*c_j in the cavity Langevin equation
};

// Whether the configured magnon detunings already include the
// magnetostrictive shift g_mb*<q>.
enum class MagnonDetuning { effective, bare };

/// One cavity together with the YIG sphere it hosts. Angular units (rad/s).
struct Subsystem {
  double omega_c = 0;  // cavity resonance, used for the thermal occupation
  double omega_m = 0;  // magnon resonance, used for the thermal occupation
  double omega_b = 0;  // phonon resonance
  double Delta_c = 0;  // cavity detuning from the drive
  double Delta_m = 0;  // magnon detuning from the drive (see MagnonDetuning)
  double kappa_c = 0;
  double kappa_m = 0;
  double gamma_b = 0;
  double g_cm = 0;  // cavity-magnon
  double g_mb = 0;  // bare magnomechanical
  std::optional<double> omega_rabi;  // overrides the field formula

  double omega_drive() const { return omega_c - Delta_c; }
};

struct DriveParams {
  double B0 = 0;               // T
  double sphere_diameter = 0;  // m
  double rho_spin = 0;         // spins / m^3
  // When set, Omega is rescaled per point so that |G_eff| of subsystem 1
  // equals this value (rad/s); the Omega2/Omega1 ratio is preserved.
  std::optional<double> target_G;
  MagnonDetuning detuning_ref = MagnonDetuning::effective;
};

struct SystemParams {
  std::array<Subsystem, 2> sub{};
  double hop_Gamma = 0;  // photon hopping, rad/s
  HoppingConvention hopping = HoppingConvention::hamiltonian;
  DriveParams drive{};
  double temperature = 0;  // K

  /// Reference phonon frequency used as the unit of the sweep axes.
  double omega_b_ref() const { return sub[0].omega_b; }

  /// Experimental values of the magnomechanical literature (both subsystems
  /// identical), hopping 0.5*omega_b, working point Delta_c = -0.5*omega_b,
  /// Delta_m = omega_b.
  static SystemParams table1();
};

struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

/// Reports every violated invariant at once; never throws.
ValidationReport validate(const SystemParams& params);

/// Throws ConfigError listing all violations when params are unusable.
void require_valid(const SystemParams& params);

struct DerivedDrive {
  double N_spin = 0;
  std::array<double, 2> Omega_rabi{};  // rad/s
  double drive_power = 0;              // W
  double power_ratio_to_table = 0;     // drive_power / 9.8 mW
};

inline constexpr double table1_drive_power = 9.8e-3;  // W

DerivedDrive derive_drive(const SystemParams& params,
                          const PhysicalConstants& consts = {});

/// Bose occupation at angular frequency omega. Exactly zero at T = 0.
double thermal_occupation(double omega, double temperature,
                          const PhysicalConstants& consts = {});

}  // namespace mmsim
