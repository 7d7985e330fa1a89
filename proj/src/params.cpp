#include "mmsim/params.hpp"

#include <cmath>
#include <sstream>

namespace mmsim {

SystemParams SystemParams::table1() {
  Subsystem s;
  s.omega_c = hz_to_rad(10.0e9);
  s.omega_m = hz_to_rad(10.0e9);
  s.omega_b = hz_to_rad(10.0e6);
  s.Delta_c = -0.5 * s.omega_b;
  s.Delta_m = s.omega_b;
  s.kappa_c = hz_to_rad(1.0e6);
  s.kappa_m = hz_to_rad(1.0e6);
  s.gamma_b = hz_to_rad(100.0);
  s.g_cm = hz_to_rad(3.2e6);
  s.g_mb = hz_to_rad(0.3);

  SystemParams p;
  p.sub = {s, s};
  p.hop_Gamma = 0.5 * s.omega_b;
  p.drive.B0 = 3.9e-5;
  p.drive.sphere_diameter = 250e-6;
  p.drive.rho_spin = 4.22e27;
  p.temperature = 10e-3;
  return p;
}

namespace {

bool finite_nonneg(double v) { return std::isfinite(v) && v >= 0.0; }

}  // namespace

ValidationReport validate(const SystemParams& params) {
  ValidationReport r;
  auto fail = [&](const std::string& msg) { r.violations.push_back(msg); };

  for (int k = 0; k < 2; ++k) {
    const Subsystem& s = params.sub[k];
    const std::string tag = "subsystem " + std::to_string(k + 1) + ": ";
    if (!(std::isfinite(s.omega_b) && s.omega_b > 0))
      fail(tag + "phonon frequency must be positive");
    if (!finite_nonneg(s.omega_c)) fail(tag + "cavity frequency must be nonnegative");
    if (!finite_nonneg(s.omega_m)) fail(tag + "magnon frequency must be nonnegative");
    if (!std::isfinite(s.Delta_c)) fail(tag + "cavity detuning must be finite");
    if (!std::isfinite(s.Delta_m)) fail(tag + "magnon detuning must be finite");
    if (!finite_nonneg(s.kappa_c)) fail(tag + "cavity decay rate must be nonnegative");
    if (!finite_nonneg(s.kappa_m)) fail(tag + "magnon decay rate must be nonnegative");
    if (!finite_nonneg(s.gamma_b)) fail(tag + "mechanical damping must be nonnegative");
    if (!finite_nonneg(s.g_cm)) fail(tag + "cavity-magnon coupling must be nonnegative");
    if (!finite_nonneg(s.g_mb)) fail(tag + "magnomechanical coupling must be nonnegative");
    if (s.omega_rabi && !finite_nonneg(*s.omega_rabi))
      fail(tag + "Rabi frequency override must be nonnegative");
  }
  if (!finite_nonneg(params.hop_Gamma)) fail("hopping rate must be nonnegative");
  if (!finite_nonneg(params.drive.B0)) fail("drive field must be nonnegative");
  if (!(std::isfinite(params.drive.sphere_diameter) && params.drive.sphere_diameter > 0))
    fail("sphere diameter must be positive");
  if (!(std::isfinite(params.drive.rho_spin) && params.drive.rho_spin > 0))
    fail("spin density must be positive");
  if (params.drive.target_G && !finite_nonneg(*params.drive.target_G))
    fail("target G must be nonnegative");
  if (!finite_nonneg(params.temperature)) fail("temperature nonnegative");
  return r;
}

void require_valid(const SystemParams& params) {
  const auto report = validate(params);
  if (report.ok()) return;
  std::ostringstream os;
  os << "invalid parameters:";
  for (const auto& v : report.violations) os << "\n  - " << v;
  throw ConfigError(os.str());
}

DerivedDrive derive_drive(const SystemParams& params, const PhysicalConstants& consts) {
  const double r = 0.5 * params.drive.sphere_diameter;
  const double volume = 4.0 / 3.0 * std::numbers::pi * r * r * r;

  DerivedDrive d;
  d.N_spin = params.drive.rho_spin * volume;
  const double from_field =
      std::sqrt(5.0) / 4.0 * consts.gamma0 * std::sqrt(d.N_spin) * params.drive.B0;
  for (int k = 0; k < 2; ++k)
    d.Omega_rabi[k] = params.sub[k].omega_rabi.value_or(from_field);

  // The printed power formula's "mu" is read as the vacuum permeability.
  const double B0 = params.drive.B0;
  d.drive_power = B0 * B0 * std::numbers::pi * r * r * consts.c_light / (2.0 * consts.mu0);
  d.power_ratio_to_table = d.drive_power / table1_drive_power;
  return d;
}

double thermal_occupation(double omega, double temperature, const PhysicalConstants& consts) {
  if (!(omega > 0))
    throw NumericalError("thermal occupation requires a positive frequency");
  if (temperature < 0) throw NumericalError("temperature must be nonnegative");
  if (temperature == 0) return 0.0;
  const double x = consts.hbar * omega / (consts.k_B * temperature);
  return 1.0 / std::expm1(x);
}

}  // namespace mmsim
