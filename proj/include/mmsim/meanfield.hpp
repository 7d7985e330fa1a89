#pragma once

#include <array>
#include <complex>

#include "mmsim/params.hpp"

namespace mmsim {

using cplx = std::complex<double>;

/// Semiclassical steady state about which the fluctuations are linearised.
struct SteadyState {
  std::array<cplx, 2> c_avg{};
  std::array<cplx, 2> m_avg{};
  std::array<double, 2> q_avg{};
  std::array<double, 2> p_avg{};        // always exactly zero
  std::array<double, 2> Delta_m_eff{};  // rad/s
  std::array<double, 2> Delta_m0{};     // bare magnon detuning, rad/s
  std::array<cplx, 2> G_eff{};          // i*sqrt(2)*g_mb*<m>, rad/s
  std::array<double, 2> Omega{};        // drive actually used, rad/s
  int iterations = 0;
  double residual = 0;
};

struct MeanFieldOptions {
  double tol = 1e-12;
  int max_iter = 500;
};

struct Amplitudes {
  std::array<cplx, 2> c;
  std::array<cplx, 2> m;
};

/// Stationary amplitudes of the 4x4 complex system with the magnon
/// detunings frozen at `Delta_m_eff`:
///   (i Delta_k + kappa_k) c_k + i g_k m_k + h c_j = 0
///   (i Delta_m,k + kappa_m,k) m_k + i g_k c_k   = Omega_k
/// with h = i*Gamma (hamiltonian) or -Gamma (as printed).
/// Throws NumericalError("mean-field system singular").
Amplitudes solve_linear_amplitudes(const SystemParams& params,
                                   const std::array<double, 2>& Delta_m_eff,
                                   const std::array<double, 2>& Omega);

/// Max-norm residual of the frozen-q stationarity equations, relative to
/// the drive scale.
double stationarity_residual(const SystemParams& params, const SteadyState& ss);

/// Fixed-point iteration on q starting from q = 0, treating the configured
/// Delta_m as the bare detuning. Throws NumericalError("no convergence ...").
SteadyState solve_self_consistent(const SystemParams& params, const std::array<double, 2>& Omega,
                                  const MeanFieldOptions& opts = {});

/// Treats the configured Delta_m as already shifted; one linear solve.
SteadyState solve_at_effective_detuning(const SystemParams& params,
                                        const std::array<double, 2>& Omega);

/// Drive that makes |G_eff[0]| equal `target_G` keeping Omega2/Omega1 fixed.
std::array<double, 2> omega_for_target_G(const SystemParams& params, double target_G,
                                         const std::array<double, 2>& Omega_hint,
                                         const MeanFieldOptions& opts = {});

/// Dispatches on drive.detuning_ref and drive.target_G, with the drive
/// taken from derive_drive().
SteadyState solve_steady_state(const SystemParams& params, const PhysicalConstants& consts = {},
                               const MeanFieldOptions& opts = {});

}  // namespace mmsim
