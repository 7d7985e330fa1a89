#pragma once

#include <Eigen/Core>
#include <optional>
#include <string>

#include "mmsim/params.hpp"

namespace mmsim {

inline constexpr double lyapunov_residual_tol = 1e-10;
inline constexpr double physicality_tol = -1e-9;
inline constexpr double lyapunov_condition_limit = 1e14;

struct UncertaintyCheck {
  bool pass = false;
  double min_offset = 0;  // smallest eigenvalue of V + (i/2) Omega_s
};

/// Steady-state covariance (vacuum variance 1/2).
struct CovarianceMatrix {
  Eigen::MatrixXd V;
  double residual_norm = 0;  // ||MV + VM^T + D||_F / ||D||_F
  bool physical = false;
  double min_symplectic_offset = 0;
  std::optional<std::string> warning;  // set for ill-conditioned solves
};

/// Solves M V + V M^T = -D for symmetric V as a dense linear system in the
/// n(n+1)/2 independent entries. Throws UnstableError("unstable drift
/// matrix") unless every eigenvalue of M has negative real part.
CovarianceMatrix solve_lyapunov(const Eigen::MatrixXd& M, const Eigen::MatrixXd& D);

/// Same, skipping the eigenvalue gate when the caller already holds the
/// spectral abscissa.
CovarianceMatrix solve_lyapunov(const Eigen::MatrixXd& M, const Eigen::MatrixXd& D,
                                double known_stability_margin);

/// Robertson-Schroedinger check for a covariance over n modes laid out as
/// consecutive (position, momentum) pairs.
UncertaintyCheck uncertainty_check(const Eigen::MatrixXd& V);

/// Block-diagonal symplectic form, [[0, 1], [-1, 0]] per mode.
Eigen::MatrixXd symplectic_form(Eigen::Index n_modes);

}  // namespace mmsim
