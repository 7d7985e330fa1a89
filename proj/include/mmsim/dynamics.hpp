#pragma once

#include <Eigen/Core>

#include "mmsim/meanfield.hpp"
#include "mmsim/modes.hpp"
#include "mmsim/params.hpp"

namespace mmsim {

using Mat12 = Eigen::Matrix<double, 12, 12>;

/// Drift and diffusion of the linearised quadrature fluctuations,
/// dF/dt = M F + N, in canonical ModeOrder.
struct LinearModel {
  Mat12 M;
  Mat12 D;
  ModeOrder order = canonical_order();
  double stability_margin = 0;  // max Re(eig M), rad/s
  bool stable() const { return stability_margin < 0; }
};

/// Drift matrix from linearising the Langevin equations about `ss`, with
/// x = (dm + dm^+)/sqrt2, y = (dm - dm^+)/(i sqrt2) for every mode. Complex
/// G enters as x_k' -= Re G q_k, y_k' -= Im G q_k, p_k' += -Im G x_k + Re G y_k.
Mat12 build_drift(const SystemParams& params, const SteadyState& ss);

/// Diagonal diffusion matrix: kappa(2n+1) on both quadratures of photons
/// and magnons, gamma_b(2n_b+1) on momentum, zero on position. `order`
/// permutes rows and columns.
Mat12 build_diffusion(const SystemParams& params, const PhysicalConstants& consts = {},
                      const ModeOrder& order = canonical_order());

/// Spectral abscissa. Throws NumericalError (with a matrix dump) if the
/// eigen-solver fails.
double stability_margin(const Eigen::MatrixXd& M);

LinearModel build_linear_model(const SystemParams& params, const SteadyState& ss,
                               const PhysicalConstants& consts = {});

}  // namespace mmsim
