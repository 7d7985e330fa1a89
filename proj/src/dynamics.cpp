#include "mmsim/dynamics.hpp"

#include <Eigen/Eigenvalues>
#include <sstream>

namespace mmsim {

// Compared with the drift matrix as usually printed for this model:
//  * row y2 carries -kappa_m2 on its diagonal (printed as -kappa_b2);
//  * row p2 carries -gamma_b2 (printed with a positive sign);
//  * G is complex in general, so both Re G and Im G appear (the printed
//    form assumes real G, where only the x-row and p-from-y entries survive).
Mat12 build_drift(const SystemParams& params, const SteadyState& ss) {
  Mat12 M = Mat12::Zero();
  const bool hamiltonian = params.hopping == HoppingConvention::hamiltonian;
  const double hop = params.hop_Gamma;

  for (int k = 0; k < 2; ++k) {
    const Subsystem& s = params.sub[k];
    const int j = 1 - k;
    const int X = 2 * k, Y = X + 1;      // cavity k
    const int Xj = 2 * j, Yj = Xj + 1;   // other cavity
    const int x = 4 + 2 * k, y = x + 1;  // magnon k
    const int q = 8 + 2 * k, p = q + 1;  // phonon k
    const double Dm = ss.Delta_m_eff[k];
    const double ReG = ss.G_eff[k].real();
    const double ImG = ss.G_eff[k].imag();

    M(X, X) = -s.kappa_c;
    M(X, Y) = s.Delta_c;
    M(Y, X) = -s.Delta_c;
    M(Y, Y) = -s.kappa_c;
    M(X, y) = s.g_cm;
    M(Y, x) = -s.g_cm;
    if (hamiltonian) {
      M(X, Yj) = hop;
      M(Y, Xj) = -hop;
    } else {
      M(X, Xj) = hop;
      M(Y, Yj) = hop;
    }

    M(x, x) = -s.kappa_m;
    M(x, y) = Dm;
    M(y, x) = -Dm;
    M(y, y) = -s.kappa_m;
    M(x, Y) = s.g_cm;
    M(y, X) = -s.g_cm;
    M(x, q) = -ReG;
    M(y, q) = -ImG;

    M(q, p) = s.omega_b;
    M(p, q) = -s.omega_b;
    M(p, p) = -s.gamma_b;
    M(p, x) = -ImG;
    M(p, y) = ReG;
  }
  return M;
}

Mat12 build_diffusion(const SystemParams& params, const PhysicalConstants& consts,
                      const ModeOrder& order) {
  const double T = params.temperature;
  Mat12 D = Mat12::Zero();
  for (std::size_t i = 0; i < n_quadratures; ++i) {
    const auto q = static_cast<std::size_t>(order[i]);
    const Subsystem& s = params.sub[(q / 2) % 2];
    double value = 0.0;
    switch (q / 4) {
      case 0:
        value = s.kappa_c * (2.0 * thermal_occupation(s.omega_c, T, consts) + 1.0);
        break;
      case 1:
        value = s.kappa_m * (2.0 * thermal_occupation(s.omega_m, T, consts) + 1.0);
        break;
      default:
        // thermal force acts on the momentum only
        if (q % 2 == 1) value = s.gamma_b * (2.0 * thermal_occupation(s.omega_b, T, consts) + 1.0);
        break;
    }
    D(i, i) = value;
  }
  return D;
}

double stability_margin(const Eigen::MatrixXd& M) {
  if (M.rows() != M.cols()) throw NumericalError("stability margin needs a square matrix");
  Eigen::EigenSolver<Eigen::MatrixXd> es(M, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success) {
    std::ostringstream os;
    os << "eigenvalue computation failed for drift matrix\n" << M;
    throw NumericalError(os.str());
  }
  return es.eigenvalues().real().maxCoeff();
}

LinearModel build_linear_model(const SystemParams& params, const SteadyState& ss,
                               const PhysicalConstants& consts) {
  LinearModel lm;
  lm.M = build_drift(params, ss);
  lm.D = build_diffusion(params, consts);
  lm.stability_margin = stability_margin(lm.M);
  return lm;
}

}  // namespace mmsim
