#include "mmsim/lyapunov.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <sstream>

#include "mmsim/dynamics.hpp"

namespace mmsim {

namespace {

// Packed index of (i, j), i <= j, in row-major upper-triangle order.
inline Eigen::Index packed(Eigen::Index i, Eigen::Index j, Eigen::Index n) {
  if (i > j) std::swap(i, j);
  return i * n - i * (i - 1) / 2 + (j - i);
}

}  // namespace

Eigen::MatrixXd symplectic_form(Eigen::Index n_modes) {
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(2 * n_modes, 2 * n_modes);
  for (Eigen::Index k = 0; k < n_modes; ++k) {
    J(2 * k, 2 * k + 1) = 1.0;
    J(2 * k + 1, 2 * k) = -1.0;
  }
  return J;
}

UncertaintyCheck uncertainty_check(const Eigen::MatrixXd& V) {
  if (V.rows() != V.cols() || V.rows() % 2 != 0)
    throw NumericalError("uncertainty check needs an even square covariance");
  const Eigen::MatrixXcd H =
      V.cast<std::complex<double>>() +
      std::complex<double>(0.0, 0.5) * symplectic_form(V.rows() / 2).cast<std::complex<double>>();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H, Eigen::EigenvaluesOnly);
  UncertaintyCheck out;
  out.min_offset = es.eigenvalues().minCoeff();
  out.pass = out.min_offset >= physicality_tol;
  return out;
}

CovarianceMatrix solve_lyapunov(const Eigen::MatrixXd& M, const Eigen::MatrixXd& D) {
  return solve_lyapunov(M, D, stability_margin(M));
}

CovarianceMatrix solve_lyapunov(const Eigen::MatrixXd& M, const Eigen::MatrixXd& D,
                                double known_stability_margin) {
  const Eigen::Index n = M.rows();
  if (M.cols() != n || D.rows() != n || D.cols() != n)
    throw NumericalError("Lyapunov solve: dimension mismatch");
  if (!(known_stability_margin < 0)) {
    std::ostringstream os;
    os << "unstable drift matrix (stability margin " << known_stability_margin << ")";
    throw UnstableError(os.str());
  }

  // Row (i, j) of the packed system: sum_k M_ik V_kj + V_ik M_jk = -D_ij.
  const Eigen::Index m = n * (n + 1) / 2;
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(m, m);
  Eigen::VectorXd rhs(m);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      const Eigen::Index row = packed(i, j, n);
      rhs(row) = -0.5 * (D(i, j) + D(j, i));
      for (Eigen::Index k = 0; k < n; ++k) {
        A(row, packed(k, j, n)) += M(i, k);
        A(row, packed(i, k, n)) += M(j, k);
      }
    }
  }

  Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
  Eigen::VectorXd v = lu.solve(rhs);
  v += lu.solve(rhs - A * v);  // one step of iterative refinement

  CovarianceMatrix out;
  out.V.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i; j < n; ++j) out.V(i, j) = out.V(j, i) = v(packed(i, j, n));

  const double d_norm = D.norm();
  const double r_norm = (M * out.V + out.V * M.transpose() + D).norm();
  out.residual_norm = d_norm > 0 ? r_norm / d_norm : r_norm;

  const double rcond = lu.rcond();
  if (rcond > 0 && 1.0 / rcond > lyapunov_condition_limit) {
    std::ostringstream os;
    os << "ill-conditioned Lyapunov system (condition estimate " << 1.0 / rcond << ")";
    out.warning = os.str();
  } else if (rcond == 0) {
    out.warning = "singular Lyapunov system";
  }

  const UncertaintyCheck uc = uncertainty_check(out.V);
  out.physical = uc.pass;
  out.min_symplectic_offset = uc.min_offset;
  return out;
}

}  // namespace mmsim
