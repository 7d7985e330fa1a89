#include "mmsim/entanglement.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <sstream>

namespace mmsim {

Mat4 reduce_covariance(const Eigen::MatrixXd& V, const ModePair& pair) {
  if (V.rows() != static_cast<Eigen::Index>(n_quadratures) || V.cols() != V.rows())
    throw NumericalError("reduce_covariance expects a 12x12 covariance");
  const std::array<Eigen::Index, 4> idx = {
      static_cast<Eigen::Index>(quadrature_offset(pair.a())),
      static_cast<Eigen::Index>(quadrature_offset(pair.a()) + 1),
      static_cast<Eigen::Index>(quadrature_offset(pair.b())),
      static_cast<Eigen::Index>(quadrature_offset(pair.b()) + 1)};
  Mat4 out;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) out(r, c) = V(idx[r], idx[c]);
  return out;
}

SymplecticPT min_symplectic_eigenvalue_pt(const Mat4& V4, TransposedSide side) {
  // Partial transposition flips the momentum quadrature of one mode.
  Eigen::Vector4d flip(1.0, 1.0, 1.0, 1.0);
  flip(side == TransposedSide::first ? 1 : 3) = -1.0;
  const Mat4 Vt = flip.asDiagonal() * V4 * flip.asDiagonal();

  Mat4 J = Mat4::Zero();
  J(0, 1) = J(2, 3) = 1.0;
  J(1, 0) = J(3, 2) = -1.0;

  SymplecticPT out;
  Eigen::EigenSolver<Mat4> es(J * Vt, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success) throw NumericalError("symplectic spectrum failed");
  out.spectral = es.eigenvalues().cwiseAbs().minCoeff();

  // Simon invariants of the transposed matrix. With the untransposed
  // off-diagonal block C this reads det A + det B - 2 det C.
  const Eigen::Matrix2d A = Vt.topLeftCorner<2, 2>(), B = Vt.bottomRightCorner<2, 2>();
  const Eigen::Matrix2d C = Vt.topRightCorner<2, 2>();
  const Eigen::Matrix2d J2 = J.topLeftCorner<2, 2>();
  const double detA = A.determinant(), detB = B.determinant(), detC = C.determinant();
  const double sigma = detA + detB + 2.0 * detC;
  const double det = Vt.determinant();
  // sigma^2 - 4 det expanded so that nearly degenerate symplectic
  // eigenvalues (e.g. uncorrelated identical modes) do not cancel
  const double cross = (A * J2 * C * J2 * B * J2 * C.transpose() * J2).trace();
  double disc = (detA - detB) * (detA - detB) + 4.0 * detC * (detA + detB) + 4.0 * cross;
  if (disc < -1e-12 * sigma * sigma)
    throw NumericalError("negative symplectic discriminant: unphysical covariance");
  if (det < 0) throw NumericalError("negative covariance determinant: unphysical covariance");
  disc = std::max(disc, 0.0);
  const double eta_plus = std::sqrt(0.5 * (sigma + std::sqrt(disc)));
  out.closed_form = std::sqrt(det) / eta_plus;

  const double scale = std::max(out.spectral, out.closed_form);
  if (std::abs(out.spectral - out.closed_form) > symplectic_agreement_tol * scale) {
    std::ostringstream os;
    os.precision(17);
    os << "symplectic eigenvalue inconsistency: spectral " << out.spectral << " vs closed form "
       << out.closed_form;
    throw NumericalError(os.str());
  }
  return out;
}

double log_negativity(const Mat4& V4, TransposedSide side) {
  const SymplecticPT eta = min_symplectic_eigenvalue_pt(V4, side);
  return std::max(0.0, -std::log(2.0 * eta.closed_form));
}

std::string_view to_string(PointFlag f) {
  switch (f) {
    case PointFlag::ok: return "ok";
    case PointFlag::unstable: return "unstable";
    case PointFlag::unphysical: return "unphysical";
    case PointFlag::error: return "error";
  }
  return "error";
}

namespace {

std::string describe_point(const SystemParams& p) {
  const double wb = p.omega_b_ref();
  std::ostringstream os;
  os << "Delta1=" << p.sub[0].Delta_c / wb << " Delta2=" << p.sub[1].Delta_c / wb
     << " Delta_m1=" << p.sub[0].Delta_m / wb << " Delta_m2=" << p.sub[1].Delta_m / wb
     << " hop_Gamma=" << p.hop_Gamma / wb << " (units of omega_b)";
  return os.str();
}

}  // namespace

EntanglementReport full_report(const SystemParams& params, const PhysicalConstants& consts,
                               const ReportOptions& opts) {
  EntanglementReport rep;
  try {
    rep.steady_state = solve_steady_state(params, consts, opts.meanfield);
    const Mat12 M = build_drift(params, rep.steady_state);
    rep.stability_margin = stability_margin(M);
    if (!(rep.stability_margin < 0)) {
      rep.flag = PointFlag::unstable;
      return rep;
    }
    if (opts.margin_only) return rep;

    const Mat12 D = build_diffusion(params, consts);
    const CovarianceMatrix cov = solve_lyapunov(M, D, rep.stability_margin);
    rep.lyapunov_residual = cov.residual_norm;
    rep.min_symplectic_offset = cov.min_symplectic_offset;
    if (!cov.physical) {
      rep.flag = PointFlag::unphysical;
      rep.message = "covariance violates the uncertainty relation";
      return rep;
    }
    for (const ModePair& pair : pair_catalog())
      rep.log_neg[pair.index()] = log_negativity(reduce_covariance(cov.V, pair));
  } catch (const NumericalError& err) {
    throw NumericalError(std::string(err.what()) + " [at " + describe_point(params) + "]");
  }
  return rep;
}

}  // namespace mmsim
