#pragma once

#include <Eigen/Core>
#include <array>
#include <optional>
#include <string>

#include "mmsim/dynamics.hpp"
#include "mmsim/lyapunov.hpp"
#include "mmsim/meanfield.hpp"
#include "mmsim/modes.hpp"

namespace mmsim {

using Mat4 = Eigen::Matrix4d;

inline constexpr double symplectic_agreement_tol = 1e-9;

/// 4x4 covariance of (x_a, y_a, x_b, y_b).
Mat4 reduce_covariance(const Eigen::MatrixXd& V, const ModePair& pair);

enum class TransposedSide { first, second };

struct SymplecticPT {
  double spectral = 0;     // min |eig(i Omega4 V~)|
  double closed_form = 0;  // Simon invariants
};

/// Smallest symplectic eigenvalue of the partially transposed V4, by both
/// routes. Throws NumericalError("symplectic eigenvalue inconsistency") if
/// they disagree beyond 1e-9 relative, or on a negative discriminant.
SymplecticPT min_symplectic_eigenvalue_pt(const Mat4& V4,
                                          TransposedSide side = TransposedSide::first);

/// max(0, -ln(2 eta-)).
double log_negativity(const Mat4& V4, TransposedSide side = TransposedSide::first);

enum class PointFlag { ok, unstable, unphysical, error };

std::string_view to_string(PointFlag f);

struct EntanglementReport {
  std::array<std::optional<double>, n_pairs> log_neg{};  // indexed by ModePair::index()
  double stability_margin = 0;
  PointFlag flag = PointFlag::ok;
  std::string message;  // diagnostic for non-ok flags
  SteadyState steady_state;
  double lyapunov_residual = 0;
  double min_symplectic_offset = 0;

  std::optional<double> at(const ModePair& pair) const { return log_neg[pair.index()]; }
};

struct ReportOptions {
  MeanFieldOptions meanfield{};
  bool margin_only = false;  // stop after the stability gate
};

/// meanfield -> drift/diffusion -> stability gate -> Lyapunov -> E_N for
/// all 15 pairs. Unstable points return flag=unstable and no values.
/// Upstream errors are rethrown with the parameter point attached.
EntanglementReport full_report(const SystemParams& params, const PhysicalConstants& consts = {},
                               const ReportOptions& opts = {});

}  // namespace mmsim
