#include "mmsim/meanfield.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>

namespace mmsim {

namespace {

constexpr cplx I{0.0, 1.0};

cplx hopping_coefficient(const SystemParams& p) {
  return p.hopping == HoppingConvention::hamiltonian ? I * p.hop_Gamma : cplx(-p.hop_Gamma, 0.0);
}

struct LinearSystem {
  Eigen::Matrix4cd A;
  Eigen::Vector4cd b;
};

// unknowns ordered (c1, c2, m1, m2)
LinearSystem assemble(const SystemParams& p, const std::array<double, 2>& Delta_m_eff,
                      const std::array<double, 2>& Omega) {
  LinearSystem sys;
  sys.A.setZero();
  sys.b.setZero();
  const cplx h = hopping_coefficient(p);
  for (int k = 0; k < 2; ++k) {
    const Subsystem& s = p.sub[k];
    const int j = 1 - k;
    sys.A(k, k) = I * s.Delta_c + s.kappa_c;
    sys.A(k, 2 + k) = I * s.g_cm;
    sys.A(k, j) = h;
    sys.A(2 + k, 2 + k) = I * Delta_m_eff[k] + s.kappa_m;
    sys.A(2 + k, k) = I * s.g_cm;
    sys.b(2 + k) = Omega[k];
  }
  return sys;
}

double q_of(const Subsystem& s, cplx m) { return -s.g_mb / s.omega_b * std::norm(m); }

void finish(const SystemParams& p, SteadyState& ss) {
  for (int k = 0; k < 2; ++k) {
    ss.p_avg[k] = 0.0;
    ss.G_eff[k] = I * std::sqrt(2.0) * p.sub[k].g_mb * ss.m_avg[k];
  }
  ss.residual = stationarity_residual(p, ss);
}

}  // namespace

Amplitudes solve_linear_amplitudes(const SystemParams& params,
                                   const std::array<double, 2>& Delta_m_eff,
                                   const std::array<double, 2>& Omega) {
  const auto sys = assemble(params, Delta_m_eff, Omega);
  Eigen::FullPivLU<Eigen::Matrix4cd> lu(sys.A);
  if (!lu.isInvertible()) throw NumericalError("mean-field system singular");
  const Eigen::Vector4cd x = lu.solve(sys.b);
  return {{x(0), x(1)}, {x(2), x(3)}};
}

double stationarity_residual(const SystemParams& params, const SteadyState& ss) {
  const auto sys = assemble(params, ss.Delta_m_eff, ss.Omega);
  const Eigen::Vector4cd x(ss.c_avg[0], ss.c_avg[1], ss.m_avg[0], ss.m_avg[1]);
  const double drive_scale = std::max(sys.b.cwiseAbs().maxCoeff(), 1e-300);
  double r = (sys.A * x - sys.b).cwiseAbs().maxCoeff() / drive_scale;
  if (sys.b.cwiseAbs().maxCoeff() == 0.0) r = (sys.A * x).cwiseAbs().maxCoeff();

  for (int k = 0; k < 2; ++k) {
    const Subsystem& s = params.sub[k];
    const double q_expected = q_of(s, ss.m_avg[k]);
    const double q_scale = std::max(1.0, std::abs(q_expected));
    r = std::max(r, std::abs(ss.q_avg[k] - q_expected) / q_scale);
    const double shift_scale = std::max(1.0, std::abs(ss.Delta_m_eff[k]));
    r = std::max(r, std::abs(ss.Delta_m_eff[k] - (ss.Delta_m0[k] + s.g_mb * ss.q_avg[k])) /
                        shift_scale);
  }
  return r;
}

SteadyState solve_self_consistent(const SystemParams& params, const std::array<double, 2>& Omega,
                                  const MeanFieldOptions& opts) {
  if (!(opts.tol > 0) || opts.max_iter < 1)
    throw NumericalError("mean-field solver needs tol > 0 and max_iter >= 1");

  SteadyState ss;
  ss.Omega = Omega;
  for (int k = 0; k < 2; ++k) ss.Delta_m0[k] = params.sub[k].Delta_m;

  using Q = std::array<double, 2>;
  auto shifted = [&](const Q& q) {
    Q d{};
    for (int k = 0; k < 2; ++k) d[k] = ss.Delta_m0[k] + params.sub[k].g_mb * q[k];
    return d;
  };
  // q -> q implied by the amplitudes at the shifted detuning
  auto image = [&](const Q& q, Amplitudes* amp_out = nullptr) {
    const Amplitudes amp = solve_linear_amplitudes(params, shifted(q), Omega);
    if (amp_out) *amp_out = amp;
    return Q{q_of(params.sub[0], amp.m[0]), q_of(params.sub[1], amp.m[1])};
  };
  auto try_finish = [&](const Q& q, int it) {
    ss.q_avg = q;
    ss.Delta_m_eff = shifted(q);
    const Amplitudes amp = solve_linear_amplitudes(params, ss.Delta_m_eff, Omega);
    ss.c_avg = amp.c;
    ss.m_avg = amp.m;
    ss.iterations = it;
    finish(params, ss);
    return ss.residual <= opts.tol;
  };

  // Damped fixed-point iteration q <- q + lambda (image(q) - q). Near the
  // bistable region the map has a steep negative slope and the plain step
  // oscillates, so lambda halves whenever three iterations pass without a
  // new smallest change and recovers slowly while progress continues.
  Q q{0.0, 0.0};
  std::array<cplx, 2> m_prev{};
  double lambda = 1.0, best = INFINITY, last_change = INFINITY;
  int stalled = 0;
  const int damped_budget = std::min(opts.max_iter, 100);
  int it = 1;
  for (; it <= damped_budget; ++it) {
    Amplitudes amp;
    const Q q_new = image(q, &amp);
    double scale = 1.0, change = 0.0;
    for (int k = 0; k < 2; ++k) {
      scale = std::max({scale, std::abs(q_new[k]), std::abs(amp.m[k])});
      change = std::max(change, std::abs(q_new[k] - q[k]));
      if (it > 1) {
        change = std::max(change, std::abs(amp.m[k].real() - m_prev[k].real()));
        change = std::max(change, std::abs(amp.m[k].imag() - m_prev[k].imag()));
      }
    }
    change /= scale;
    m_prev = amp.m;
    last_change = change;
    if (change < opts.tol && try_finish(q_new, it)) return ss;

    if (change < best) {
      best = change;
      stalled = 0;
      lambda = std::min(1.0, lambda * 1.1);
    } else if (++stalled >= 3) {
      lambda = std::max(lambda * 0.5, 1.0 / 4096);
      stalled = 0;
    }
    for (int k = 0; k < 2; ++k) q[k] += lambda * (q_new[k] - q[k]);
  }

  // Fallback: alternate one-dimensional root solves for each q_k with the
  // other frozen. image(q) <= 0 always, so [lo, 0] brackets a root once
  // image_k(lo) > lo; bisection then cannot wander off the way the
  // iteration does when the map repels its fixed point.
  auto root_k = [&](Q x, int k) {
    auto F = [&](double v) {
      x[k] = v;
      return image(x)[k] - v;
    };
    const double f0 = F(0.0);
    if (f0 == 0.0) return 0.0;
    double hi = 0.0, lo = std::min(-1.0, 2.0 * f0);
    for (int grow = 0; F(lo) <= 0.0; ++grow) {
      if (grow > 200) throw NumericalError("mean-field root bracket not found");
      hi = lo;
      lo *= 2.0;
    }
    for (int b = 0; b < 200 && hi - lo > 1e-15 * std::abs(lo); ++b) {
      const double mid = 0.5 * (lo + hi);
      (F(mid) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  };
  for (; it <= opts.max_iter; ++it) {
    const Q prev = q;
    for (int k = 0; k < 2; ++k) q[k] = root_k(q, k);
    const double scale = std::max({1.0, std::abs(q[0]), std::abs(q[1])});
    last_change = std::max(std::abs(q[0] - prev[0]), std::abs(q[1] - prev[1])) / scale;
    if (last_change < opts.tol && try_finish(q, it)) return ss;
  }
  throw NumericalError("no convergence after " + std::to_string(opts.max_iter) +
                       " mean-field iterations (last change " + std::to_string(last_change) +
                       ")");
}

SteadyState solve_at_effective_detuning(const SystemParams& params,
                                        const std::array<double, 2>& Omega) {
  SteadyState ss;
  ss.Omega = Omega;
  for (int k = 0; k < 2; ++k) ss.Delta_m_eff[k] = params.sub[k].Delta_m;
  const Amplitudes amp = solve_linear_amplitudes(params, ss.Delta_m_eff, Omega);
  ss.c_avg = amp.c;
  ss.m_avg = amp.m;
  for (int k = 0; k < 2; ++k) {
    ss.q_avg[k] = q_of(params.sub[k], amp.m[k]);
    ss.Delta_m0[k] = ss.Delta_m_eff[k] - params.sub[k].g_mb * ss.q_avg[k];
  }
  ss.iterations = 1;
  finish(params, ss);
  return ss;
}

std::array<double, 2> omega_for_target_G(const SystemParams& params, double target_G,
                                         const std::array<double, 2>& Omega_hint,
                                         const MeanFieldOptions& opts) {
  if (target_G == 0.0) return {0.0, 0.0};
  std::array<double, 2> Omega = Omega_hint;
  if (Omega[0] == 0.0) Omega = {1.0, Omega[1] == 0.0 ? 1.0 : Omega[1]};

  const bool bare = params.drive.detuning_ref == MagnonDetuning::bare;
  for (int pass = 0; pass < 100; ++pass) {
    const SteadyState ss = bare ? solve_self_consistent(params, Omega, opts)
                                : solve_at_effective_detuning(params, Omega);
    const double G = std::abs(ss.G_eff[0]);
    if (G == 0.0) throw NumericalError("target G unreachable: magnon 1 is not driven");
    const double ratio = target_G / G;
    if (std::abs(ratio - 1.0) < 1e-12) return Omega;
    Omega[0] *= ratio;
    Omega[1] *= ratio;
    if (!bare) return Omega;  // |G| is linear in Omega at fixed detuning
  }
  throw NumericalError("target G calibration did not converge");
}

SteadyState solve_steady_state(const SystemParams& params, const PhysicalConstants& consts,
                               const MeanFieldOptions& opts) {
  const DerivedDrive drive = derive_drive(params, consts);
  std::array<double, 2> Omega = drive.Omega_rabi;
  if (params.drive.target_G) Omega = omega_for_target_G(params, *params.drive.target_G, Omega, opts);
  return params.drive.detuning_ref == MagnonDetuning::bare
             ? solve_self_consistent(params, Omega, opts)
             : solve_at_effective_detuning(params, Omega);
}

}  // namespace mmsim
