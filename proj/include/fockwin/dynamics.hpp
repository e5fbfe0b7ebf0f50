#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "fockwin/damping.hpp"
#include "fockwin/states.hpp"
#include "fockwin/types.hpp"

namespace fockwin {

/// How the upper-corner population is advanced.
enum class ClosureMode {
  Leaky,         ///< raw equations; population may leave the window
  PaperClosure,  ///< rho44 = 1 - rho11 - rho22 - rho33 (d/dt of the constraint)
};

/// Coefficient table of the 16 coupled equations.
enum class EquationForm {
  /// Exactly as printed: the rho13/rho31 (2n1+m1+3) decay term carries no
  /// thermal factor and rho14/rho41 decay at (n1+1)(n1+m1+1).
  Strict,
  /// rho13/rho31 thermal term symmetrized with rho12/rho21 (factor nbar), and
  /// the rho14/rho41 vacuum decay set to (n1+m1+2) so that the vacuum solution
  /// carries the e^{-2(1+m1)Theta} coherence exponent.
  Corrected,
};

struct EvolutionParams {
  FockWindow window;
  double nbar = 0.0;
  ClosureMode closure = ClosureMode::Leaky;
  EquationForm form = EquationForm::Corrected;
};

struct IntegratorOptions {
  int substeps = 100;  ///< RK4 steps per output interval
};

template <typename Real>
struct Trajectory {
  std::vector<Real> times;
  std::vector<DensityMatrix<Real>> states;
};

inline void check_params(const EvolutionParams& p) {
  check_window(p.window);
  if (!(p.nbar >= 0)) throw DomainError("thermal occupation must be >= 0");
}

/// Right-hand side of the window equations of motion at rate
/// theta = instantaneous_rate(model, t).
template <typename Real>
DensityMatrix<Real> ode_rhs_at_rate(const DensityMatrix<Real>& r, Real th,
                                    const EvolutionParams& p) {
  const Real n = p.window.n1, m = p.window.m1, nb = Real(p.nbar);
  const Real np1 = nb + Real(1), half = th / Real(2);
  const bool strict = p.form == EquationForm::Strict;
  const Real x13 = strict ? Real(1) : nb;
  const Real c14 = strict ? (n + 1) * (n + m + 1) : (n + m + 2);

  DensityMatrix<Real> d;
  d(0, 0) = -th * (Real(2) * nb * (n + m + 1) + (n + m)) * r(0, 0) +
            th * np1 * ((n + 1) * r(2, 2) + (m + 1) * r(1, 1));
  d(0, 1) = -half * np1 * ((2 * n + 2 * m + 1) * r(0, 1) - Real(2) * (n + 1) * r(2, 3)) -
            half * nb * (2 * n + m + 3) * r(0, 1);
  d(0, 2) = -half * np1 * ((2 * n + 2 * m + 1) * r(0, 2) - Real(2) * (n + 1) * r(1, 3)) -
            half * x13 * (2 * n + m + 3) * r(0, 2);
  d(0, 3) = -th * c14 * r(0, 3) - half * nb * (n + m + 2) * r(0, 3);
  d(1, 0) = -half * np1 * ((2 * n + 2 * m + 1) * r(1, 0) - Real(2) * (n + 1) * r(3, 2)) -
            half * nb * (2 * n + m + 3) * r(1, 0);
  d(1, 1) = -th * np1 * ((n + m + 1) * r(1, 1) - (n + 1) * r(3, 3)) -
            th * nb * ((n + 1) * r(1, 1) - (m + 1) * r(0, 0));
  d(1, 2) = -th * np1 * (n + m + 1) * r(1, 2) - half * nb * (n + m + 2) * r(1, 2);
  d(1, 3) = -half * np1 * (2 * n + 2 * m + 3) * r(1, 3) -
            half * nb * ((n + 1) * r(1, 3) - Real(2) * (m + 1) * r(0, 2));
  d(2, 0) = -half * np1 * ((2 * n + 2 * m + 1) * r(2, 0) - Real(2) * (n + 1) * r(3, 1)) -
            half * x13 * (2 * n + m + 3) * r(2, 0);
  d(2, 1) = -th * np1 * (n + m + 1) * r(2, 1) - half * nb * (n + m + 2) * r(2, 1);
  d(2, 2) = -th * np1 * ((n + m + 1) * r(2, 2) - (m + 1) * r(3, 3)) -
            th * nb * ((m + 1) * r(2, 2) - (n + 1) * r(0, 0));
  d(2, 3) = -half * np1 * (2 * n + 2 * m + 3) * r(2, 3) -
            half * nb * ((m + 1) * r(2, 3) - Real(2) * (n + 1) * r(0, 1));
  d(3, 0) = -th * c14 * r(3, 0) - half * nb * (n + m + 2) * r(3, 0);
  d(3, 1) = -half * np1 * (2 * n + 2 * m + 3) * r(3, 1) -
            half * nb * ((n + 1) * r(3, 1) - Real(2) * (m + 1) * r(2, 0));
  d(3, 2) = -half * np1 * (2 * n + 2 * m + 3) * r(3, 2) -
            half * nb * ((m + 1) * r(3, 2) - Real(2) * (n + 1) * r(1, 0));
  d(3, 3) = -th * np1 * (n + m + 2) * r(3, 3) +
            th * nb * ((n + 1) * r(1, 1) + (m + 1) * r(2, 2));
  if (p.closure == ClosureMode::PaperClosure) {
    d(3, 3) = -(d(0, 0) + d(1, 1) + d(2, 2));
  }
  return d;
}

template <typename Real>
DensityMatrix<Real> ode_rhs(const DensityMatrix<Real>& rho, Real t,
                            const EvolutionParams& p, const DampingModel& model) {
  return ode_rhs_at_rate(rho, instantaneous_rate<Real>(model, t), p);
}

namespace detail {

template <typename Real>
DensityMatrix<Real> rk4_step(const DensityMatrix<Real>& y, Real t, Real h,
                             const EvolutionParams& p, const DampingModel& model) {
  const Real h2 = h / Real(2);
  const DensityMatrix<Real> k1 = ode_rhs(y, t, p, model);
  const DensityMatrix<Real> k2 = ode_rhs<Real>(y + h2 * k1, t + h2, p, model);
  const DensityMatrix<Real> k3 = ode_rhs<Real>(y + h2 * k2, t + h2, p, model);
  const DensityMatrix<Real> k4 = ode_rhs<Real>(y + h * k3, t + h, p, model);
  return y + (h / Real(6)) * (k1 + Real(2) * k2 + Real(2) * k3 + k4);
}

}  // namespace detail

/// Fixed-step RK4 over `times` (times[0] == 0, strictly increasing), with
/// `opts.substeps` steps per interval and Hermitian re-symmetrization after
/// every step.
template <typename Real>
Trajectory<Real> evolve_ode(const DensityMatrix<Real>& rho0, const EvolutionParams& p,
                            const DampingModel& model, const std::vector<Real>& times,
                            IntegratorOptions opts = {}) {
  check_params(p);
  check_model(model);
  if (times.empty() || times.front() != Real(0)) {
    throw DomainError("time grid must start at 0");
  }
  if (opts.substeps < 1) throw DomainError("substeps must be >= 1");
  for (std::size_t k = 1; k < times.size(); ++k) {
    if (!(times[k] > times[k - 1])) throw DomainError("time grid must be strictly increasing");
  }

  Trajectory<Real> traj;
  traj.times = times;
  traj.states.reserve(times.size());
  traj.states.push_back(rho0);
  DensityMatrix<Real> y = rho0;
  for (std::size_t k = 1; k < times.size(); ++k) {
    const Real t0 = times[k - 1];
    const Real h = (times[k] - t0) / Real(opts.substeps);
    for (int s = 0; s < opts.substeps; ++s) {
      const Real t = t0 + Real(s) * h;
      try {
        y = detail::rk4_step(y, t, h, p, model);
      } catch (const OverflowError& e) {
        throw OverflowError(std::string("damping rate overflow near t = ") +
                                std::to_string(double(t)) + " (" + e.what() + ")",
                            double(t));
      }
      y = hermitian_part(y);
      if (!y.allFinite()) {
        throw IntegrationError("non-finite state at t = " + std::to_string(double(t + h)),
                               double(t + h));
      }
    }
    traj.states.push_back(y);
  }
  return traj;
}

/// Closed-form solution of the Corrected/Leaky equations for a vacuum
/// reservoir (nbar = 0) and n1 = m1, in terms of the accumulated
/// decoherence Theta.
template <typename Real>
DensityMatrix<Real> evolve_analytic_vacuum(const DensityMatrix<Real>& rho0, Real theta, int m1) {
  if (m1 < 0) throw DomainError("m1 must be >= 0");
  using C = std::complex<Real>;
  const Real k = Real(m1), kp1 = Real(m1 + 1);
  const Real e0 = std::exp(-Real(2) * k * theta);
  const Real e1 = std::exp(-(Real(2) * k + 1) * theta);
  const Real e2 = std::exp(-(Real(2) * k + 2) * theta);
  const Real eh1 = std::exp(-(Real(4) * k + 1) * theta / Real(2));
  const Real eh3 = std::exp(-(Real(4) * k + 3) * theta / Real(2));

  const auto& r = rho0;
  DensityMatrix<Real> out = DensityMatrix<Real>::Zero();
  out(3, 3) = r(3, 3) * e2;
  out(1, 1) = (r(1, 1) + kp1 * r(3, 3)) * e1 - kp1 * r(3, 3) * e2;
  out(2, 2) = (r(2, 2) + kp1 * r(3, 3)) * e1 - kp1 * r(3, 3) * e2;
  const C feed = r(1, 1) + r(2, 2) + Real(2) * kp1 * r(3, 3);
  const C c1 = -kp1 * feed;
  const C c2 = kp1 * kp1 * r(3, 3);
  out(0, 0) = (r(0, 0) - c1 - c2) * e0 + c1 * e1 + c2 * e2;

  out(0, 3) = r(0, 3) * e2;
  out(1, 2) = r(1, 2) * e1;
  out(1, 3) = r(1, 3) * eh3;
  out(2, 3) = r(2, 3) * eh3;
  out(0, 1) = (r(0, 1) + kp1 * r(2, 3)) * eh1 - kp1 * r(2, 3) * eh3;
  out(0, 2) = (r(0, 2) + kp1 * r(1, 3)) * eh1 - kp1 * r(1, 3) * eh3;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < i; ++j) out(i, j) = std::conj(out(j, i));
    out(i, i) = C(out(i, i).real(), Real(0));
  }
  return out;
}

/// Same, checking that the parameters admit the closed form.
template <typename Real>
DensityMatrix<Real> evolve_analytic_vacuum(const DensityMatrix<Real>& rho0, Real theta,
                                           const EvolutionParams& p) {
  check_params(p);
  if (p.nbar != 0.0) throw DomainError("closed form requires nbar = 0");
  if (p.window.n1 != p.window.m1) throw DomainError("closed form requires n1 = m1");
  if (p.closure != ClosureMode::Leaky || p.form != EquationForm::Corrected) {
    throw DomainError("closed form covers the Leaky/Corrected equations only");
  }
  return evolve_analytic_vacuum(rho0, theta, p.window.m1);
}

/// The vacuum-reservoir solution table exactly as printed, kept for the
/// errata checks. rho44 is the printed trace closure; lower entries mirror
/// the upper ones by conjugation.
template <typename Real>
DensityMatrix<Real> vacuum_table_printed(const DensityMatrix<Real>& rho0, Real theta, int m1) {
  using C = std::complex<Real>;
  const Real m = Real(m1), mp1 = Real(m1 + 1);
  const auto& r = rho0;
  const Real e_2m = std::exp(-Real(2) * m * theta);
  const Real e1 = std::exp(-(Real(1) + Real(2) * m) * theta);
  const Real eh1 = std::exp(-(Real(1) + Real(4) * m) * theta / Real(2));
  const Real eh3 = std::exp(-(Real(3) + Real(4) * m) * theta / Real(2));

  DensityMatrix<Real> out = DensityMatrix<Real>::Zero();
  out(0, 0) = (r(0, 0) + mp1 * (r(1, 1) + r(2, 2)) + mp1 * mp1 * r(3, 3)) * e_2m +
              (mp1 * mp1 * r(3, 3) - mp1 * (r(1, 1) + r(2, 2) + Real(2) * mp1 * r(3, 3))) * e1;
  out(0, 1) = -mp1 * r(2, 3) * eh3 + (r(0, 1) + mp1 * r(2, 3)) * eh1;
  out(0, 2) = -mp1 * r(1, 3) * eh3 + (r(0, 2) + mp1 * r(1, 3)) * eh1;
  out(0, 3) = r(0, 3) * std::exp(-Real(2) * theta * mp1);
  out(1, 1) = -mp1 * r(3, 3) * e1 + (r(1, 1) + mp1 * r(3, 3)) * e1;
  out(1, 2) = r(1, 2) * e1;
  out(1, 3) = r(1, 3) * eh3;
  out(2, 2) = (m * r(3, 3) + r(2, 2)) * e1;
  out(2, 3) = r(2, 3) * eh3;
  out(3, 3) = C(1) - out(0, 0) - out(1, 1) - out(2, 2);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < i; ++j) out(i, j) = std::conj(out(j, i));
  }
  return out;
}

template <typename Real>
std::vector<Real> uniform_grid(Real t_max, int steps) {
  if (t_max < Real(0)) throw DomainError("t_max must be >= 0");
  if (t_max == Real(0)) return {Real(0)};
  if (steps < 2) throw DomainError("time grid needs at least 2 points");
  std::vector<Real> g(steps);
  for (int k = 0; k < steps; ++k) g[k] = t_max * Real(k) / Real(steps - 1);
  return g;
}

std::string to_string(ClosureMode m);
std::string to_string(EquationForm f);

}  // namespace fockwin
