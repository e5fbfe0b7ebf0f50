#pragma once

#include <cmath>
#include <string>
#include <type_traits>
#include <variant>

#include "fockwin/types.hpp"

namespace fockwin {

/// Constant damping rate gamma_M.
struct Markovian {
  double gamma_m = 1.0;
};

/// Ohmic reservoir with the printed closed-form accumulated decoherence
/// Gamma(w0 t; r), r = omega_c / omega0.
struct NonMarkovianOhmic {
  double omega0 = 1.0;
  double r = 1.0;
};

/// Ohmic reservoir with Lorentz-Drude cutoff, rate obtained by integrating
/// the dissipation kernel: gamma(t) = 2 omega_c (1 - e^{-omega_c t}).
struct KernelIntegral {
  double omega_c = 1.0;
};

using DampingModel = std::variant<Markovian, NonMarkovianOhmic, KernelIntegral>;

/// Largest r * omega0 * t for which e^{r omega0 t} is evaluated.
inline constexpr double kMaxKernelExponent = 700.0;

inline void check_model(const DampingModel& model) {
  std::visit(
      [](const auto& m) {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, Markovian>) {
          if (!(m.gamma_m >= 0)) throw DomainError("gamma_M must be >= 0");
        } else if constexpr (std::is_same_v<M, NonMarkovianOhmic>) {
          if (!(m.omega0 > 0)) throw DomainError("omega0 must be > 0");
          if (!(m.r > 0)) throw DomainError("r must be > 0");
        } else {
          if (!(m.omega_c > 0)) throw DomainError("omega_c must be > 0");
        }
      },
      model);
}

namespace detail {

template <typename Real>
Real checked_growth(Real tau, Real r) {
  if (tau < Real(0)) throw DomainError("time must be >= 0");
  if (!(r > Real(0))) throw DomainError("r must be > 0");
  if (r * tau > Real(kMaxKernelExponent)) {
    throw OverflowError("exp(r*omega0*t) overflows at omega0*t = " + std::to_string(double(tau)),
                        double(tau));
  }
  return std::exp(r * tau);
}

}  // namespace detail

/// Gamma(tau) for tau = omega0 * t, evaluated term by term as
/// 8r^2/(1+r^2) [tau + (r-1)/(1+r^2) e^{r tau} sin(tau)
///               + 2r/(1+r^2) (e^{r tau} cos(tau) - 1)].
template <typename Real>
Real gamma_nonmarkov(Real tau, Real r) {
  const Real g = detail::checked_growth(tau, r);
  const Real s = Real(1) + r * r;
  return Real(8) * r * r / s *
         (tau + (r - Real(1)) / s * g * std::sin(tau) +
          Real(2) * r / s * (g * std::cos(tau) - Real(1)));
}

/// dGamma/dtau.
template <typename Real>
Real gamma_nonmarkov_derivative(Real tau, Real r) {
  const Real g = detail::checked_growth(tau, r);
  const Real s = Real(1) + r * r;
  const Real c = std::cos(tau), sn = std::sin(tau);
  return Real(8) * r * r / s *
         (Real(1) + (r - Real(1)) / s * g * (r * sn + c) +
          Real(2) * r / s * g * (r * c - sn));
}

/// Kernel-integrated Ohmic rate 2 omega_c (1 - e^{-omega_c t}).
template <typename Real>
Real gamma_kernel(Real t, Real omega_c) {
  if (t < Real(0)) throw DomainError("time must be >= 0");
  if (!(omega_c > Real(0))) throw DomainError("omega_c must be > 0");
  return -Real(2) * omega_c * std::expm1(-omega_c * t);
}

/// Instantaneous damping rate theta(t) entering the equations of motion.
template <typename Real>
Real instantaneous_rate(const DampingModel& model, Real t) {
  if (t < Real(0)) throw DomainError("time must be >= 0");
  return std::visit(
      [t](const auto& m) -> Real {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, Markovian>) {
          return Real(m.gamma_m);
        } else if constexpr (std::is_same_v<M, NonMarkovianOhmic>) {
          return Real(m.omega0) * gamma_nonmarkov_derivative(Real(m.omega0) * t, Real(m.r));
        } else {
          return gamma_kernel(t, Real(m.omega_c));
        }
      },
      model);
}

/// Accumulated decoherence Theta(t) = integral of the rate from 0 to t.
template <typename Real>
Real accumulated_theta(const DampingModel& model, Real t) {
  if (t < Real(0)) throw DomainError("time must be >= 0");
  return std::visit(
      [t](const auto& m) -> Real {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, Markovian>) {
          return Real(m.gamma_m) * t;
        } else if constexpr (std::is_same_v<M, NonMarkovianOhmic>) {
          return gamma_nonmarkov(Real(m.omega0) * t, Real(m.r));
        } else {
          const Real x = Real(m.omega_c) * t;
          return Real(2) * (x + std::expm1(-x));
        }
      },
      model);
}

std::string describe(const DampingModel& model);

}  // namespace fockwin
