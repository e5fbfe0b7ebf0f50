#pragma once

#include <cmath>
#include <complex>
#include <limits>

#include <Eigen/Dense>

#include "fockwin/types.hpp"

namespace fockwin {

/// Probability amplitudes of a|n1,m1> + b|n1,m1+1> + c|n1+1,m1> + d|n1+1,m1+1>.
template <typename Real>
struct Amplitudes {
  std::complex<Real> a{}, b{}, c{}, d{};

  Vector4c<Real> vector() const {
    Vector4c<Real> v;
    v << a, b, c, d;
    return v;
  }
  Real squared_norm() const { return vector().squaredNorm(); }
};

/// Raw coefficients as evaluated, plus the unit-norm version used downstream.
template <typename Real>
struct AmplitudeSet {
  Amplitudes<Real> raw;
  Amplitudes<Real> normalized;
};

struct StateValidationReport {
  double hermiticity_defect = 0.0;
  double min_eigenvalue = 0.0;
  double trace = 0.0;
  bool is_physical = false;
};

inline constexpr double kDefaultStateTolerance = 1e-10;

/// Bose-Einstein occupation 1/(e^x - 1) for x = hbar*nu/(k_B*T).
template <typename Real>
Real bose_occupation(Real x) {
  if (!(x > Real(0))) throw DomainError("energy ratio must be positive");
  if (std::isinf(x)) return Real(0);
  return Real(1) / std::expm1(x);
}

/// Mean thermal photon number of a mode at `frequency` (rad/s) and
/// `temperature` (K). Exactly zero at T = 0.
template <typename Real>
Real thermal_occupation(Real temperature, Real frequency) {
  constexpr Real hbar = Real(1.054571817e-34);
  constexpr Real k_b = Real(1.380649e-23);
  if (temperature < Real(0)) throw DomainError("temperature must be >= 0");
  if (!(frequency > Real(0))) throw DomainError("frequency must be > 0");
  if (temperature == Real(0)) return Real(0);
  return bose_occupation(hbar * frequency / (k_b * temperature));
}

template <typename Real>
Amplitudes<Real> normalized(const Amplitudes<Real>& amp) {
  const Real norm = std::sqrt(amp.squared_norm());
  if (!(norm > Real(0))) {
    throw DomainError("degenerate state: all amplitudes vanish");
  }
  return {amp.a / norm, amp.b / norm, amp.c / norm, amp.d / norm};
}

namespace detail {

// x^k with 0^0 = 1, returned in log form; -inf encodes an exact zero.
template <typename Real>
Real log_power(Real x, long long k) {
  if (k == 0) return Real(0);
  if (x == Real(0)) return -std::numeric_limits<Real>::infinity();
  return Real(k) * std::log(x);
}

// sqrt(x^k / M!) * exp(-prefactor_exponent)
template <typename Real>
Real sqrt_poisson_like(Real x, long long k, long long factorial_arg,
                       Real exponent) {
  const Real lp = log_power(x, k);
  if (std::isinf(lp)) return Real(0);
  return std::exp(exponent + Real(0.5) * (lp - std::lgamma(Real(factorial_arg) + 1)));
}

}  // namespace detail

/// Window amplitudes of the coherent product state with the exponent and
/// factorial pattern a ~ n'^(n1+m1)/(n1 m1)!, b ~ n'^(n1+m1+1)/[n1(m1+1)]!,
/// c ~ n'^(m1(n1+1))/[m1(n1+1)]!, d ~ n'^((m1+1)(n1+1))/[(m1+1)(n1+1)]!,
/// each times e^{-n'}/sqrt(2). The raw set is not normalized in general.
template <typename Real>
AmplitudeSet<Real> coherent_amplitudes_paper(Real nbar_prime, const FockWindow& w) {
  if (nbar_prime < Real(0)) throw DomainError("mean photon number must be >= 0");
  check_window(w);
  const long long n = w.n1, m = w.m1;
  const Real pre = -nbar_prime - Real(0.5) * std::log(Real(2));
  auto term = [&](long long k, long long f) {
    return std::complex<Real>(detail::sqrt_poisson_like(nbar_prime, k, f, pre), Real(0));
  };
  Amplitudes<Real> raw{term(n + m, n * m), term(n + m + 1, n * (m + 1)),
                       term(m * (n + 1), m * (n + 1)),
                       term((m + 1) * (n + 1), (m + 1) * (n + 1))};
  return {raw, normalized(raw)};
}

/// Window projection of |alpha>|beta> with equal mean photon number n',
/// using c_n = e^{-n'/2} sqrt(n'^n / n!) for each mode.
template <typename Real>
AmplitudeSet<Real> projection_amplitudes(Real nbar_prime, const FockWindow& w) {
  if (nbar_prime < Real(0)) throw DomainError("mean photon number must be >= 0");
  check_window(w);
  auto coeff = [&](long long k) {
    return detail::sqrt_poisson_like(nbar_prime, k, k, -nbar_prime / 2);
  };
  const Real ca0 = coeff(w.n1), ca1 = coeff(w.n1 + 1);
  const Real cb0 = coeff(w.m1), cb1 = coeff(w.m1 + 1);
  using C = std::complex<Real>;
  Amplitudes<Real> raw{C(ca0 * cb0), C(ca0 * cb1), C(ca1 * cb0), C(ca1 * cb1)};
  return {raw, normalized(raw)};
}

/// |psi><psi| for unit-norm window amplitudes.
template <typename Real>
DensityMatrix<Real> build_pure(const Amplitudes<Real>& amp, Real tol = Real(1e-12)) {
  if (std::abs(amp.squared_norm() - Real(1)) > tol) {
    throw DomainError("amplitudes are not normalized");
  }
  const Vector4c<Real> v = amp.vector();
  return v * v.adjoint();
}

/// a|n1,m1> + d|n1+1,m1+1>
template <typename Real>
DensityMatrix<Real> build_epr(std::complex<Real> a, std::complex<Real> d) {
  return build_pure(Amplitudes<Real>{a, {}, {}, d});
}

/// b|n1,m1+1> + c|n1+1,m1>
template <typename Real>
DensityMatrix<Real> build_noon(std::complex<Real> b, std::complex<Real> c) {
  return build_pure(Amplitudes<Real>{{}, b, c, {}});
}

template <typename Real>
Real hermiticity_defect(const DensityMatrix<Real>& rho) {
  return (rho - rho.adjoint()).cwiseAbs().maxCoeff();
}

template <typename Real>
DensityMatrix<Real> hermitian_part(const DensityMatrix<Real>& rho) {
  return (rho + rho.adjoint()) / Real(2);
}

template <typename Real>
Real min_eigenvalue(const DensityMatrix<Real>& rho) {
  Eigen::SelfAdjointEigenSolver<DensityMatrix<Real>> es(hermitian_part(rho),
                                                        Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

template <typename Real>
StateValidationReport validate(const DensityMatrix<Real>& rho,
                               double tol = kDefaultStateTolerance) {
  if (!(tol > 0)) throw DomainError("tolerance must be positive");
  StateValidationReport r;
  r.hermiticity_defect = static_cast<double>(hermiticity_defect(rho));
  r.min_eigenvalue = static_cast<double>(min_eigenvalue(rho));
  r.trace = static_cast<double>(rho.trace().real());
  r.is_physical = r.hermiticity_defect <= tol && r.min_eigenvalue >= -tol &&
                  std::abs(r.trace - 1.0) <= tol;
  return r;
}

}  // namespace fockwin
