#pragma once

#include <cmath>
#include <complex>
#include <random>

#include "fockwin/states.hpp"

namespace fwtest {

using fockwin::DensityMatrixd;
using C = std::complex<double>;

inline constexpr double kInvSqrt2 = 0.70710678118654752440;

inline DensityMatrixd bell_phi_plus() { return fockwin::build_epr<double>(kInvSqrt2, kInvSqrt2); }

/// Random full-rank-ish state G G^dagger / tr with complex Gaussian G.
inline DensityMatrixd random_state(std::mt19937_64& rng, int rank = 4) {
  std::normal_distribution<double> n;
  Eigen::Matrix<C, 4, Eigen::Dynamic> g(4, rank);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < rank; ++j) g(i, j) = C(n(rng), n(rng));
  DensityMatrixd r = g * g.adjoint();
  return r / r.trace().real();
}

/// Random X-shaped state with both coherences inside their PSD bounds.
inline DensityMatrixd random_x_state(std::mt19937_64& rng, bool complex_phase = true) {
  std::uniform_real_distribution<double> u;
  double d[4], s = 0;
  for (double& x : d) s += (x = u(rng));
  for (double& x : d) x /= s;
  DensityMatrixd r = DensityMatrixd::Zero();
  for (int i = 0; i < 4; ++i) r(i, i) = d[i];
  const double ph1 = complex_phase ? 2 * M_PI * u(rng) : 0.0;
  const double ph2 = complex_phase ? 2 * M_PI * u(rng) : 0.0;
  r(0, 3) = std::polar(std::sqrt(d[0] * d[3]) * u(rng), ph1);
  r(1, 2) = std::polar(std::sqrt(d[1] * d[2]) * u(rng), ph2);
  r(3, 0) = std::conj(r(0, 3));
  r(2, 1) = std::conj(r(1, 2));
  return r;
}

/// X state restricted to the EPR (rho23 = 0) or NOON (rho14 = rho44 = 0) pattern.
inline DensityMatrixd random_pattern_state(std::mt19937_64& rng, bool epr, bool complex_phase = true) {
  DensityMatrixd r = random_x_state(rng, complex_phase);
  if (epr) {
    r(1, 2) = r(2, 1) = 0;
  } else {
    r(0, 3) = r(3, 0) = 0;
    r /= (1.0 - r(3, 3).real());
    r(3, 3) = 0;
  }
  return r;
}

inline double max_abs_diff(const DensityMatrixd& a, const DensityMatrixd& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace fwtest
