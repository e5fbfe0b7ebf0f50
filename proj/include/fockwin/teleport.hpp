#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <optional>

#include "fockwin/correlations.hpp"
#include "fockwin/states.hpp"
#include "fockwin/types.hpp"

namespace fockwin {

/// Right-hand Pauli factor in the output-state sum.
enum class IndexOrder {
  Printed,    ///< (s_a x s_b) rho (s_b x s_a)
  Symmetric,  ///< (s_a x s_b) rho (s_a x s_b)
};

template <typename Real>
struct InputState {
  Real p = 0;
  Real q = 1;
  DensityMatrix<Real> matrix;
  bool non_physical = false;
};

/// (1-2p)/2 |00><00| + (1+2p)/2 |11><11| + q/2 (|11><00| + |00><11|)
template <typename Real>
InputState<Real> input_state(Real p, Real q) {
  if (!(p >= Real(0) && p <= Real(1))) throw DomainError("p must lie in [0,1]");
  if (!(q > Real(0))) throw DomainError("q must be > 0");
  InputState<Real> s{p, q, DensityMatrix<Real>::Zero(), false};
  s.matrix(0, 0) = (Real(1) - Real(2) * p) / Real(2);
  s.matrix(3, 3) = (Real(1) + Real(2) * p) / Real(2);
  s.matrix(0, 3) = s.matrix(3, 0) = q / Real(2);
  s.non_physical = min_eigenvalue(s.matrix) < Real(-1e-12);
  return s;
}

/// Pauli matrices indexed 0, x, y, z.
template <typename Real>
std::array<Matrix2c<Real>, 4> pauli() {
  using C = std::complex<Real>;
  std::array<Matrix2c<Real>, 4> s;
  s[0] << C(1), C(0), C(0), C(1);
  s[1] << C(0), C(1), C(1), C(0);
  s[2] << C(0), C(0, -1), C(0, 1), C(0);
  s[3] << C(1), C(0), C(0), C(-1);
  return s;
}

template <typename Real>
DensityMatrix<Real> kron(const Matrix2c<Real>& a, const Matrix2c<Real>& b) {
  DensityMatrix<Real> k;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) k.template block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return k;
}

/// E^0 = |psi-><psi-|, E^x = |phi-><phi-|, E^y = |phi+><phi+|, E^z = |psi+><psi+|.
template <typename Real>
std::array<DensityMatrix<Real>, 4> bell_projectors() {
  const Real s = Real(1) / std::sqrt(Real(2));
  std::array<Vector4c<Real>, 4> v;
  v[0] << Real(0), s, -s, Real(0);
  v[1] << s, Real(0), Real(0), -s;
  v[2] << s, Real(0), Real(0), s;
  v[3] << Real(0), s, s, Real(0);
  std::array<DensityMatrix<Real>, 4> e;
  for (int i = 0; i < 4; ++i) e[i] = v[i] * v[i].adjoint();
  return e;
}

/// Tr[E^a rho] for a = 0, x, y, z.
template <typename Real>
std::array<Real, 4> bell_weights(const DensityMatrix<Real>& channel) {
  const auto e = bell_projectors<Real>();
  std::array<Real, 4> w;
  for (int i = 0; i < 4; ++i) w[i] = (e[i] * channel).trace().real();
  return w;
}

/// Coefficients of the printed output-state matrices.
template <typename Real>
struct ClosedFormCoefficients {
  Real c1 = 0, c2 = 0, c3 = 0;  ///< k1,k2,k3 or alpha1,alpha2,alpha3
  Real fidelity = 0;            ///< c1 + q c2
};

template <typename Real>
struct TeleportResult {
  DensityMatrix<Real> rho_out;
  Real fidelity = 0;
  Real weight_sum = 0;  ///< sum of P_ab
  std::array<std::array<Real, 4>, 4> weights{};
  CorrelationReport teleported_measures;
  std::optional<ClosedFormCoefficients<Real>> closed_form;
};

template <typename Real>
TeleportResult<Real> teleport_general(const DensityMatrix<Real>& channel, const InputState<Real>& in,
                                      IndexOrder order = IndexOrder::Symmetric,
                                      const CorrelationOptions& opt = {}) {
  const auto s = pauli<Real>();
  const auto w = bell_weights(channel);
  TeleportResult<Real> r;
  r.rho_out.setZero();
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      const Real pab = w[a] * w[b];
      r.weights[a][b] = pab;
      r.weight_sum += pab;
      const DensityMatrix<Real> left = kron(s[a], s[b]);
      const DensityMatrix<Real> right = order == IndexOrder::Printed ? kron(s[b], s[a]) : left;
      r.rho_out += pab * left * in.matrix * right;
    }
  r.fidelity = (in.matrix * r.rho_out).trace().real();
  r.teleported_measures = correlation_report(r.rho_out, opt);
  return r;
}

/// k1 = (1-2p)/2 S^2 + (1+2p)/2 T^2, k2 = 2q (Re rho14)^2, k3 = T S with
/// S = rho22 + rho33 and T = rho11 + rho44.
template <typename Real>
ClosedFormCoefficients<Real> closed_form_epr(const DensityMatrix<Real>& ch, Real p, Real q) {
  require_pattern(ch, XPattern::Epr);
  const Real sm = ch(1, 1).real() + ch(2, 2).real();
  const Real tm = ch(0, 0).real() + ch(3, 3).real();
  const Real c14 = ch(0, 3).real();
  ClosedFormCoefficients<Real> k;
  k.c1 = (Real(1) - Real(2) * p) / Real(2) * sm * sm + (Real(1) + Real(2) * p) / Real(2) * tm * tm;
  k.c2 = Real(2) * q * c14 * c14;
  k.c3 = tm * sm;
  k.fidelity = k.c1 + q * k.c2;
  return k;
}

/// a1 = (1-2p)/2 S^2 + (1+2p)/2 rho11^2, a2 = 2q (Re rho23)^2, a3 = rho11 S.
template <typename Real>
ClosedFormCoefficients<Real> closed_form_noon(const DensityMatrix<Real>& ch, Real p, Real q) {
  require_pattern(ch, XPattern::Noon);
  const Real sm = ch(1, 1).real() + ch(2, 2).real();
  const Real r11 = ch(0, 0).real();
  const Real c23 = ch(1, 2).real();
  ClosedFormCoefficients<Real> k;
  k.c1 = (Real(1) - Real(2) * p) / Real(2) * sm * sm + (Real(1) + Real(2) * p) / Real(2) * r11 * r11;
  k.c2 = Real(2) * q * c23 * c23;
  k.c3 = r11 * sm;
  k.fidelity = k.c1 + q * k.c2;
  return k;
}

/// The printed output matrix [[c1,0,0,c2],[0,0,c3,0],[0,c3,0,0],[c2,0,0,c1]].
template <typename Real>
DensityMatrix<Real> printed_output_matrix(const ClosedFormCoefficients<Real>& k) {
  DensityMatrix<Real> m = DensityMatrix<Real>::Zero();
  m(0, 0) = m(3, 3) = k.c1;
  m(0, 3) = m(3, 0) = k.c2;
  m(1, 2) = m(2, 1) = k.c3;
  return m;
}

/// Output state of the Symmetric order on an X channel, rebuilt from the
/// closed-form coefficients: diag(c1, c3, c3, c1') with corner c2, where
/// c1' = (1+2p)/2 S^2 + (1-2p)/2 T^2 (T = rho11 + rho44 on both patterns).
template <typename Real>
DensityMatrix<Real> symmetric_output_matrix(const DensityMatrix<Real>& ch,
                                            const ClosedFormCoefficients<Real>& k, Real p) {
  const Real sm = ch(1, 1).real() + ch(2, 2).real();
  const Real tm = ch(0, 0).real() + ch(3, 3).real();
  DensityMatrix<Real> m = DensityMatrix<Real>::Zero();
  m(0, 0) = k.c1;
  m(1, 1) = m(2, 2) = k.c3;
  m(3, 3) = (Real(1) + Real(2) * p) / Real(2) * sm * sm + (Real(1) - Real(2) * p) / Real(2) * tm * tm;
  m(0, 3) = m(3, 0) = k.c2;
  return m;
}

/// Teleported measures as printed in terms of (c1, c2, c3). Entries are NaN
/// where an entropy argument leaves [0, 1].
struct PrintedOutputMeasures {
  double concurrence = 0.0;
  double log_negativity = 0.0;
  double discord = 0.0;
};

template <typename Real>
PrintedOutputMeasures printed_output_measures(const ClosedFormCoefficients<Real>& k) {
  PrintedOutputMeasures m;
  const double c1 = double(k.c1), c2 = double(k.c2), c3 = double(k.c3);
  m.concurrence = std::max({0.0, 2 * (c3 - c1), 2 * c2});
  const double ln_arg = 1 + 2 * (c2 + c3 - c1);
  m.log_negativity = ln_arg > 0 ? std::max(0.0, std::log2(ln_arg)) : 0.0;
  try {
    const auto lam = hermitian_eigenvalues<double, 4>(printed_output_matrix(ClosedFormCoefficients<double>{
        c1, c2, c3, 0.0}));
    double sl = 0;
    for (int i = 0; i < 4; ++i) sl += xlog2x(clip_probability(lam[i]));
    const double s = 0.5 * (1 + std::sqrt((1 - 2 * c1) * (1 - 2 * c1) + 4 * (c2 + c3) * (c2 + c3)));
    const double q1 = shannon_h(c1) + sl + shannon_h(s);
    const double q2 = sl + 2 * c1;
    m.discord = std::min(q1, q2);
  } catch (const DomainError&) {
    m.discord = std::numeric_limits<double>::quiet_NaN();
  }
  return m;
}

inline constexpr double kClassicalFidelity = 2.0 / 3.0;

}  // namespace fockwin
