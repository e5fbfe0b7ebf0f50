#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#include <Eigen/Dense>

#include "fockwin/states.hpp"
#include "fockwin/types.hpp"

namespace fockwin {

struct CorrelationReport {
  double negativity = 0.0;
  double log_negativity = 0.0;
  double concurrence = 0.0;
  double discord = 0.0;
  double mutual_information = 0.0;
  double classical_correlation = 0.0;
  double purity = 0.0;
  double trace = 0.0;
};

/// Projective measurement on B along the Bloch direction (theta, phi).
struct MeasurementBasis {
  double theta = 0.0;
  double phi = 0.0;
};

/// Probabilities and eigenvalues within this distance of [0, 1] are clipped.
inline constexpr double kEntropyTolerance = 1e-12;
/// Entries that must vanish for an X-shaped closed form.
inline constexpr double kPatternTolerance = 1e-12;

// -------------------------------------------------------------------------
// entropies

template <typename Real>
Real xlog2x(Real x) {
  return x > Real(0) ? x * std::log2(x) : Real(0);
}

template <typename Real>
Real clip_probability(Real x, Real tol = Real(kEntropyTolerance)) {
  if (!(x >= -tol && x <= Real(1) + tol)) {
    throw DomainError("probability outside [0,1]: " + std::to_string(double(x)));
  }
  return std::clamp(x, Real(0), Real(1));
}

/// Binary Shannon entropy in bits.
template <typename Real>
Real shannon_h(Real x) {
  x = clip_probability(x);
  return -xlog2x(x) - xlog2x(Real(1) - x);
}

template <typename Real, int N>
Eigen::Matrix<Real, N, 1> hermitian_eigenvalues(
    const Eigen::Matrix<std::complex<Real>, N, N>& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix<std::complex<Real>, N, N>> es(
      (m + m.adjoint()) / Real(2), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

template <typename Real, int N>
Real entropy_of_spectrum(const Eigen::Matrix<Real, N, 1>& lam) {
  Real s = 0;
  for (int i = 0; i < lam.size(); ++i) s -= xlog2x(clip_probability(lam[i]));
  return s;
}

/// Von Neumann entropy (bits) of a Hermitian matrix.
template <typename Real, int N>
Real von_neumann_entropy(const Eigen::Matrix<std::complex<Real>, N, N>& rho) {
  return entropy_of_spectrum<Real, N>(hermitian_eigenvalues<Real, N>(rho));
}

// -------------------------------------------------------------------------
// reduced states and partial transpose

template <typename Real>
Matrix2c<Real> reduced_a(const DensityMatrix<Real>& rho) {
  Matrix2c<Real> r;
  for (int a = 0; a < 2; ++a)
    for (int ap = 0; ap < 2; ++ap) r(a, ap) = rho(2 * a, 2 * ap) + rho(2 * a + 1, 2 * ap + 1);
  return r;
}

template <typename Real>
Matrix2c<Real> reduced_b(const DensityMatrix<Real>& rho) {
  Matrix2c<Real> r;
  for (int b = 0; b < 2; ++b)
    for (int bp = 0; bp < 2; ++bp) r(b, bp) = rho(b, bp) + rho(2 + b, 2 + bp);
  return r;
}

template <typename Real>
DensityMatrix<Real> partial_transpose_b(const DensityMatrix<Real>& rho) {
  DensityMatrix<Real> out;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int ap = 0; ap < 2; ++ap)
        for (int bp = 0; bp < 2; ++bp) out(2 * a + b, 2 * ap + bp) = rho(2 * a + bp, 2 * ap + b);
  return out;
}

// -------------------------------------------------------------------------
// entanglement

/// Sum of |negative eigenvalues| of the partial transpose; equals
/// (||rho^T_B||_1 - 1)/2 at unit trace.
template <typename Real>
Real negativity(const DensityMatrix<Real>& rho) {
  const auto lam = hermitian_eigenvalues<Real, 4>(partial_transpose_b(rho));
  Real n = 0;
  for (int i = 0; i < 4; ++i)
    if (lam[i] < Real(0)) n -= lam[i];
  return n;
}

template <typename Real>
Real log_negativity(const DensityMatrix<Real>& rho) {
  return std::log2(Real(1) + Real(2) * negativity(rho));
}

template <typename Real>
DensityMatrix<Real> spin_flip(const DensityMatrix<Real>& rho) {
  // sigma_y x sigma_y is real: anti-diagonal (-1, 1, 1, -1) pattern
  DensityMatrix<Real> yy = DensityMatrix<Real>::Zero();
  yy(0, 3) = -1;
  yy(1, 2) = 1;
  yy(2, 1) = 1;
  yy(3, 0) = -1;
  return yy * rho.conjugate() * yy;
}

/// Wootters concurrence. For PSD input the sqrt(lambda_i) are the singular
/// values of sqrt(rho) * sqrt(rho~), which avoids square roots of tiny
/// eigenvalues on rank-deficient states; otherwise the eigenvalues of
/// rho * rho~ come from a general complex solver with negative real parts
/// clipped.
template <typename Real>
Real concurrence(const DensityMatrix<Real>& rho) {
  const DensityMatrix<Real> h = hermitian_part(rho);
  std::array<Real, 4> s{};
  Eigen::SelfAdjointEigenSolver<DensityMatrix<Real>> es(h);
  if (es.eigenvalues().minCoeff() >= -Real(kEntropyTolerance)) {
    const Eigen::Matrix<Real, 4, 1> root = es.eigenvalues().cwiseMax(Real(0)).cwiseSqrt();
    const DensityMatrix<Real> sq =
        es.eigenvectors() * root.template cast<std::complex<Real>>().asDiagonal() *
        es.eigenvectors().adjoint();
    const DensityMatrix<Real> m = sq * spin_flip(sq);
    const auto sv = Eigen::JacobiSVD<DensityMatrix<Real>>(m).singularValues();
    for (int i = 0; i < 4; ++i) s[i] = sv[i];
  } else {
    Eigen::ComplexEigenSolver<DensityMatrix<Real>> ces(DensityMatrix<Real>(h * spin_flip(h)), false);
    for (int i = 0; i < 4; ++i) s[i] = std::sqrt(std::max(ces.eigenvalues()[i].real(), Real(0)));
  }
  std::sort(s.begin(), s.end(), std::greater<Real>());
  return std::max(Real(0), s[0] - s[1] - s[2] - s[3]);
}

// -------------------------------------------------------------------------
// X-shaped closed forms

enum class XPattern { Epr, Noon };

/// True when every entry outside the diagonal and anti-diagonal vanishes.
template <typename Real>
bool is_x_shaped(const DensityMatrix<Real>& rho, Real tol = Real(kPatternTolerance)) {
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if (i != j && i + j != 3 && std::abs(rho(i, j)) > tol) return false;
  return true;
}

template <typename Real>
bool has_pattern(const DensityMatrix<Real>& rho, XPattern p, Real tol = Real(kPatternTolerance)) {
  if (!is_x_shaped(rho, tol)) return false;
  if (p == XPattern::Epr) return std::abs(rho(1, 2)) <= tol && std::abs(rho(2, 1)) <= tol;
  return std::abs(rho(0, 3)) <= tol && std::abs(rho(3, 0)) <= tol && std::abs(rho(3, 3)) <= tol;
}

template <typename Real>
void require_pattern(const DensityMatrix<Real>& rho, XPattern p) {
  if (!has_pattern(rho, p)) {
    throw PatternError(p == XPattern::Epr ? "state is not of the EPR X pattern"
                                          : "state is not of the NOON X pattern");
  }
}

template <typename Real>
Real concurrence_x_epr(const DensityMatrix<Real>& rho) {
  require_pattern(rho, XPattern::Epr);
  return std::max(Real(0), Real(2) * (std::abs(rho(0, 3)) -
                                      std::sqrt(std::max(Real(0), rho(1, 1).real() * rho(2, 2).real()))));
}

/// X-state concurrence on the NOON pattern, 2(|rho23| - sqrt(rho11 rho44)).
template <typename Real>
Real concurrence_x_noon(const DensityMatrix<Real>& rho) {
  require_pattern(rho, XPattern::Noon);
  return std::max(Real(0), Real(2) * (std::abs(rho(1, 2)) -
                                      std::sqrt(std::max(Real(0), rho(0, 0).real() * rho(3, 3).real()))));
}

/// NOON concurrence as printed, 2(|rho23| - sqrt(rho11)). Errata only.
template <typename Real>
Real concurrence_x_noon_printed(const DensityMatrix<Real>& rho) {
  require_pattern(rho, XPattern::Noon);
  return std::max(Real(0), Real(2) * (std::abs(rho(1, 2)) - std::sqrt(std::max(Real(0), rho(0, 0).real()))));
}

template <typename Real>
Real log_negativity_x_epr(const DensityMatrix<Real>& rho) {
  require_pattern(rho, XPattern::Epr);
  const Real r22 = rho(1, 1).real(), r33 = rho(2, 2).real(), c = std::abs(rho(0, 3));
  const Real arg = Real(1) - r22 - r33 + std::sqrt((r22 - r33) * (r22 - r33) + Real(4) * c * c);
  return arg > Real(1) ? std::log2(arg) : Real(0);
}

template <typename Real>
Real log_negativity_x_noon(const DensityMatrix<Real>& rho) {
  require_pattern(rho, XPattern::Noon);
  const Real r11 = rho(0, 0).real(), c = std::abs(rho(1, 2));
  const Real arg = Real(1) - r11 + std::sqrt(r11 * r11 + Real(4) * c * c);
  return arg > Real(1) ? std::log2(arg) : Real(0);
}

/// Variants of the X-state discord expression.
struct DiscordVariant {
  /// Sign in front of sum(lambda log2 lambda): true keeps the printed "+".
  bool printed_sign = true;
  /// D2 = -sum rho_jj log2 rho_jj - H(rho11+rho33); false uses the printed
  /// -sum rho_jj - H(rho11+rho33).
  bool d2_with_log = true;
  /// s built from rho33 + rho44; false uses the product rho33 * rho44.
  bool s_from_sum = true;
};

/// Closed-form discord of an X-shaped state, min(Q1, Q2).
template <typename Real>
Real discord_x(const DensityMatrix<Real>& rho, DiscordVariant v = {}) {
  if (!is_x_shaped(rho)) throw PatternError("discord_x requires an X-shaped state");
  const Real r11 = rho(0, 0).real(), r22 = rho(1, 1).real(), r33 = rho(2, 2).real(),
             r44 = rho(3, 3).real();
  const auto lam = hermitian_eigenvalues<Real, 4>(rho);
  Real sl = 0;
  for (int i = 0; i < 4; ++i) sl += xlog2x(clip_probability(lam[i]));
  if (!v.printed_sign) sl = -sl;
  const Real hb = shannon_h(r11 + r33);
  const Real a = v.s_from_sum ? r33 + r44 : r33 * r44;
  const Real coh = std::abs(rho(0, 3)) + std::abs(rho(1, 2));
  const Real s = (Real(1) + std::sqrt((Real(1) - Real(2) * a) * (Real(1) - Real(2) * a) +
                                      Real(4) * coh * coh)) / Real(2);
  const Real d1 = shannon_h(s);
  Real d2 = -hb;
  for (Real x : {r11, r22, r33, r44}) d2 += v.d2_with_log ? -xlog2x(clip_probability(x)) : -x;
  return std::min(hb + sl + d1, hb + sl + d2);
}

// -------------------------------------------------------------------------
// brute-force discord

/// State of A after outcome `which` (0 or 1) of the measurement on B,
/// unnormalized (its trace is the outcome probability).
template <typename Real>
Matrix2c<Real> conditional_state_a(const DensityMatrix<Real>& rho, MeasurementBasis m, int which) {
  using C = std::complex<Real>;
  const Real ct = std::cos(Real(m.theta) / 2), st = std::sin(Real(m.theta) / 2);
  const C ph = std::polar(Real(1), Real(m.phi));
  std::array<C, 2> u = which == 0 ? std::array<C, 2>{C(ct), ph * st}
                                  : std::array<C, 2>{-std::conj(ph) * st, C(ct)};
  Matrix2c<Real> r = Matrix2c<Real>::Zero();
  for (int a = 0; a < 2; ++a)
    for (int ap = 0; ap < 2; ++ap)
      for (int b = 0; b < 2; ++b)
        for (int bp = 0; bp < 2; ++bp)
          r(a, ap) += std::conj(u[b]) * rho(2 * a + b, 2 * ap + bp) * u[bp];
  return r;
}

/// sum_m p_m S(rho_A^m) for a projective measurement on B.
template <typename Real>
Real conditional_entropy(const DensityMatrix<Real>& rho, MeasurementBasis m) {
  Real total = 0;
  for (int k = 0; k < 2; ++k) {
    const Matrix2c<Real> r = conditional_state_a(rho, m, k);
    const Real p = r.trace().real();
    if (p > Real(1e-15)) total += p * von_neumann_entropy<Real, 2>(Matrix2c<Real>(r / p));
  }
  return total;
}

struct DiscordResult {
  double discord = 0.0;
  double mutual_information = 0.0;
  double classical_correlation = 0.0;
  MeasurementBasis optimum;
};

namespace detail {

// Plain Nelder-Mead on two variables.
template <typename F>
std::pair<std::array<double, 2>, double> nelder_mead_2d(F f, std::array<double, 2> x0, double step,
                                                       int max_iter = 400, double ftol = 1e-15) {
  std::array<std::array<double, 2>, 3> x{x0, {x0[0] + step, x0[1]}, {x0[0], x0[1] + step}};
  std::array<double, 3> fx{f(x[0]), f(x[1]), f(x[2])};
  auto lerp = [](const std::array<double, 2>& a, const std::array<double, 2>& b, double t) {
    return std::array<double, 2>{a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])};
  };
  for (int it = 0; it < max_iter; ++it) {
    std::array<int, 3> idx{0, 1, 2};
    std::sort(idx.begin(), idx.end(), [&](int i, int j) { return fx[i] < fx[j]; });
    const int best = idx[0], mid = idx[1], worst = idx[2];
    if (std::abs(fx[worst] - fx[best]) <= ftol) break;
    const std::array<double, 2> c{(x[best][0] + x[mid][0]) / 2, (x[best][1] + x[mid][1]) / 2};
    const auto xr = lerp(c, x[worst], -1.0);
    const double fr = f(xr);
    if (fr < fx[best]) {
      const auto xe = lerp(c, x[worst], -2.0);
      const double fe = f(xe);
      if (fe < fr) {
        x[worst] = xe, fx[worst] = fe;
      } else {
        x[worst] = xr, fx[worst] = fr;
      }
    } else if (fr < fx[mid]) {
      x[worst] = xr, fx[worst] = fr;
    } else {
      const auto xc = fr < fx[worst] ? lerp(c, xr, 0.5) : lerp(c, x[worst], 0.5);
      const double fc = f(xc);
      if (fc < std::min(fr, fx[worst])) {
        x[worst] = xc, fx[worst] = fc;
      } else {
        for (int i : {mid, worst}) {
          x[i] = lerp(x[best], x[i], 0.5);
          fx[i] = f(x[i]);
        }
      }
    }
  }
  const int b = int(std::min_element(fx.begin(), fx.end()) - fx.begin());
  return {x[b], fx[b]};
}

}  // namespace detail

/// Discord by direct minimization over projective measurements on B:
/// a (theta, phi) sweep followed by Nelder-Mead refinement from the best
/// sweep point in each of three theta bands. The theta subdivision is even so
/// that the poles and the equator, where X states take their optimum, are
/// sweep nodes; the poles are evaluated once since phi is degenerate there.
template <typename Real>
DiscordResult discord_bruteforce_full(const DensityMatrix<Real>& rho, int grid_resolution = 64) {
  if (grid_resolution < 4) throw DomainError("grid_resolution must be >= 4");
  const double pi = std::numbers::pi;
  auto cost = [&](double th, double ph) {
    return double(conditional_entropy(rho, MeasurementBasis{th, ph}));
  };
  const int nt = 2 * (grid_resolution / 2);
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::array<double, 3> band_best{inf, inf, inf};
  std::array<MeasurementBasis, 3> band_arg{};
  for (int i = 0; i <= nt; ++i) {
    const double th = pi * i / nt;
    const int band = std::min(2, 3 * i / nt);
    const int nphi = (i == 0 || i == nt) ? 1 : grid_resolution;
    for (int j = 0; j < nphi; ++j) {
      const double ph = 2 * pi * j / grid_resolution;
      const double c = cost(th, ph);
      if (c < band_best[band]) band_best[band] = c, band_arg[band] = {th, ph};
    }
  }
  double best = inf;
  MeasurementBasis arg;
  for (int k = 0; k < 3; ++k) {
    if (band_best[k] < best) best = band_best[k], arg = band_arg[k];
    const auto [x, fx] = detail::nelder_mead_2d(
        [&](const std::array<double, 2>& v) { return cost(v[0], v[1]); }, {band_arg[k].theta, band_arg[k].phi},
        pi / grid_resolution);
    if (fx < best) best = fx, arg = {x[0], x[1]};
  }

  const double sa = double(von_neumann_entropy<Real, 2>(reduced_a(rho)));
  const double sb = double(von_neumann_entropy<Real, 2>(reduced_b(rho)));
  const double s = double(von_neumann_entropy<Real, 4>(rho));
  DiscordResult r;
  r.mutual_information = sa + sb - s;
  r.classical_correlation = sa - best;
  r.discord = r.mutual_information - r.classical_correlation;
  r.optimum = arg;
  return r;
}

template <typename Real>
Real discord_bruteforce(const DensityMatrix<Real>& rho, int grid_resolution = 64) {
  return Real(discord_bruteforce_full(rho, grid_resolution).discord);
}

// -------------------------------------------------------------------------
// report

enum class DiscordMethod {
  Auto,        ///< closed form for X-shaped states, brute force otherwise
  BruteForce,
};

struct CorrelationOptions {
  DiscordMethod discord_method = DiscordMethod::Auto;
  DiscordVariant variant{};
  int grid_resolution = 64;
};

/// All measures of one state. Entropic quantities are NaN when the state
/// is not positive semidefinite.
template <typename Real>
CorrelationReport correlation_report(const DensityMatrix<Real>& rho, const CorrelationOptions& opt = {}) {
  CorrelationReport r;
  r.negativity = double(negativity(rho));
  r.log_negativity = std::log2(1.0 + 2.0 * r.negativity);
  r.concurrence = double(concurrence(rho));
  r.trace = double(rho.trace().real());
  r.purity = double((rho * rho).trace().real());
  const double nan = std::numeric_limits<double>::quiet_NaN();
  r.discord = r.mutual_information = r.classical_correlation = nan;
  if (double(min_eigenvalue(rho)) < -kEntropyTolerance) return r;
  try {
    if (opt.discord_method == DiscordMethod::Auto && is_x_shaped(rho)) {
      const double sa = double(von_neumann_entropy<Real, 2>(reduced_a(rho)));
      const double sb = double(von_neumann_entropy<Real, 2>(reduced_b(rho)));
      const double s = double(von_neumann_entropy<Real, 4>(rho));
      r.mutual_information = sa + sb - s;
      r.discord = double(discord_x(rho, opt.variant));
      r.classical_correlation = r.mutual_information - r.discord;
    } else {
      const DiscordResult d = discord_bruteforce_full(rho, opt.grid_resolution);
      r.discord = d.discord;
      r.mutual_information = d.mutual_information;
      r.classical_correlation = d.classical_correlation;
    }
  } catch (const DomainError&) {
    r.discord = r.mutual_information = r.classical_correlation = nan;
  }
  return r;
}

}  // namespace fockwin
