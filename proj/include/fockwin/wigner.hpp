#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "fockwin/types.hpp"

namespace fockwin {

/// Where the displaced-parity matrix elements come from.
enum class ElementSource {
  Oracle,  ///< truncated-Fock-space displacement operator
  Closed,  ///< Laguerre closed form of <m|D P D^dagger|m'>
  Paper,   ///< the printed Laguerre expression, evaluated verbatim
};

/// L_n^k(x) by the three-term recurrence.
template <typename Real>
Real laguerre_assoc(int n, int k, Real x) {
  if (n < 0 || k < 0) throw DomainError("Laguerre indices must be >= 0");
  Real prev = 1;
  if (n == 0) return prev;
  Real cur = Real(1 + k) - x;
  for (int j = 1; j < n; ++j) {
    const Real next = ((Real(2 * j + 1 + k) - x) * cur - Real(j + k) * prev) / Real(j + 1);
    prev = cur;
    cur = next;
  }
  return cur;
}

/// Printed element e^{-|a|^2} (-1)^m (2|a|)^{m'-m} sqrt(m/m'!) L_m^{m'-m}(|a|),
/// m <= m'; m > m' by conjugate symmetry.
template <typename Real>
std::complex<Real> displaced_parity_paper(int m, int mp, std::complex<Real> alpha) {
  if (m < 0 || mp < 0) throw DomainError("Fock indices must be >= 0");
  if (m > mp) return std::conj(displaced_parity_paper(mp, m, alpha));
  const Real r = std::abs(alpha);
  const int dk = mp - m;
  const Real pw = dk == 0 ? Real(1) : std::pow(Real(2) * r, Real(dk));
  const Real root = std::sqrt(Real(m) / std::tgamma(Real(mp) + 1));
  const Real sign = m % 2 == 0 ? Real(1) : Real(-1);
  return std::complex<Real>(std::exp(-r * r) * sign * pw * root * laguerre_assoc(m, dk, r), 0);
}

/// <m|D(a) P D(a)^dagger|m'> = e^{-2|a|^2} (-1)^m sqrt(m!/m'!) (2 a*)^{m'-m}
/// L_m^{m'-m}(4|a|^2) for m <= m'.
template <typename Real>
std::complex<Real> displaced_parity_closed(int m, int mp, std::complex<Real> alpha) {
  if (m < 0 || mp < 0) throw DomainError("Fock indices must be >= 0");
  if (m > mp) return std::conj(displaced_parity_closed(mp, m, alpha));
  const Real r2 = std::norm(alpha);
  const int dk = mp - m;
  const Real root = std::exp(Real(0.5) * (std::lgamma(Real(m) + 1) - std::lgamma(Real(mp) + 1)));
  const Real sign = m % 2 == 0 ? Real(1) : Real(-1);
  std::complex<Real> pw(1, 0);
  for (int i = 0; i < dk; ++i) pw *= Real(2) * std::conj(alpha);
  return std::exp(-Real(2) * r2) * sign * root * laguerre_assoc(m, dk, Real(4) * r2) * pw;
}

namespace detail {

/// Components 0..cutoff of D(a)^dagger |m> = e^{-|a|^2/2} e^{-a A^dagger} e^{a* A} |m>,
/// with A the annihilator truncated at `cutoff`. Both factors are nilpotent
/// on the truncated space so their series terminate.
template <typename Real>
std::vector<std::complex<Real>> displaced_fock_dagger(int m, std::complex<Real> alpha, int cutoff) {
  using C = std::complex<Real>;
  const Real r2 = std::norm(alpha);
  // e^{a* A}|m> = sum_i (a*)^{m-i}/(m-i)! sqrt(m!/i!) |i>
  std::vector<C> inner(m + 1);
  for (int i = 0; i <= m; ++i) {
    C pw(1, 0);
    for (int j = 0; j < m - i; ++j) pw *= std::conj(alpha);
    inner[i] = pw * std::exp(-std::lgamma(Real(m - i) + 1) +
                             Real(0.5) * (std::lgamma(Real(m) + 1) - std::lgamma(Real(i) + 1)));
  }
  std::vector<C> out(cutoff + 1, C(0));
  const Real la = r2 > 0 ? std::log(std::sqrt(r2)) : Real(0);
  const C ph = r2 > 0 ? -alpha / std::sqrt(r2) : C(0);
  for (int i = 0; i <= m && i <= cutoff; ++i) {
    if (inner[i] == C(0)) continue;
    C phase(1, 0);
    for (int k = i; k <= cutoff; ++k) {
      const int j = k - i;
      if (j > 0) {
        if (r2 == 0) break;
        phase *= ph;
      }
      const Real mag = std::exp(-r2 / 2 + Real(j) * la - std::lgamma(Real(j) + 1) +
                                Real(0.5) * (std::lgamma(Real(k) + 1) - std::lgamma(Real(i) + 1)));
      out[k] += inner[i] * phase * mag;
    }
  }
  return out;
}

template <typename Real>
std::complex<Real> parity_overlap(const std::vector<std::complex<Real>>& u,
                                  const std::vector<std::complex<Real>>& v) {
  std::complex<Real> s(0);
  for (std::size_t k = 0; k < u.size(); ++k) s += (k % 2 == 0 ? Real(1) : Real(-1)) * std::conj(u[k]) * v[k];
  return s;
}

}  // namespace detail

/// Smallest cutoff the oracle accepts.
inline int oracle_min_cutoff(int m, int mp) { return std::max(m, mp) + 20; }

/// Cutoff that covers the displaced-Fock distribution at |alpha|.
inline int oracle_auto_cutoff(int m, int mp, double abs_alpha) {
  const int mx = std::max(m, mp);
  return oracle_min_cutoff(m, mp) +
         int(std::ceil(abs_alpha * abs_alpha + 8.0 * abs_alpha * std::sqrt(mx + 1.0)));
}

inline constexpr double kOracleTolerance = 1e-10;

/// <m|D P D^dagger|m'> on a truncated Fock space. Throws ConvergenceError
/// when the cutoff is below max(m,m')+20 or when raising it by 10 moves the
/// value by more than 1e-10.
template <typename Real>
std::complex<Real> displaced_parity_oracle(int m, int mp, std::complex<Real> alpha, int cutoff) {
  if (m < 0 || mp < 0) throw DomainError("Fock indices must be >= 0");
  auto eval = [&](int n) {
    return detail::parity_overlap(detail::displaced_fock_dagger(m, alpha, n),
                                  detail::displaced_fock_dagger(mp, alpha, n));
  };
  const auto v = eval(cutoff);
  if (cutoff < oracle_min_cutoff(m, mp)) {
    throw ConvergenceError("oracle cutoff below max(m,m')+20", std::abs(v), std::abs(v));
  }
  const auto w = eval(cutoff + 10);
  if (std::abs(v - w) > Real(kOracleTolerance)) {
    throw ConvergenceError("oracle not converged in Fock cutoff", std::abs(w), std::abs(v));
  }
  return v;
}

template <typename Real>
std::complex<Real> displaced_parity_oracle(int m, int mp, std::complex<Real> alpha) {
  return displaced_parity_oracle(m, mp, alpha, oracle_auto_cutoff(m, mp, double(std::abs(alpha))));
}

template <typename Real>
std::complex<Real> displaced_parity(int m, int mp, std::complex<Real> alpha, ElementSource src) {
  switch (src) {
    case ElementSource::Paper: return displaced_parity_paper(m, mp, alpha);
    case ElementSource::Closed: return displaced_parity_closed(m, mp, alpha);
    case ElementSource::Oracle: break;
  }
  return displaced_parity_oracle(m, mp, alpha);
}

/// All four window elements K(base+k, base+i) at one point, [i][k].
template <typename Real>
std::array<std::array<std::complex<Real>, 2>, 2> window_elements(int base, std::complex<Real> alpha,
                                                                 ElementSource src) {
  std::array<std::array<std::complex<Real>, 2>, 2> e;
  if (src == ElementSource::Oracle) {
    // share the two displaced vectors between the four elements
    const int cut = std::max(oracle_auto_cutoff(base, base + 1, double(std::abs(alpha))),
                             oracle_min_cutoff(base, base + 1));
    std::array<std::vector<std::complex<Real>>, 2> v, w;
    for (int i = 0; i < 2; ++i) {
      v[i] = detail::displaced_fock_dagger(base + i, alpha, cut);
      w[i] = detail::displaced_fock_dagger(base + i, alpha, cut + 10);
    }
    for (int i = 0; i < 2; ++i)
      for (int k = 0; k < 2; ++k) {
        e[i][k] = detail::parity_overlap(v[k], v[i]);
        const auto fine = detail::parity_overlap(w[k], w[i]);
        if (std::abs(fine - e[i][k]) > Real(kOracleTolerance)) {
          throw ConvergenceError("oracle not converged in Fock cutoff", std::abs(fine),
                                 std::abs(e[i][k]));
        }
      }
    return e;
  }
  for (int i = 0; i < 2; ++i)
    for (int k = 0; k < 2; ++k) e[i][k] = displaced_parity(base + k, base + i, alpha, src);
  return e;
}

inline constexpr double kImaginaryResidueTolerance = 1e-10;

/// W(alpha, beta) = (4/pi^2) sum rho_{(ij),(kl)} K^A_{ki} K^B_{lj}, with the
/// absolute Fock indices of the window.
template <typename Real>
Real wigner_joint(const DensityMatrix<Real>& rho, std::complex<Real> alpha, std::complex<Real> beta,
                  const FockWindow& window, ElementSource src = ElementSource::Oracle) {
  check_window(window);
  const auto ka = window_elements(window.n1, alpha, src);
  const auto kb = window_elements(window.m1, beta, src);
  std::complex<Real> w(0);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) w += rho(2 * i + j, 2 * k + l) * ka[i][k] * kb[j][l];
  w *= Real(4) / (std::numbers::pi_v<Real> * std::numbers::pi_v<Real>);
  if (std::abs(w.imag()) > Real(kImaginaryResidueTolerance)) {
    throw ConsistencyError("Wigner function has imaginary residue " + std::to_string(double(w.imag())));
  }
  return w.real();
}

// -------------------------------------------------------------------------
// phase-space grid

/// Uniform grid on [-L, L] per real axis (Re a, Im a, Re b, Im b).
struct PhaseSpaceGrid {
  double extent = 5.0;
  int points = 32;

  double step() const { return 2.0 * extent / (points - 1); }
  double coord(int i) const { return -extent + step() * i; }
  /// Trapezoid weight of axis node i.
  double weight(int i) const { return (i == 0 || i == points - 1) ? 0.5 * step() : step(); }
  /// Same extent, half the points.
  PhaseSpaceGrid coarse() const { return {extent, points / 2}; }
};

inline void check_grid(const PhaseSpaceGrid& g) {
  if (!(g.extent > 0)) throw DomainError("grid extent must be > 0");
  if (g.points < 8 || g.points % 2 != 0) throw DomainError("points per axis must be even and >= 8");
}

inline double default_extent(const FockWindow& w) { return 5.0 + std::sqrt(w.n1 + w.m1 + 1.0); }

/// Per-mode K elements on every point of a 2-dimensional slice of the grid,
/// flattened as re_index * points + im_index. Time independent, so it is
/// built once per grid and reused along a trajectory.
template <typename Real>
struct KTable {
  int base = 0;
  ElementSource source = ElementSource::Oracle;
  PhaseSpaceGrid grid;
  std::array<std::array<Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>, 2>, 2> k;
};

template <typename Real>
KTable<Real> make_k_table(const PhaseSpaceGrid& grid, int base, ElementSource src) {
  if (grid.points < 2 || !(grid.extent > 0)) throw DomainError("invalid phase-space grid");
  if (base < 0) throw DomainError("Fock index must be >= 0");
  KTable<Real> t{base, src, grid, {}};
  const int n = grid.points, n2 = n * n;
  for (auto& row : t.k)
    for (auto& v : row) v.resize(n2);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const std::complex<Real> alpha(Real(grid.coord(a)), Real(grid.coord(b)));
      const auto e = window_elements(base, alpha, src);
      for (int i = 0; i < 2; ++i)
        for (int k = 0; k < 2; ++k) t.k[i][k][a * n + b] = e[i][k];
    }
  return t;
}

/// W on the full 4-dimensional grid: row = alpha point, column = beta point.
template <typename Real>
struct WignerField {
  PhaseSpaceGrid grid;
  Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic> values;
};

template <typename Real>
WignerField<Real> wigner_field(const DensityMatrix<Real>& rho, const KTable<Real>& ka,
                               const KTable<Real>& kb) {
  using CM = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
  if (ka.grid.points != kb.grid.points || ka.grid.extent != kb.grid.extent) {
    throw DomainError("mode tables built on different grids");
  }
  const int n2 = int(ka.k[0][0].size());
  CM w = CM::Zero(n2, n2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) {
          const std::complex<Real> c = rho(2 * i + j, 2 * k + l);
          if (c == std::complex<Real>(0)) continue;
          w.noalias() += (c * ka.k[i][k]) * kb.k[j][l].transpose();
        }
  w *= Real(4) / (std::numbers::pi_v<Real> * std::numbers::pi_v<Real>);
  const Real residue = w.imag().cwiseAbs().maxCoeff();
  if (residue > Real(kImaginaryResidueTolerance)) {
    throw ConsistencyError("Wigner field has imaginary residue " + std::to_string(double(residue)));
  }
  return {ka.grid, w.real()};
}

/// Trapezoid integrals of W and |W| over the grid, summed in fixed order.
template <typename Real>
std::pair<Real, Real> integrate_field(const WignerField<Real>& f) {
  const int n = f.grid.points;
  Eigen::Matrix<Real, Eigen::Dynamic, 1> w2(n * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) w2[a * n + b] = Real(f.grid.weight(a) * f.grid.weight(b));
  Real s = 0, sa = 0;
  for (int c = 0; c < f.values.cols(); ++c) {
    Real col = 0, cola = 0;
    for (int r = 0; r < f.values.rows(); ++r) {
      col += w2[r] * f.values(r, c);
      cola += w2[r] * std::abs(f.values(r, c));
    }
    s += w2[c] * col;
    sa += w2[c] * cola;
  }
  return {s, sa};
}

namespace detail {

/// Rows of the real factors U, V with W = (4/pi^2) U V^T on the grid:
/// with a_s(alpha) = K^A_{ik}, b_t(beta) = K^B_{jl} and M_{(ik),(jl)} = rho_{(ij),(kl)},
/// W = Re[(A M) B^T] = P_re B_re^T - P_im B_im^T.
template <typename Real>
std::pair<Eigen::Matrix<Real, Eigen::Dynamic, 8>, Eigen::Matrix<Real, Eigen::Dynamic, 8>> field_factors(
    const DensityMatrix<Real>& rho, const KTable<Real>& ka, const KTable<Real>& kb) {
  using CM = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 4>;
  const Eigen::Index n2 = ka.k[0][0].size();
  CM a(n2, 4), b(n2, 4);
  Eigen::Matrix<std::complex<Real>, 4, 4> m;
  for (int i = 0; i < 2; ++i)
    for (int k = 0; k < 2; ++k) {
      a.col(2 * i + k) = ka.k[i][k];
      b.col(2 * i + k) = kb.k[i][k];
      for (int j = 0; j < 2; ++j)
        for (int l = 0; l < 2; ++l) m(2 * i + k, 2 * j + l) = rho(2 * i + j, 2 * k + l);
    }
  const CM pm = a * m;
  Eigen::Matrix<Real, Eigen::Dynamic, 8> u(n2, 8), v(n2, 8);
  u << pm.real(), -pm.imag();
  v << b.real(), b.imag();
  return {u, v};
}

}  // namespace detail

struct FieldIntegrals {
  double integral = 0.0;      ///< trapezoid integral of W
  double abs_integral = 0.0;  ///< trapezoid integral of |W|
  double imag_residue = 0.0;  ///< max |Im W|, only when requested
};

/// Integrals of W and |W| over the grid without storing the field: rows of
/// the alpha grid are processed in fixed-size blocks, each block a real
/// rank-8 product, summed in a fixed order.
template <typename Real>
FieldIntegrals field_integrals(const DensityMatrix<Real>& rho, const KTable<Real>& ka, const KTable<Real>& kb,
                               bool check_residue = false) {
  using RM = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
  using RV = Eigen::Matrix<Real, Eigen::Dynamic, 1>;
  if (ka.grid.points != kb.grid.points || ka.grid.extent != kb.grid.extent) {
    throw DomainError("mode tables built on different grids");
  }
  const int n = ka.grid.points;
  const Eigen::Index n2 = Eigen::Index(n) * n;
  RV w2(n2);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) w2[a * n + b] = Real(ka.grid.weight(a) * ka.grid.weight(b));
  const auto [u, v] = detail::field_factors(rho, ka, kb);
  // imaginary part: P_re B_im^T + P_im B_re^T
  Eigen::Matrix<Real, Eigen::Dynamic, 8> ui, vi;
  if (check_residue) {
    ui.resize(n2, 8);
    vi.resize(n2, 8);
    ui << -u.rightCols(4), u.leftCols(4);
    vi = v;
  }
  const Real norm = Real(4) / (std::numbers::pi_v<Real> * std::numbers::pi_v<Real>);
  constexpr Eigen::Index kBlock = 256;
  Real s = 0, sa = 0, res = 0;
  RM blk;
  for (Eigen::Index r0 = 0; r0 < n2; r0 += kBlock) {
    const Eigen::Index rows = std::min(kBlock, n2 - r0);
    blk.noalias() = u.middleRows(r0, rows) * v.transpose();
    const RV rs = blk * w2, ra = blk.cwiseAbs() * w2;
    s += w2.segment(r0, rows).dot(rs);
    sa += w2.segment(r0, rows).dot(ra);
    if (check_residue) {
      blk.noalias() = ui.middleRows(r0, rows) * vi.transpose();
      res = std::max(res, blk.cwiseAbs().maxCoeff());
    }
  }
  return {double(norm * s), double(norm * sa), double(norm * res)};
}

struct VolumeResult {
  double volume = 0.0;         ///< at the requested resolution
  double volume_coarse = 0.0;  ///< at half resolution
  double integral = 0.0;       ///< integral of W
  double integral_coarse = 0.0;
  bool converged = true;
};

inline constexpr double kVolumeTolerance = 5e-3;

/// V = (integral |W| - integral W) / 2 at full and half resolution, clamped at 0.
template <typename Real>
VolumeResult negativity_volume(const DensityMatrix<Real>& rho, const KTable<Real>& ka,
                               const KTable<Real>& kb, const KTable<Real>& ka_coarse,
                               const KTable<Real>& kb_coarse, double tol = kVolumeTolerance,
                               bool throw_on_failure = true) {
  auto vol = [&](const KTable<Real>& a, const KTable<Real>& b, double& integral, bool check) {
    const auto f = field_integrals(rho, a, b, check);
    if (f.imag_residue > kImaginaryResidueTolerance) {
      throw ConsistencyError("Wigner field has imaginary residue " + std::to_string(f.imag_residue));
    }
    integral = f.integral;
    return std::max(0.0, 0.5 * (f.abs_integral - f.integral));
  };
  VolumeResult r;
  // the residue guard runs on the cheaper half-resolution pass
  r.volume = vol(ka, kb, r.integral, false);
  r.volume_coarse = vol(ka_coarse, kb_coarse, r.integral_coarse, true);
  r.converged = std::abs(r.volume - r.volume_coarse) <= 10.0 * tol;
  if (!r.converged && throw_on_failure) {
    throw ConvergenceError("negativity volume did not converge under grid refinement", r.volume,
                           r.volume_coarse);
  }
  return r;
}

template <typename Real>
VolumeResult negativity_volume(const DensityMatrix<Real>& rho, const PhaseSpaceGrid& grid,
                               const FockWindow& window, ElementSource src = ElementSource::Oracle,
                               double tol = kVolumeTolerance) {
  check_grid(grid);
  check_window(window);
  const auto g2 = grid.coarse();
  return negativity_volume(rho, make_k_table<Real>(grid, window.n1, src),
                           make_k_table<Real>(grid, window.m1, src),
                           make_k_table<Real>(g2, window.n1, src),
                           make_k_table<Real>(g2, window.m1, src), tol);
}

/// W on the plane Im a = Im b = 0, rows Re a and columns Re b.
template <typename Real>
Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic> wigner_slice(const DensityMatrix<Real>& rho,
                                                                 const PhaseSpaceGrid& grid,
                                                                 const FockWindow& window,
                                                                 ElementSource src = ElementSource::Oracle) {
  check_window(window);
  const int n = grid.points;
  std::vector<std::array<std::array<std::complex<Real>, 2>, 2>> ka(n), kb(n);
  for (int i = 0; i < n; ++i) {
    const std::complex<Real> x(Real(grid.coord(i)), 0);
    ka[i] = window_elements(window.n1, x, src);
    kb[i] = window_elements(window.m1, x, src);
  }
  Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic> out(n, n);
  const Real norm = Real(4) / (std::numbers::pi_v<Real> * std::numbers::pi_v<Real>);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      std::complex<Real> w(0);
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          for (int k = 0; k < 2; ++k)
            for (int l = 0; l < 2; ++l) w += rho(2 * i + j, 2 * k + l) * ka[a][i][k] * kb[b][j][l];
      out(a, b) = norm * w.real();
    }
  return out;
}

}  // namespace fockwin
