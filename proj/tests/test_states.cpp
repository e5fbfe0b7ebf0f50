#include <doctest.h>

#include <cmath>

#include "fockwin/states.hpp"
#include "support.hpp"

using namespace fockwin;
using fwtest::C;

TEST_CASE("thermal occupation") {
  CHECK(thermal_occupation(0.0, 1e10) == 0.0);
  CHECK(bose_occupation(std::log(2.0)) == doctest::Approx(1.0).epsilon(1e-15));
  double prev = bose_occupation(0.1);
  for (double x = 0.2; x < 50; x += 0.1) {
    const double n = bose_occupation(x);
    CHECK(n < prev);
    prev = n;
  }
  CHECK(bose_occupation(std::numeric_limits<double>::infinity()) == 0.0);
  // hbar nu / (k_B T) = ln 2 at T = 1 K
  const double nu = std::log(2.0) * 1.380649e-23 / 1.054571817e-34;
  CHECK(thermal_occupation(1.0, nu) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(thermal_occupation(-1.0, 1.0), DomainError);
  CHECK_THROWS_AS(thermal_occupation(1.0, 0.0), DomainError);
}

TEST_CASE("coherent amplitudes") {
  SUBCASE("projection, nbar' = 1 gives equal weights") {
    const auto s = projection_amplitudes(1.0, {0, 0});
    for (C z : {s.normalized.a, s.normalized.b, s.normalized.c, s.normalized.d}) {
      CHECK(z.real() == doctest::Approx(0.5).epsilon(1e-15));
    }
  }
  SUBCASE("projection, vacuum") {
    const auto s = projection_amplitudes(0.0, {0, 0});
    CHECK(s.normalized.a.real() == 1.0);
    CHECK(std::abs(s.normalized.b) + std::abs(s.normalized.c) + std::abs(s.normalized.d) == 0.0);
  }
  SUBCASE("projection symmetric in the two modes") {
    for (double nb : {0.1, 0.7, 2.5}) {
      const auto s = projection_amplitudes(nb, {0, 0});
      CHECK(std::abs(s.normalized.b - s.normalized.c) < 1e-15);
    }
  }
  SUBCASE("printed rule evaluated verbatim at nbar' = 0") {
    // the c exponent m1(n1+1) is 0 at the origin window, so c = 1/sqrt2 as well
    const auto s = coherent_amplitudes_paper(0.0, {0, 0});
    CHECK(s.raw.a.real() == doctest::Approx(fwtest::kInvSqrt2).epsilon(1e-15));
    CHECK(s.raw.b == C(0));
    CHECK(s.raw.c.real() == doctest::Approx(fwtest::kInvSqrt2).epsilon(1e-15));
    CHECK(s.raw.d == C(0));
  }
  SUBCASE("printed rule and projection agree at nbar' = 1 on the origin window") {
    const auto p = coherent_amplitudes_paper(1.0, {0, 0});
    const auto q = projection_amplitudes(1.0, {0, 0});
    CHECK((p.normalized.vector() - q.normalized.vector()).norm() < 1e-15);
  }
  SUBCASE("normalization contract") {
    for (int n1 = 0; n1 < 4; ++n1)
      for (int m1 = 0; m1 < 4; ++m1)
        for (double nb : {0.0, 0.3, 1.0, 4.0}) {
          if (nb == 0.0 && n1 + m1 > 0) continue;  // degenerate, covered below
          CHECK(coherent_amplitudes_paper(nb, {n1, m1}).normalized.squared_norm() ==
                doctest::Approx(1.0).epsilon(1e-12));
          CHECK(projection_amplitudes(nb, {n1, m1}).normalized.squared_norm() ==
                doctest::Approx(1.0).epsilon(1e-12));
        }
  }
  SUBCASE("degenerate") {
    // at nbar' = 0 the projection onto a window above the vacuum vanishes
    CHECK_THROWS_AS(projection_amplitudes(0.0, {1, 1}), DomainError);
    CHECK_THROWS_AS(normalized(Amplitudes<double>{}), DomainError);
    CHECK_THROWS_AS(projection_amplitudes(-1.0, {0, 0}), DomainError);
  }
}

TEST_CASE("EPR and NOON builders") {
  const double s = fwtest::kInvSqrt2;
  const auto epr = build_epr<double>(s, s);
  CHECK(epr(0, 0).real() == doctest::Approx(0.5));
  CHECK(epr(3, 3).real() == doctest::Approx(0.5));
  CHECK(epr(0, 3).real() == doctest::Approx(0.5));
  CHECK(epr(1, 1) == C(0));
  CHECK(epr(1, 2) == C(0));

  const auto prod = build_epr<double>(1.0, 0.0);
  DensityMatrixd e00 = DensityMatrixd::Zero();
  e00(0, 0) = 1;
  CHECK(prod == e00);

  const auto noon = build_noon<double>(s, s);
  CHECK(noon(1, 1).real() == doctest::Approx(0.5));
  CHECK(noon(2, 2).real() == doctest::Approx(0.5));
  CHECK(noon(1, 2).real() == doctest::Approx(0.5));
  const auto noon1 = build_noon<double>(0.0, 1.0);
  CHECK(noon1(2, 2) == C(1));

  // complex amplitudes: rho14 = a d*
  const auto cepr = build_epr<double>(C(0.6, 0), C(0, 0.8));
  CHECK(std::abs(cepr(0, 3) - C(0.6) * std::conj(C(0, 0.8))) < 1e-15);

  for (const auto& r : {epr, prod, noon, noon1, cepr}) {
    const auto v = validate(r, 1e-10);
    CHECK(v.is_physical);
    Eigen::SelfAdjointEigenSolver<DensityMatrixd> es(r);
    CHECK(es.eigenvalues()[3] == doctest::Approx(1.0));  // rank 1
    CHECK(std::abs(es.eigenvalues()[2]) < 1e-12);
    // validate-then-rebuild round trip
    if (r(1, 1) == C(0) && r(2, 2) == C(0) && r(0, 3).imag() == 0) {
      const auto again = build_epr<double>(std::sqrt(r(0, 0).real()), std::sqrt(r(3, 3).real()));
      CHECK(fwtest::max_abs_diff(again, r) < 1e-15);
    }
  }
  CHECK_THROWS_AS(build_epr<double>(1.0, 1.0), DomainError);
  CHECK_THROWS_AS(build_noon<double>(0.5, 0.5), DomainError);
}

TEST_CASE("validate") {
  const DensityMatrixd id = DensityMatrixd::Identity() / 4.0;
  const auto v = validate(id);
  CHECK(v.is_physical);
  CHECK(v.min_eigenvalue == doctest::Approx(0.25));
  CHECK(v.trace == doctest::Approx(1.0));

  DensityMatrixd h = id;
  h(0, 1) = 0.1;
  CHECK(validate(h).hermiticity_defect > 0);
  CHECK_FALSE(validate(h).is_physical);

  DensityMatrixd lossy = id * 0.9;
  CHECK_FALSE(validate(lossy).is_physical);
  CHECK_THROWS_AS(validate(id, 0.0), DomainError);
}

TEST_CASE("window checks") {
  CHECK_THROWS_AS(check_window({-1, 0}), DomainError);
  CHECK_NOTHROW(check_window({0, 3}));
}
