#include <doctest.h>

#include <cmath>
#include <random>

#include "fockwin/damping.hpp"
#include "fockwin/dynamics.hpp"
#include "support.hpp"

using namespace fockwin;
using fwtest::C;

namespace {

// (4 wc^2 / pi) * integral_0^inf (1 - cos w t) / (wc^2 + w^2) dw by composite
// Simpson on [0, W] plus the analytic tail of the non-oscillating part.
double kernel_rate_quadrature(double t, double wc) {
  const double W = 1e5;
  const int n = 20'000'000;
  const double h = W / n;
  auto f = [&](double w) { return (1 - std::cos(w * t)) / (wc * wc + w * w); };
  double s = f(0) + f(W);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(i * h);
  s *= h / 3;
  const double tail = (M_PI / 2 - std::atan(W / wc)) / wc;
  return 4 * wc * wc / M_PI * (s + tail);
}

DensityMatrixd diag(double a, double b, double c, double d) {
  DensityMatrixd r = DensityMatrixd::Zero();
  r(0, 0) = a, r(1, 1) = b, r(2, 2) = c, r(3, 3) = d;
  return r;
}

}  // namespace

TEST_CASE("non-Markovian accumulated decoherence") {
  for (double r : {0.1, 1.0, 5.0}) CHECK(gamma_nonmarkov(0.0, r) == 0.0);
  // frozen from a 30-digit evaluation; equals 4 e cos 1 at r = 1
  CHECK(gamma_nonmarkov(1.0, 1.0) == doctest::Approx(5.8747757596635406).epsilon(1e-14));
  CHECK(gamma_nonmarkov(1.0, 1.0) == doctest::Approx(4 * M_E * std::cos(1.0)).epsilon(1e-14));
  CHECK(gamma_nonmarkov(1.0, 0.1) == doctest::Approx(0.0072505004882023481).epsilon(1e-12));
  CHECK(gamma_nonmarkov(0.5, 5.0) == doctest::Approx(39.430129442926725).epsilon(1e-13));
  CHECK(gamma_nonmarkov(2.0, 0.1) == doctest::Approx(0.056369914683406623).epsilon(1e-12));

  SUBCASE("analytic derivative") {
    CHECK(gamma_nonmarkov_derivative(1.0, 1.0) == doctest::Approx(0.72535461094817106).epsilon(1e-12));
    CHECK(gamma_nonmarkov_derivative(0.3, 1.0) == doctest::Approx(7.5626352810657838).epsilon(1e-12));
    CHECK(gamma_nonmarkov_derivative(0.5, 5.0) == doctest::Approx(195.7774489171382).epsilon(1e-12));
    // rate at the origin is 8 r^2 (3 r^2 + r) / (1 + r^2)^2, not zero
    for (double r : {0.1, 1.0, 5.0}) {
      const double s = 1 + r * r;
      CHECK(gamma_nonmarkov_derivative(0.0, r) == doctest::Approx(8 * r * r * (3 * r * r + r) / (s * s)));
    }
    const double h = 1e-5;
    for (double r : {0.1, 1.0, 5.0})
      for (double t = h; t < 3.0; t += 0.137) {
        const double fd = (gamma_nonmarkov(t + h, r) - gamma_nonmarkov(t - h, r)) / (2 * h);
        const double scale = std::max(1.0, std::abs(fd));
        CHECK(std::abs(gamma_nonmarkov_derivative(t, r) - fd) <= 1e-6 * scale);
      }
  }

  SUBCASE("overflow guard") {
    CHECK_NOTHROW(gamma_nonmarkov(139.9, 5.0));
    try {
      gamma_nonmarkov(141.0, 5.0);
      FAIL("expected overflow");
    } catch (const OverflowError& e) {
      CHECK(e.time() == 141.0);
    }
    CHECK_THROWS_AS(gamma_nonmarkov(-1.0, 1.0), DomainError);
    CHECK_THROWS_AS(gamma_nonmarkov(1.0, 0.0), DomainError);
  }
}

TEST_CASE("kernel-integrated Ohmic rate") {
  CHECK(gamma_kernel(0.0, 1.3) == 0.0);
  CHECK(gamma_kernel(1e3, 1.3) == doctest::Approx(2.6));
  CHECK(gamma_kernel(1.0, 1.0) == doctest::Approx(2 * (1 - std::exp(-1.0))).epsilon(1e-15));
  for (auto [t, wc] : {std::pair{1.0, 1.0}, std::pair{0.4, 2.0}, std::pair{3.0, 0.5}}) {
    CHECK(std::abs(gamma_kernel(t, wc) - kernel_rate_quadrature(t, wc)) < 1e-8);
  }
}

TEST_CASE("instantaneous rate and accumulated theta") {
  const DampingModel mk = Markovian{0.3};
  CHECK(instantaneous_rate(mk, 0.0) == 0.3);
  CHECK(instantaneous_rate(mk, 7.0) == 0.3);
  CHECK(accumulated_theta(Markovian{1.0}, std::log(2.0)) == doctest::Approx(std::log(2.0)));
  const DampingModel nm = NonMarkovianOhmic{2.0, 1.0};
  CHECK(accumulated_theta(nm, 0.5) == doctest::Approx(gamma_nonmarkov(1.0, 1.0)));
  for (const DampingModel& m : {DampingModel{Markovian{0.7}}, DampingModel{NonMarkovianOhmic{1.5, 0.1}},
                                DampingModel{NonMarkovianOhmic{1.0, 1.0}}, DampingModel{KernelIntegral{1.7}}}) {
    CHECK(accumulated_theta(m, 0.0) == 0.0);
    const double h = 1e-5;
    for (double t = 0.05; t < 1.0; t += 0.11) {
      const double fd = (accumulated_theta(m, t + h) - accumulated_theta(m, t - h)) / (2 * h);
      CHECK(instantaneous_rate(m, t) == doctest::Approx(fd).epsilon(1e-7));
    }
  }
  CHECK_THROWS_AS(check_model(Markovian{-1.0}), DomainError);
  CHECK_THROWS_AS(check_model(NonMarkovianOhmic{0.0, 1.0}), DomainError);
  CHECK_THROWS_AS(check_model(KernelIntegral{0.0}), DomainError);
}

TEST_CASE("equations of motion") {
  const DampingModel mk = Markovian{1.0};
  std::mt19937_64 rng(11);

  SUBCASE("vacuum is stationary") {
    const auto d = ode_rhs(diag(1, 0, 0, 0), 0.0, EvolutionParams{{0, 0}, 0.0}, mk);
    CHECK(d.cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("trace is conserved at the origin window, also with thermal photons") {
    for (double nb : {0.0, 0.4}) {
      for (int k = 0; k < 20; ++k) {
        const auto rho = fwtest::random_state(rng);
        const auto d = ode_rhs(rho, 0.0, EvolutionParams{{0, 0}, nb}, mk);
        CHECK(std::abs(d.trace()) < 1e-14);
      }
    }
  }
  SUBCASE("population leaks below the window for n1 = m1 = 1") {
    const auto d = ode_rhs(diag(1, 0, 0, 0), 0.0, EvolutionParams{{1, 1}, 0.0}, Markovian{0.7});
    CHECK(d.trace().real() == doctest::Approx(-2 * 0.7));
  }
  SUBCASE("trace-closure row") {
    EvolutionParams p{{2, 2}, 0.1, ClosureMode::PaperClosure};
    for (int k = 0; k < 10; ++k) {
      const auto d = ode_rhs(fwtest::random_state(rng), 0.0, p, mk);
      CHECK(std::abs(d.trace()) < 1e-14);
    }
  }
  SUBCASE("Hermitian input gives Hermitian derivative") {
    for (auto form : {EquationForm::Strict, EquationForm::Corrected}) {
      EvolutionParams p{{1, 2}, 0.3, ClosureMode::Leaky, form};
      const auto d = ode_rhs(fwtest::random_state(rng), 0.0, p, mk);
      CHECK(hermiticity_defect(d) < 1e-15);
    }
  }
  SUBCASE("forms differ only in the rho13 thermal term and the rho14 decay") {
    const auto rho = fwtest::random_state(rng);
    EvolutionParams s{{1, 1}, 0.3, ClosureMode::Leaky, EquationForm::Strict};
    EvolutionParams c = s;
    c.form = EquationForm::Corrected;
    const DensityMatrixd diff = ode_rhs(rho, 0.0, s, mk) - ode_rhs(rho, 0.0, c, mk);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        const bool touched = (i == 0 && j == 2) || (i == 2 && j == 0) || (i == 0 && j == 3) || (i == 3 && j == 0);
        if (!touched) CHECK(std::abs(diff(i, j)) == 0.0);
      }
    // the two forms coincide for rho13 when nbar = 1
    EvolutionParams s1 = s, c1 = c;
    s1.nbar = c1.nbar = 1.0;
    const DensityMatrixd d1 = ode_rhs(rho, 0.0, s1, mk) - ode_rhs(rho, 0.0, c1, mk);
    CHECK(std::abs(d1(0, 2)) < 1e-15);
  }
}

TEST_CASE("RK4 integration") {
  const double s = fwtest::kInvSqrt2;
  const auto epr = build_epr<double>(s, s);
  const auto grid = uniform_grid(2.0, 41);

  SUBCASE("zero rate keeps the state") {
    const auto tr = evolve_ode(epr, EvolutionParams{}, Markovian{0.0}, grid);
    for (const auto& r : tr.states) CHECK(fwtest::max_abs_diff(r, epr) == 0.0);
  }
  SUBCASE("EPR coherence decays as e^{-2 gamma t}") {
    const auto tr = evolve_ode(epr, EvolutionParams{}, Markovian{1.0}, grid);
    CHECK(tr.states.front() == epr);
    for (std::size_t k = 0; k < grid.size(); ++k) {
      CHECK(std::abs(tr.states[k](0, 3).real() - 0.5 * std::exp(-2 * grid[k])) < 1e-8);
      CHECK(hermiticity_defect(tr.states[k]) <= 1e-10);
    }
  }
  SUBCASE("halving the step changes nothing at gamma t = 2") {
    std::mt19937_64 rng(5);
    const auto rho = fwtest::random_state(rng);
    EvolutionParams p{{1, 1}, 0.2};
    const auto a = evolve_ode(rho, p, Markovian{1.0}, grid, {100});
    const auto b = evolve_ode(rho, p, Markovian{1.0}, grid, {200});
    CHECK(fwtest::max_abs_diff(a.states.back(), b.states.back()) < 1e-9);
  }
  SUBCASE("bad grids") {
    CHECK_THROWS_AS(evolve_ode(epr, EvolutionParams{}, Markovian{1.0}, std::vector<double>{0.1, 0.2}), DomainError);
    CHECK_THROWS_AS(evolve_ode(epr, EvolutionParams{}, Markovian{1.0}, std::vector<double>{0.0, 0.2, 0.2}),
                    DomainError);
    CHECK_THROWS_AS(uniform_grid(1.0, 1), DomainError);
    CHECK(uniform_grid(0.0, 5).size() == 1);
  }
  SUBCASE("runaway kernel growth surfaces with the offending time") {
    // e^{5t} growth makes the fixed step unstable long before the overflow guard
    try {
      evolve_ode(epr, EvolutionParams{}, NonMarkovianOhmic{1.0, 5.0}, uniform_grid(150.0, 3));
      FAIL("expected an integration error");
    } catch (const IntegrationError& e) {
      CHECK(e.time() > 0.0);
      CHECK(e.time() < 150.0);
    }
  }
  SUBCASE("overflow guard reports the step time") {
    // one RK4 step over [0, 141]: the last stage evaluates the rate at r w0 t = 705
    try {
      evolve_ode(epr, EvolutionParams{}, NonMarkovianOhmic{1.0, 5.0}, std::vector<double>{0.0, 141.0}, {1});
      FAIL("expected overflow");
    } catch (const OverflowError& e) {
      CHECK(e.time() == 0.0);
    }
  }
}

TEST_CASE("analytic vacuum propagator") {
  const double s = fwtest::kInvSqrt2;
  const auto epr = build_epr<double>(s, s);

  SUBCASE("identity at Theta = 0") {
    std::mt19937_64 rng(3);
    const auto rho = fwtest::random_state(rng);
    for (int m1 : {0, 1, 3}) CHECK(fwtest::max_abs_diff(evolve_analytic_vacuum(rho, 0.0, m1), rho) < 1e-15);
  }
  SUBCASE("EPR closed forms at m1 = 0") {
    for (double th : {0.1, std::log(2.0), 1.7}) {
      const auto r = evolve_analytic_vacuum(epr, th, 0);
      CHECK(r(0, 3).real() == doctest::Approx(0.5 * std::exp(-2 * th)).epsilon(1e-14));
      CHECK(r(1, 1).real() == doctest::Approx(0.5 * (std::exp(-th) - std::exp(-2 * th))).epsilon(1e-14));
      CHECK(r(0, 0).real() == doctest::Approx(1 - std::exp(-th) + 0.5 * std::exp(-2 * th)).epsilon(1e-14));
    }
  }
  SUBCASE("rho14 exponent 2(1+m1)") {
    for (int m1 : {0, 1, 2})
      CHECK(evolve_analytic_vacuum(epr, 0.3, m1)(0, 3).real() ==
            doctest::Approx(0.5 * std::exp(-2 * (1 + m1) * 0.3)).epsilon(1e-14));
  }
  SUBCASE("agrees with the ODE for random states and three reservoir models") {
    std::mt19937_64 rng(21);
    for (int m1 : {0, 1, 2})
      for (const DampingModel& model : {DampingModel{Markovian{1.0}}, DampingModel{NonMarkovianOhmic{1.0, 1.0}},
                                        DampingModel{NonMarkovianOhmic{1.0, 0.1}}, DampingModel{KernelIntegral{2.0}}}) {
        const auto rho = fwtest::random_state(rng);
        const EvolutionParams p{{m1, m1}, 0.0};
        const auto grid = uniform_grid(1.0, 21);
        const auto tr = evolve_ode(rho, p, model, grid);
        for (std::size_t k = 0; k < grid.size(); ++k) {
          const auto an = evolve_analytic_vacuum(rho, accumulated_theta(model, grid[k]), p);
          CHECK(fwtest::max_abs_diff(an, tr.states[k]) < 1e-8);
        }
      }
  }
  SUBCASE("preconditions") {
    CHECK_THROWS_AS(evolve_analytic_vacuum(epr, 0.1, EvolutionParams{{0, 0}, 0.1}), DomainError);
    CHECK_THROWS_AS(evolve_analytic_vacuum(epr, 0.1, EvolutionParams{{0, 1}, 0.0}), DomainError);
    CHECK_THROWS_AS(evolve_analytic_vacuum(epr, 0.1, EvolutionParams{{0, 0}, 0.0, ClosureMode::PaperClosure}),
                    DomainError);
    CHECK_THROWS_AS(
        evolve_analytic_vacuum(epr, 0.1, EvolutionParams{{0, 0}, 0.0, ClosureMode::Leaky, EquationForm::Strict}),
        DomainError);
  }
}

TEST_CASE("trajectory invariants") {
  std::mt19937_64 rng(8);
  const auto grid = uniform_grid(4.0, 81);
  SUBCASE("unit trace at the origin window") {
    for (int k = 0; k < 5; ++k) {
      const auto tr = evolve_ode(fwtest::random_state(rng), EvolutionParams{{0, 0}, 0.0}, Markovian{1.0}, grid);
      for (const auto& r : tr.states) CHECK(std::abs(r.trace().real() - 1) <= 1e-9);
    }
  }
  SUBCASE("leaky trace never grows for n1 = m1 > 0") {
    for (int m1 : {1, 2}) {
      const auto tr = evolve_ode(fwtest::random_state(rng), EvolutionParams{{m1, m1}, 0.0}, Markovian{1.0}, grid);
      for (std::size_t k = 1; k < tr.states.size(); ++k)
        CHECK(tr.states[k].trace().real() <= tr.states[k - 1].trace().real() + 1e-15);
    }
  }
  SUBCASE("paper closure keeps unit trace") {
    const auto tr = evolve_ode(fwtest::random_state(rng), EvolutionParams{{2, 2}, 0.0, ClosureMode::PaperClosure},
                               Markovian{1.0}, grid);
    for (const auto& r : tr.states) CHECK(std::abs(r.trace().real() - 1) <= 1e-9);
  }
  SUBCASE("strict form: coherence decays at e^{-Theta} at m1 = 0") {
    const double s = fwtest::kInvSqrt2;
    const auto tr = evolve_ode(build_epr<double>(s, s),
                               EvolutionParams{{0, 0}, 0.0, ClosureMode::Leaky, EquationForm::Strict},
                               Markovian{1.0}, grid);
    for (std::size_t k = 0; k < grid.size(); ++k)
      CHECK(std::abs(tr.states[k](0, 3).real() - 0.5 * std::exp(-grid[k])) < 1e-8);
  }
}
