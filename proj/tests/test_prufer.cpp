#include <cmath>
#include <memory>

#include "doctest.h"
#include "hplap/error.hpp"
#include "hplap/exponents.hpp"
#include "hplap/prufer.hpp"
#include "hplap/specfun.hpp"

using namespace hplap;
using namespace hplap::prufer;
using exponents::beta_roots;
using exponents::gamma_roots;
using exponents::hardy_constants;

namespace {

ProblemParams make(double p, int N, double mu, double eps = 0.0) {
  ProblemParams pp;
  pp.p = p;
  pp.N = N;
  pp.mu = mu;
  pp.eps = eps;
  return pp;
}

const specfun::GenSine& sine(double p) {
  static std::unique_ptr<specfun::GenSine> s2, s3, s15;
  auto& slot = p == 2.0 ? s2 : p == 3.0 ? s3 : s15;
  if (!slot) slot = std::make_unique<specfun::GenSine>(specfun::GenSine::build(p));
  return *slot;
}

}  // namespace

TEST_CASE("angular field at psi = 0 is the potential root") {
  const auto r = prufer_rhs(make(2, 3, 0.125), sine(2), 1.0, 0.0);
  CHECK(r.dpsi_dt == doctest::Approx(std::sqrt(0.125)).epsilon(1e-14));
  CHECK(r.dlogrho_dt == doctest::Approx(0.0));
}

TEST_CASE("fixed points of the autonomous field") {
  const auto fp = fixed_points(make(2, 3, 0.25), sine(2));
  CHECK(fp.psi_plus == doctest::Approx(3 * M_PI / 4).epsilon(1e-10));
  CHECK(fp.psi_minus == doctest::Approx(3 * M_PI / 4).epsilon(1e-10));

  for (auto [p, N, mu] : {std::tuple{2.0, 3, 0.1}, {3.0, 2, 0.02}, {1.5, 3, 0.05}, {3.0, 2, 0.03}}) {
    const auto pp = make(p, N, mu);
    const auto f = fixed_points(pp, sine(p));
    CHECK(std::fabs(prufer_rhs(pp, sine(p), 1.0, f.psi_plus).dpsi_dt) <= 1e-10);
    CHECK(std::fabs(prufer_rhs(pp, sine(p), 1.0, f.psi_minus).dpsi_dt) <= 1e-10);
    CHECK(f.psi_plus < f.psi_minus);
    if (p > N) {
      CHECK(f.psi_minus < sine(p).pi_p() / 2);
    } else {
      CHECK(f.psi_plus > sine(p).pi_p() / 2);
    }
  }

  // Critical dimension: both roots in the first quadrant, zeros of the field.
  const auto pp = make(2, 2, 0.0, 0.1);
  const auto f = fixed_points(pp, sine(2));
  for (double t : {10.0, 100.0}) {
    // With mu = 0 the field is not autonomous in t; its scaled form vanishes.
    const auto r = prufer_rhs(pp, sine(2), t, f.psi_plus);
    CHECK(std::fabs(r.dpsi_dt * t) <= 1e-9);
  }
  CHECK(f.psi_plus < f.psi_minus);
  CHECK(f.psi_minus < M_PI / 2);
}

TEST_CASE("angle converges monotonically to the attracting root") {
  const auto pp = make(3, 2, 0.02);
  const auto sol = integrate_large_subsolution(pp, sine(3), 0.0, 40.0);
  const auto f = fixed_points(pp, sine(3));
  CHECK(std::fabs(sol.at(40.0).psi - f.psi_plus) <= 1e-3);
  double prev = -1.0;
  for (const auto& s : sol.states()) {
    CHECK(s.psi >= prev - 1e-14);
    CHECK(s.psi <= f.psi_plus + 1e-12);
    prev = s.psi;
  }
}

TEST_CASE("reconstructed profile solves the radial equation") {
  for (auto pp : {make(2, 3, 0.1), make(3, 2, 0.02), make(1.5, 3, 0.05), make(2, 3, 0.25, 0.05),
                  make(2, 2, 0.0, 0.1)}) {
    const double t0 = pp.eps > 0 ? 1.0 : 0.0;
    const auto sol = integrate_large_subsolution(pp, sine(pp.p), t0, t0 + 30.0);
    for (double t : {t0 + 2.0, t0 + 10.0, t0 + 25.0}) {
      CHECK(std::fabs(reconstruction_residual(sol, pp, sine(pp.p), t)) <= 1e-5);
    }
  }
}

TEST_CASE("closed forms for nonpositive potentials") {
  // p = 2, N = 3, mu = 0: u = 1 - R/r.
  const auto a = integrate_large_subsolution(make(2, 3, 0.0), sine(2), 0.0, 10.0);
  CHECK(a.kind() == LargeSubsolution::ClosedForm::HarmonicDecay);
  for (double t : {0.5, 2.0, 9.0}) {
    CHECK(std::exp(a.at(t).log_u) == doctest::Approx(1.0 - std::exp(-t)).epsilon(1e-13));
  }
  // p = N = 2, mu = 0: u = log(r/R).
  const auto b = integrate_large_subsolution(make(2, 2, 0.0), sine(2), 1.0, 10.0);
  CHECK(b.kind() == LargeSubsolution::ClosedForm::Logarithm);
  CHECK(std::exp(b.at(4.0).log_u) == doctest::Approx(3.0));
  // mu < 0: r^g+ - R^g+ on the growing branch.
  const auto pp = make(2, 3, -0.75);
  const auto c = integrate_large_subsolution(pp, sine(2), 0.0, 10.0);
  const double g = gamma_roots(2, 3, -0.75).plus;
  CHECK(g == doctest::Approx(0.5));
  CHECK(std::exp(c.at(3.0).log_u) == doctest::Approx(std::exp(1.5) - 1.0).epsilon(1e-13));
  // Not an exact solution: the constant shift leaves a residual of order (R/r)^g+.
  const double r3 = reconstruction_residual(c, pp, sine(2), 3.0);
  const double r9 = reconstruction_residual(c, pp, sine(2), 9.0);
  CHECK(std::fabs(r9) < std::fabs(r3));
}

TEST_CASE("asymptotic exponents") {
  SUBCASE("power growth") {
    const auto pp = make(3, 2, 0.02);
    const auto sol = integrate_large_subsolution(pp, sine(3), 0.0, 60.0);
    for (const auto& f : fit_asymptotics(sol, pp, AsymptoticCase::PowerGrowth, 30.0, 60.0)) {
      MESSAGE(f.quantity << " " << f.fitted_exponent << " vs " << f.predicted_exponent);
      CHECK(f.rel_err <= 1e-3);
    }
  }
  SUBCASE("critical Hardy constant") {
    const auto pp = make(2, 3, 0.25);
    const auto sol = integrate_large_subsolution(pp, sine(2), 0.0, 1e4);
    const auto f = fit_asymptotics(sol, pp, AsymptoticCase::CriticalHardy).front();
    MESSAGE(f.fitted_exponent << " vs " << f.predicted_exponent);
    CHECK(f.rel_err <= 2e-2);
  }
  SUBCASE("critical dimension") {
    const auto pp = make(2, 2, 0.0, 0.125);
    const auto sol = integrate_large_subsolution(pp, sine(2), 1.0, 1e4);
    const auto f = fit_asymptotics(sol, pp, AsymptoticCase::CriticalDimension).front();
    MESSAGE(f.fitted_exponent << " vs " << f.predicted_exponent);
    CHECK(f.rel_err <= 2e-2);
  }
  SUBCASE("logarithmic perturbation") {
    const auto pp = make(2, 3, 0.25, 0.05);
    const auto sol = integrate_large_subsolution(pp, sine(2), 1.0, 1e4);
    const auto f = fit_asymptotics(sol, pp, AsymptoticCase::LogPerturbed).front();
    MESSAGE(f.fitted_exponent << " vs " << f.predicted_exponent);
    CHECK(f.rel_err <= 2e-2);
  }
  SUBCASE("window outside the run") {
    const auto pp = make(3, 2, 0.02);
    const auto sol = integrate_large_subsolution(pp, sine(3), 0.0, 10.0);
    CHECK_THROWS_AS(fit_asymptotics(sol, pp, AsymptoticCase::PowerGrowth, 5.0, 20.0), Error);
  }
}

TEST_CASE("perturbation rates of the angle") {
  SUBCASE("exponential") {
    const auto pp = make(2, 3, 0.1);
    const auto sol = integrate_large_subsolution(pp, sine(2), 0.0, 30.0);
    const auto f = perturbation_rate(sol, pp, sine(2), PerturbationLaw::Exponential);
    MESSAGE(f.fitted << " vs " << f.predicted);
    CHECK(f.rel_err <= 1e-2);
  }
  SUBCASE("inverse logarithm") {
    const auto pp = make(2, 3, 0.25);
    const auto sol = integrate_large_subsolution(pp, sine(2), 0.0, 1e4);
    const auto f = perturbation_rate(sol, pp, sine(2), PerturbationLaw::InverseLog);
    MESSAGE(f.fitted << " vs " << f.predicted);
    CHECK(f.rel_err <= 5e-2);
  }
  SUBCASE("power of the logarithm") {
    const auto pp = make(2, 2, 0.0, 0.125);
    const auto sol = integrate_large_subsolution(pp, sine(2), 1.0, 1e4);
    const auto f = perturbation_rate(sol, pp, sine(2), PerturbationLaw::LogPower);
    MESSAGE(f.fitted << " vs " << f.predicted);
    CHECK(f.rel_err <= 5e-2);
  }
}

TEST_CASE("comparison angles sandwich the solution") {
  const auto pp = make(2, 3, 0.25, 0.05);
  const auto rep = eps_sandwich_run(pp, sine(2), 0.05, 1e4);
  MESSAGE("t_delta " << rep.t_delta << " margins " << rep.min_lower_margin << " "
                     << rep.min_upper_margin << " fit " << rep.fit.fitted_exponent);
  CHECK(rep.holds);
  CHECK(rep.fit.rel_err <= 2e-2);
  CHECK_THROWS_AS(eps_sandwich_run(pp, sine(2), 0.9, 1e4), Error);

  const auto p3 = make(3, 2, hardy_constants(3, 2).C_H, hardy_constants(3, 2).C_star / 2);
  const auto r3 = eps_sandwich_run(p3, sine(3), 0.05, 1e4);
  MESSAGE("p=3 t_delta " << r3.t_delta << " margins " << r3.min_lower_margin << " "
                         << r3.min_upper_margin << " fit " << r3.fit.fitted_exponent << " vs "
                         << r3.beta_plus);
  CHECK(r3.holds);
}

TEST_CASE("power growth on a short window") {
  for (auto pp : {make(3, 2, 0.02), make(2, 3, 0.1)}) {
    const auto sol = integrate_large_subsolution(pp, sine(pp.p), 0.0, 25.0);
    for (const auto& f : fit_asymptotics(sol, pp, AsymptoticCase::PowerGrowth, 12.0, 25.0)) {
      MESSAGE(f.quantity << " " << f.fitted_exponent << " vs " << f.predicted_exponent);
      CHECK(f.rel_err <= 2e-2);
    }
  }
}

TEST_CASE("invalid inputs") {
  CHECK_THROWS_AS(prufer_rhs(make(2, 3, -0.1), sine(2), 1.0, 0.0), Error);
  CHECK_THROWS_AS(fixed_points(make(2, 3, 0.3), sine(2)), Error);
  CHECK_THROWS_AS(integrate_large_subsolution(make(2, 3, 0.1), sine(3), 0.0, 1.0), Error);
}
