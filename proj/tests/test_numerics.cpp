#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "hplap/error.hpp"
#include "hplap/numerics/dual2.hpp"
#include "hplap/numerics/ode.hpp"
#include "hplap/numerics/quadrature.hpp"
#include "hplap/numerics/roots.hpp"

using namespace hplap;
using namespace hplap::numerics;

TEST_CASE("brent finds sqrt 2") {
  const ScalarFn f = [](double x) { return x * x - 2.0; };
  const double r = find_root(f, make_bracket(f, 0.0, 2.0), 1e-15);
  CHECK(std::fabs(r - std::numbers::sqrt2) <= 1e-14);
}

TEST_CASE("brent rejects a non-bracket") {
  const ScalarFn f = [](double x) { return x * x + 1.0; };
  CHECK_THROWS_AS(make_bracket(f, -1.0, 1.0), Error);
  try {
    make_bracket(f, -1.0, 1.0);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::InvalidBracket);
  }
}

TEST_CASE("brent property: returned root lies in the bracket with small residual") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> coef(-3.0, 3.0);
  for (int trial = 0; trial < 200; ++trial) {
    const double c = coef(rng);
    const ScalarFn f = [c](double x) { return std::tanh(x - c) + 0.1 * (x - c); };
    const auto b = make_bracket(f, -10.0, 10.0);
    const double r = find_root(f, b, 1e-14);
    CHECK(r >= -10.0);
    CHECK(r <= 10.0);
    CHECK(std::fabs(f(r)) <= 1e-12);
  }
}

TEST_CASE("expand_bracket grows until a sign change") {
  const ScalarFn f = [](double x) { return x - 37.0; };
  const auto b = expand_bracket(f, 0.0, 1.0);
  CHECK(b.f_lo * b.f_hi <= 0.0);
}

TEST_CASE("dormand-prince: exponential growth and Riccati decay") {
  OdeProblem grow;
  grow.rhs = [](double, std::span<const double> y, std::span<double> d) { d[0] = y[0]; };
  grow.t0 = 0.0;
  grow.t_end = 1.0;
  grow.y0 = {1.0};
  const auto tg = integrate_ode(grow);
  CHECK(std::fabs(tg.y(tg.size() - 1, 0) - std::numbers::e) <= 1e-9);

  OdeProblem ric;
  ric.rhs = [](double, std::span<const double> y, std::span<double> d) { d[0] = -y[0] * y[0]; };
  ric.t0 = 0.0;
  ric.t_end = 9.0;
  ric.y0 = {1.0};
  const auto tr = integrate_ode(ric);
  CHECK(std::fabs(tr.y(tr.size() - 1, 0) - 0.1) <= 1e-9);
}

TEST_CASE("dormand-prince agrees with fine RK4 on a nonlinear oscillator") {
  OdeProblem prob;
  prob.rhs = [](double t, std::span<const double> y, std::span<double> d) {
    d[0] = y[1];
    d[1] = -std::sin(y[0]) + 0.1 * std::cos(t);
  };
  prob.t0 = 0.0;
  prob.t_end = 10.0;
  prob.y0 = {1.0, 0.0};
  const auto dp = integrate_ode(prob);
  const auto rk = integrate_rk4(prob, 20000);
  for (std::size_t c = 0; c < 2; ++c) {
    CHECK(std::fabs(dp.y(dp.size() - 1, c) - rk.y(rk.size() - 1, c)) <= 1e-8);
  }
  // Dense output between steps matches RK4 at its grid points.
  for (std::size_t i = 1000; i < rk.size(); i += 3791) {
    CHECK(std::fabs(dp.interpolate(rk.t(i), 0) - rk.y(i, 0)) <= 1e-6);
  }
}

TEST_CASE("dormand-prince reports step underflow on finite-time blow-up") {
  OdeProblem prob;
  prob.rhs = [](double, std::span<const double> y, std::span<double> d) { d[0] = y[0] * y[0]; };
  prob.t0 = 0.0;
  prob.t_end = 2.0;
  prob.y0 = {1.0};
  try {
    integrate_ode(prob);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK((e.code() == Errc::StepUnderflow || e.code() == Errc::NotConverged));
  }
}

TEST_CASE("gauss-kronrod integrates sin over [0, pi]") {
  const double v = quad_adaptive([](double x) { return std::sin(x); }, 0.0, std::numbers::pi, 1e-13);
  CHECK(std::fabs(v - 2.0) <= 1e-12);
}

TEST_CASE("gauss-kronrod handles an integrable endpoint singularity") {
  const double v = quad_adaptive([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, 1e-10);
  CHECK(std::fabs(v - 2.0) <= 1e-8);
}

TEST_CASE("the raw generalized-sine integrand, truncated near both ends, gives pi_3 / 2") {
  const double p = 3.0;
  const double a = std::cbrt(2.0);
  const double half_pi3 = std::cbrt(2.0) * std::numbers::pi / (3.0 * std::sin(std::numbers::pi / 3.0));
  QuadOptions opt;
  opt.abs_tol = 1e-11;
  opt.max_intervals = 20000;
  const auto r = integrate_gk(
      [&](double t) { return 1.0 / std::pow(1.0 - std::pow(t, p) / (p - 1.0), 1.0 / p); },
      a * 1e-9, a * (1.0 - 1e-9), opt);
  // The truncated upper tail is worth about (1e-9)^(2/3) times an O(1) constant.
  CHECK(std::fabs(r.value - half_pi3) <= 1e-5);
}

TEST_CASE("quadrature is additive over a split interval") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const double a = -2.0 + u(rng), b = 1.0 + 2.0 * u(rng);
    const double c = a + (b - a) * u(rng);
    const ScalarFn f = [](double x) { return std::exp(-x * x) * std::cos(3.0 * x); };
    const double whole = quad_adaptive(f, a, b, 1e-13);
    const double split = quad_adaptive(f, a, c, 1e-13) + quad_adaptive(f, c, b, 1e-13);
    CHECK(std::fabs(whole - split) <= 1e-11);
  }
}

TEST_CASE("gauss-kronrod gives up with MaxRefinementExceeded") {
  QuadOptions opt;
  opt.abs_tol = 1e-15;
  opt.max_intervals = 5;
  CHECK_THROWS_AS(integrate_gk([](double x) { return std::sin(1.0 / x); }, 1e-6, 1.0, opt), Error);
}

TEST_CASE("gauss-legendre integrates polynomials exactly") {
  const auto rule = gauss_legendre(6);
  double s = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) s += rule.weights[i] * std::pow(rule.nodes[i], 10);
  CHECK(std::fabs(s - 2.0 / 11.0) <= 1e-14);
}

TEST_CASE("dual2 derivatives of x^3 and e^(2x)") {
  const auto c = dual2_eval([](Dual2 x) { return x * x * x; }, 2.0);
  CHECK(c.value == doctest::Approx(8.0));
  CHECK(c.d1 == doctest::Approx(12.0));
  CHECK(c.d2 == doctest::Approx(12.0));
  const auto e = dual2_eval([](Dual2 x) { return exp(2.0 * x); }, 0.5);
  CHECK(e.d2 == doctest::Approx(4.0 * std::exp(1.0)).epsilon(1e-14));
}

TEST_CASE("dual2 abs_pow on the negative axis and at the kink") {
  const auto v = dual2_eval([](Dual2 x) { return abs_pow(x, 1.5); }, -4.0);
  CHECK(v.value == doctest::Approx(8.0));
  CHECK(v.d1 == doctest::Approx(-3.0));
  CHECK(v.d2 == doctest::Approx(0.375));
  const auto z = dual2_eval([](Dual2 x) { return abs_pow(x, 1.5); }, 0.0);
  CHECK(z.nonsmooth);
  CHECK(z.d2 == 0.0);
}

TEST_CASE("dual2 log of a nonpositive value is a domain error") {
  CHECK_THROWS_AS(dual2_eval([](Dual2 x) { return log(x); }, -1.0), Error);
}

TEST_CASE("dual2 second derivatives match central differences") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.5, 3.0);
  auto g = [](auto x) { return log(x) * exp(0.3 * x) + pow(x, 2.5) / (1.0 + x); };
  auto gd = [](double x) { return std::log(x) * std::exp(0.3 * x) + std::pow(x, 2.5) / (1.0 + x); };
  for (int i = 0; i < 100; ++i) {
    const double x = u(rng);
    const auto d = dual2_eval([&](Dual2 y) { return g(y); }, x);
    const double h = 1e-4;
    const double fd2 = (gd(x + h) - 2 * gd(x) + gd(x - h)) / (h * h);
    CHECK(std::fabs(d.d2 - fd2) <= 1e-5 * std::max(1.0, std::fabs(fd2)));
  }
}
