#include <cmath>
#include <random>

#include "doctest.h"
#include "hplap/error.hpp"
#include "hplap/exponents.hpp"

using namespace hplap;
using namespace hplap::exponents;

TEST_CASE("hardy constants") {
  const auto c = hardy_constants(2.0, 3);
  CHECK(c.C_H == doctest::Approx(0.25));
  CHECK(c.C_star == doctest::Approx(0.25));
  CHECK(c.m_star == 2);
  const auto d = hardy_constants(3.0, 3);
  CHECK(d.C_H == 0.0);
  CHECK(d.C_star == doctest::Approx(8.0 / 27.0));
  CHECK(d.m_star == 3);
  CHECK(hardy_constants(2.0, 2).C_H == 0.0);
}

TEST_CASE("gamma roots on the worked cases") {
  auto r = gamma_roots(2.0, 3, 0.0);
  CHECK(std::fabs(r.minus + 1.0) <= 1e-13);
  CHECK(std::fabs(r.plus) <= 1e-13);
  r = gamma_roots(2.0, 3, 0.25);
  CHECK(r.minus == -0.5);
  CHECK(r.plus == -0.5);
  r = gamma_roots(3.0, 2, 0.0);
  CHECK(std::fabs(r.minus) <= 1e-13);
  CHECK(std::fabs(r.plus - 0.5) <= 1e-13);
  CHECK_THROWS_AS(gamma_roots(2.0, 3, 0.3), Error);
}

TEST_CASE("p = 2 roots agree with the quadratic formula") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> un(2, 8);
  std::uniform_real_distribution<double> uu(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const int N = un(rng);
    const double ch = hardy_constants(2.0, N).C_H;
    const double mu = ch - (ch + 3.0) * uu(rng);
    const auto r = gamma_roots(2.0, N, mu);
    // gamma^2 + (N-2) gamma + mu = 0
    const double b = N - 2.0;
    const double disc = std::sqrt(b * b - 4.0 * mu);
    CHECK(std::fabs(r.minus - (-b - disc) / 2.0) <= 1e-12);
    CHECK(std::fabs(r.plus - (-b + disc) / 2.0) <= 1e-12);
  }
}

TEST_CASE("gamma residuals and ordering over a parameter sweep") {
  for (double p : {1.2, 1.5, 2.0, 2.5, 3.0, 5.0}) {
    for (int N : {2, 3, 5}) {
      const double ch = hardy_constants(p, N).C_H;
      const double gs = gamma_star(p, N);
      double prev_minus = gs, prev_plus = gs;
      for (double drop : {0.0, 1e-6, 1e-3, 0.1, 1.0, 5.0}) {
        const double mu = ch - drop;
        const auto r = gamma_roots(p, N, mu);
        CHECK(std::fabs(gamma_map(p, N, r.minus) - mu) <= 1e-12 * std::max(1.0, std::fabs(mu)));
        CHECK(std::fabs(gamma_map(p, N, r.plus) - mu) <= 1e-12 * std::max(1.0, std::fabs(mu)));
        CHECK(r.minus <= gs);
        CHECK(r.plus >= gs);
        // Roots spread apart as mu decreases.
        CHECK(r.minus <= prev_minus + 1e-15);
        CHECK(r.plus >= prev_plus - 1e-15);
        prev_minus = r.minus;
        prev_plus = r.plus;
      }
    }
  }
}

TEST_CASE("beta roots") {
  auto b = beta_roots(3.0, 2, 0.0);
  CHECK(b.minus == 0.0);
  CHECK(std::fabs(b.plus - 2.0 / 3.0) <= 1e-15);
  const double cs = hardy_constants(3.0, 2).C_star;
  b = beta_roots(3.0, 2, cs);
  CHECK(b.minus == doctest::Approx(1.0 / 3.0));
  CHECK(b.plus == doctest::Approx(1.0 / 3.0));
  b = beta_roots(2.0, 2, 0.0);
  CHECK(b.minus == 0.0);
  CHECK(b.plus == 1.0);
  CHECK_THROWS_AS(beta_roots(3.0, 2, 2.0 * cs), Error);
  CHECK_THROWS_AS(beta_roots(3.0, 2, -0.1), Error);
  for (double p : {1.5, 2.0, 3.0, 4.0}) {
    for (int N : {2, 3, 4}) {
      const double c = hardy_constants(p, N).C_star;
      for (double f : {0.1, 0.5, 0.9}) {
        const auto r = beta_roots(p, N, f * c);
        CHECK(std::fabs(beta_map(p, N, r.minus) - f * c) <= 1e-12);
        CHECK(std::fabs(beta_map(p, N, r.plus) - f * c) <= 1e-12);
        CHECK(r.minus < r.plus);
      }
    }
  }
}

TEST_CASE("critical line") {
  CHECK(critical_line(2.0, 3, 0.1, 1.0) == doctest::Approx(2.0));
  CHECK(std::fabs(critical_line(2.0, 3, 0.0, 3.0)) <= 1e-12);
  CHECK(critical_line(2.0, 3, 0.25, 5.0) == doctest::Approx(-0.5 * 4.0 + 2.0));
}

TEST_CASE("classifier worked examples") {
  ProblemParams pp{2.0, 3, 0.0, 0.0, 3.0, 0.0, 1.0};
  CHECK(classify(pp).verdict == Verdict::Nonexistence);
  pp.q = 3.01;
  CHECK(classify(pp).verdict == Verdict::Existence);
  pp.mu = 0.25;
  pp.q = -1.0;
  pp.sigma = critical_line(2.0, 3, 0.25, -1.0);
  CHECK(classify(pp).verdict == Verdict::Nonexistence);
  pp.q = -1.01;
  pp.sigma = critical_line(2.0, 3, 0.25, -1.01);
  CHECK(classify(pp).verdict == Verdict::Existence);
  pp.mu = 0.3;
  CHECK(classify(pp).verdict == Verdict::NonexistenceAllQ);
  pp = {2.0, 3, 0.1, 0.0, 1.0, 2.0, 1.0};
  CHECK(classify(pp).verdict == Verdict::ExcludedPoint);
}

TEST_CASE("classifier does not depend on the coupling C") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> uq(-3.0, 6.0), us(-2.0, 4.0), uc(0.01, 100.0);
  for (int i = 0; i < 200; ++i) {
    ProblemParams a{2.5, 3, 0.0, 0.0, uq(rng), us(rng), 1.0};
    ProblemParams b = a;
    b.C = uc(rng);
    CHECK(classify(a).verdict == classify(b).verdict);
  }
}

TEST_CASE("nonlinear exponent") {
  CHECK(nonlinear_exponent({2.0, 3, 0, 0, 0.0, 0.0, 1}) == doctest::Approx(2.0));
  CHECK(nonlinear_exponent({3.0, 3, 0, 0, 0.0, 1.0, 1}) == doctest::Approx(1.0));
  CHECK(nonlinear_exponent({2.0, 3, 0, 0, 5.0, 2.0, 1}) == 0.0);
  CHECK_THROWS_AS(nonlinear_exponent({2.0, 3, 0, 0, 1.0, 0.0, 1}), Error);
}

TEST_CASE("region polyline has the kink and the right slopes") {
  const double p = 2.0, mu = 0.1;
  const auto poly = region_polyline(p, 3, mu, -3.0, 5.0, 0.25);
  bool has_kink = false;
  for (const auto& v : poly) has_kink |= (v.q == p - 1.0 && v.lambda_star == p);
  CHECK(has_kink);
  const auto g = gamma_roots(p, 3, mu);
  for (std::size_t i = 0; i + 1 < poly.size(); ++i) {
    const double slope = (poly[i + 1].lambda_star - poly[i].lambda_star) / (poly[i + 1].q - poly[i].q);
    const double expect = poly[i].q >= p - 1.0 ? g.minus : g.plus;
    CHECK(std::fabs(slope - expect) <= 1e-10);
  }
  const auto flat = region_polyline(p, 3, 0.25, -1.0, 2.0, 0.5);
  for (std::size_t i = 0; i + 1 < flat.size(); ++i) {
    const double slope = (flat[i + 1].lambda_star - flat[i].lambda_star) / (flat[i + 1].q - flat[i].q);
    CHECK(std::fabs(slope + 0.5) <= 1e-10);
  }
}
