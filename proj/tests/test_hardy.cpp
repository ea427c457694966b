#include <cmath>
#include <vector>

#include "doctest.h"
#include "hplap/error.hpp"
#include "hplap/exponents.hpp"
#include "hplap/hardy.hpp"

using namespace hplap;
using namespace hplap::hardy;
using exponents::gamma_roots;
using exponents::gamma_star;
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

}  // namespace

TEST_CASE("energy form: zero, homogeneity, hand-integrated hat") {
  auto v = RadialTestFunction::hat(2.0, 50.0);
  const auto pp = make(2.5, 3, 0.2, 0.3);
  const auto f = energy_form(v, pp);
  CHECK(f.total == doctest::Approx(f.dirichlet - f.hardy_term - f.log_term).epsilon(1e-15));
  auto w = v;
  for (auto& x : w.values) x *= 3.0;
  const auto g = energy_form(w, pp);
  const double k = std::pow(3.0, 2.5);
  CHECK(g.dirichlet == doctest::Approx(k * f.dirichlet).epsilon(1e-13));
  CHECK(g.hardy_term == doctest::Approx(k * f.hardy_term).epsilon(1e-13));
  CHECK(g.log_term == doctest::Approx(k * f.log_term).epsilon(1e-13));

  auto z = v;
  for (auto& x : z.values) x = 0.0;
  const auto e0 = energy_form(z, pp);
  CHECK(e0.total == 0.0);
  CHECK(e0.dirichlet == 0.0);

  // Hat on [1, e] with apex at m, p = 2, N = 3.
  const double m = 0.5 * (1.0 + std::exp(1.0));
  RadialTestFunction hat{{1.0, m, std::exp(1.0)}, {0.0, 1.0, 0.0}};
  const double s1 = 1.0 / (m - 1.0), s2 = 1.0 / (std::exp(1.0) - m);
  const double d = s1 * s1 * (m * m * m - 1.0) / 3.0 + s2 * s2 * (std::exp(3.0) - m * m * m) / 3.0;
  const auto fh = energy_form(hat, make(2, 3, 1.0));
  CHECK(fh.dirichlet == doctest::Approx(d).epsilon(1e-14));
  // int v^2 r^0 dr of a hat = (b - a)/3.
  CHECK(fh.hardy_term == doctest::Approx((std::exp(1.0) - 1.0) / 3.0).epsilon(1e-12));

  CHECK_THROWS_AS(energy_form(hat, make(2, 3, 0.0, 0.1)), Error);
  RadialTestFunction bad{{1.0, 2.0, 3.0}, {0.0, 1.0, 1.0}};
  CHECK_THROWS_AS(energy_form(bad, make(2, 3, 0.0)), Error);
}

TEST_CASE("form is monotone in mu and eps") {
  const auto v = random_test_function(3.0, 40.0, 30, 7);
  double prev = energy_form(v, make(2, 3, 0.0, 0.0)).total;
  for (double mu : {0.1, 0.2, 0.3}) {
    const double e = energy_form(v, make(2, 3, mu, 0.0)).total;
    CHECK(e < prev);
    prev = e;
  }
  CHECK(energy_form(v, make(2, 3, 0.3, 0.1)).total < prev);
}

TEST_CASE("discrete Rayleigh quotient") {
  const double ch = hardy_constants(2, 3).C_H;
  const auto a = rayleigh_min(2, 3, 1e-3, 1e4, 512);
  MESSAGE("quotient " << a.quotient << " in " << a.iterations << " iterations");
  CHECK(a.quotient >= ch);
  CHECK(a.quotient <= 0.30);
  // Continuum value on the annulus, an upper bound's limit.
  const double L = std::log(1e7);
  CHECK(a.quotient == doctest::Approx(ch + M_PI * M_PI / (L * L)).epsilon(2e-3));
  CHECK(rayleigh_quotient(a.minimizer, 2, 3) == doctest::Approx(a.quotient).epsilon(1e-10));

  const auto b = rayleigh_min(2, 3, 1e-3, 1e2, 512);
  CHECK(b.quotient >= a.quotient);

  // Any explicit test function bounds the minimum from above.
  const auto hat = RadialTestFunction::hat(1e-3, 1e4, 512);
  CHECK(rayleigh_quotient(hat, 2, 3) >= a.quotient);

  // p = N: the constant degenerates to zero.
  const auto c2 = rayleigh_min(2, 2, 1.0, 1e2, 256);
  const auto c4 = rayleigh_min(2, 2, 1.0, 1e12, 256);
  CHECK(c4.quotient < c2.quotient);
  CHECK(c4.quotient < 0.05);

  for (double p : {1.5, 3.0}) {
    const auto r = rayleigh_min(p, 3, 1e-3, 1e4, 256);
    MESSAGE("p=" << p << " quotient " << r.quotient << " C_H " << hardy_constants(p, 3).C_H
                 << " its " << r.iterations);
    CHECK(r.quotient >= hardy_constants(p, 3).C_H);
  }
  CHECK_THROWS_AS(rayleigh_min(2, 3, 1.0, 10.0, 8), Error);
}

TEST_CASE("improved inequality on the certified exterior region") {
  for (auto [p, N] : {std::pair{2.0, 3}, {3.0, 2}, {1.5, 3}, {2.0, 2}}) {
    const auto rad = improved_hardy_radius(p, N);
    MESSAGE("p=" << p << " N=" << N << " log rho " << rad.log_rho);
    const double rho = std::exp(rad.log_rho);
    const auto m = improved_hardy_check(p, N, rho, RadialTestFunction::hat(rho * rho, std::pow(rho, 4), 200));
    CHECK(m.margin >= -1e-10 * m.scale);
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
      const auto v = random_test_function(rho, rho * 50.0, 40, seed);
      const auto r = improved_hardy_check(p, N, rho, v);
      CHECK(r.margin >= -1e-10 * r.scale);
    }
  }
  CHECK_THROWS_AS(improved_hardy_check(2, 3, 10.0, RadialTestFunction::hat(2.0, 20.0)), Error);
}

TEST_CASE("cutoff families at the critical constants stay bounded") {
  const double p = 2;
  const int N = 3;
  const auto hc = hardy_constants(p, N);
  const barriers::RadialProfile phi{gamma_star(p, N), 0.5, -0.25, 1.0};
  std::vector<double> es;
  for (double T : {10.0, 100.0, 1e3, 1e4}) {
    es.push_back(family_energy(phi, {3.0, T, 1.0}, make(p, N, hc.C_H, hc.C_star)));
    MESSAGE("T=" << T << " E=" << es.back());
    CHECK(es.back() >= 0.0);
  }
  CHECK(es.back() < 10.0 * es.front() + 10.0);
}

TEST_CASE("family energy agrees with the grid form") {
  const double p = 2;
  const int N = 3;
  const auto pp = make(p, N, hardy_constants(p, N).C_H + 0.1, 0.2);
  const barriers::RadialProfile phi{gamma_star(p, N), 0.5, -0.25, 1.0};
  const CutoffFamily fam{3.0, 6.0, 1.0};
  const double exact = family_energy(phi, fam, pp);
  const double a = 1.5 * std::exp(3.0), b = std::exp(12.0);
  auto grid = RadialTestFunction::sample(
      [&](double r) {
        const double t = std::log(r);
        return std::exp(barriers::log_profile(phi, t).value) * cutoff(fam, t).value;
      },
      a, b, 20000);
  const double approx = energy_form(grid, pp).total;
  MESSAGE(exact << " vs grid " << approx);
  CHECK(approx == doctest::Approx(exact).epsilon(1e-3));
}

TEST_CASE("sharpness families diverge to minus infinity") {
  const std::vector<double> logR{std::log(1e3), std::log(1e6), std::log(1e12)};
  for (auto [p, N] : {std::pair{2.0, 3}, {3.0, 2}, {1.5, 3}}) {
    const auto mu = sharpness_family(p, N, SharpnessCase::MuAboveCH, logR);
    for (const auto& m : mu.members) MESSAGE("mu p=" << p << " " << m.log_R << " " << m.energy);
    CHECK(mu.strictly_decreasing);
    // Plateau and outer ramp together give slope -(mu - C_H)(1 + 1/(alpha p + 1)) in log R.
    const double ap = mu.family.alpha * p;
    const double slope = (mu.members[2].energy - mu.members[1].energy) / (logR[2] - logR[1]);
    CHECK(slope == doctest::Approx(-0.1 * (1.0 + 1.0 / (ap + 1.0))).epsilon(1e-2));

    const auto ep = sharpness_family(p, N, SharpnessCase::EpsAboveCstar, logR);
    for (const auto& m : ep.members) MESSAGE("eps p=" << p << " " << m.log_R << " " << m.energy);
    CHECK(ep.strictly_decreasing);
  }
  // Growth is only (log log R)^{tau p + 1}: reaching negative values needs
  // log R far beyond anything representable as a radius.
  const auto ep = sharpness_family(2, 3, SharpnessCase::EpsAboveCstar,
                                   {1e2, 1e8, 1e32, 1e128, 1e300}, 0.1, -0.01);
  for (const auto& m : ep.members) MESSAGE("eps tau=-0.01 " << m.log_R << " " << m.energy);
  CHECK(ep.strictly_decreasing);
  CHECK(ep.members.back().energy < 0.0);
  CHECK(ep.growth_exponent == doctest::Approx(0.98));
  CHECK(sharpness_family(2, 3, SharpnessCase::EpsAboveCstar, {10.0}).growth_exponent ==
        doctest::Approx(0.5));
  CHECK_THROWS_AS(sharpness_family(2, 3, SharpnessCase::EpsAboveCstar, logR, 0.1, -0.7), Error);
}

TEST_CASE("Picone identity") {
  const double p = 2;
  const int N = 3;
  const auto g = gamma_roots(p, N, 0.1);
  const barriers::RadialProfile phi{g.minus, 0, 0, 1};
  const auto rep = picone_check(RadialTestFunction::hat(1.5, 30.0, 50), phi, p, 2000);
  CHECK(rep.max_violation <= 1e-9);
  CHECK(rep.min_L >= 0.0);

  // w = c phi: L vanishes identically.
  for (double pp : {1.5, 2.0, 3.5}) {
    for (double r : {3.0, 4.0, 20.0}) {
      const barriers::RadialProfile f{-0.4, 0.3, 0, 2.0};
      const auto lg = barriers::log_profile(f, std::log(r));
      const double v = std::exp(lg.value);
      const numerics::Dual2 ph{v, v * lg.d1 / r, 0.0};
      const numerics::Dual2 w{3.0 * ph.value, 3.0 * ph.d1, 0.0};
      const auto pt = picone_at(w, ph, pp);
      CHECK(std::fabs(pt.L) <= 1e-14 * pt.scale);
      CHECK(std::fabs(pt.R) <= 1e-14 * pt.scale);
    }
  }

  // p = 2: complete square.
  const numerics::Dual2 w{0.7, -1.3, 0.0}, ph{2.0, 0.4, 0.0};
  const auto pt = picone_at(w, ph, 2.0);
  const double sq = -1.3 - 0.7 / 2.0 * 0.4;
  CHECK(pt.L == doctest::Approx(sq * sq).epsilon(1e-14));

  // Random pairs.
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const double pp = 1.2 + 0.04 * seed;
    const auto wv = random_test_function(3.0, 40.0, 12, seed);
    const barriers::RadialProfile f{-1.0 + 0.02 * seed, 0.5, 0.0, 1.0};
    const auto r = picone_check(wv, f, pp, 240);
    CHECK(r.max_violation <= 1e-9);
  }
}

TEST_CASE("nonexistence witnesses") {
  const auto hc = hardy_constants(2, 3);
  const auto a = nonexistence_witness(2, 3, hc.C_H + 0.05, 0.0);
  REQUIRE(a.has_value());
  MESSAGE("mu witness log R " << a->family.log_R << " E " << a->energy << " grid "
                              << a->discretized_energy);
  CHECK(a->energy < 0.0);
  REQUIRE(a->discretized.has_value());
  CHECK(a->discretized_energy < 0.0);

  const auto b = nonexistence_witness(2, 3, hc.C_H, hc.C_star + 0.05);
  REQUIRE(b.has_value());
  MESSAGE("eps witness log R " << b->family.log_R << " tau " << b->profile.tau << " E "
                               << b->energy);
  CHECK(b->energy < 0.0);
  CHECK(b->family_case == SharpnessCase::EpsAboveCstar);

  CHECK_FALSE(nonexistence_witness(2, 3, hc.C_H - 0.05, 0.0).has_value());
  CHECK_FALSE(nonexistence_witness(2, 3, hc.C_H, hc.C_star - 0.05).has_value());
}
