#include "hplap/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "hplap/error.hpp"
#include "hplap/numerics/quadrature.hpp"
#include "hplap/numerics/roots.hpp"

namespace hplap::specfun {

namespace {

void require_p(double p) {
  if (!(p > 1.0) || !std::isfinite(p)) {
    throw Error(Errc::DomainError, "generalized sine needs p > 1, got " + std::to_string(p));
  }
}

// 1 - (1 - x)^p for x in [0, 1], accurate for small x.
double one_minus_pow(double x, double p) {
  if (x >= 1.0) return 1.0;
  return -std::expm1(p * std::log1p(-x));
}

// Integrand of psi(s) = pi_p/2 - a * int_0^s g. Regular on [0, 1].
double tail_integrand(double s, double p, double q) {
  if (s <= 0.0) return q * std::pow(p, -1.0 / p);
  const double sq = std::pow(s, q);
  return q * std::pow(s, q - 1.0) / std::pow(one_minus_pow(sq, p), 1.0 / p);
}

// Monotone-limited cubic Hermite on one cell.
double hermite(double x0, double x1, double y0, double y1, double m0, double m1, double x) {
  const double h = x1 - x0;
  const double t = (x - x0) / h;
  const double t2 = t * t;
  const double t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + t) * h * m0 + (-2 * t3 + 3 * t2) * y1 +
         (t3 - t2) * h * m1;
}

}  // namespace

double pi_p(double p) {
  require_p(p);
  return 2.0 * std::pow(p - 1.0, 1.0 / p) * std::numbers::pi / (p * std::sin(std::numbers::pi / p));
}

double half_pi_p_by_quadrature(double p, double tol) {
  require_p(p);
  const double q = p / (p - 1.0);
  const double a = std::pow(p - 1.0, 1.0 / p);
  numerics::QuadOptions opt;
  opt.abs_tol = tol;
  opt.max_intervals = 20000;
  const auto r = numerics::integrate_gk([&](double s) { return tail_integrand(s, p, q); }, 0.0,
                                        1.0, opt);
  return a * r.value;
}

GenSine GenSine::build(double p, double tol, std::size_t nodes) {
  require_p(p);
  if (nodes < 16) throw Error(Errc::BuildError, "generalized sine table needs >= 16 nodes");
  GenSine gs;
  gs.p_ = p;
  gs.q_ = p / (p - 1.0);
  gs.amp_ = std::pow(p - 1.0, 1.0 / p);
  gs.half_ = 0.5 * specfun::pi_p(p);

  const double q = gs.q_;
  auto g = [&](double s) { return tail_integrand(s, p, q); };

  // Nodes graded towards s = 0 (the maximum of S_p), where psi(s) is least smooth.
  std::vector<double> s_nodes(nodes + 1);
  for (std::size_t j = 0; j <= nodes; ++j) {
    const double u = static_cast<double>(j) / static_cast<double>(nodes);
    s_nodes[j] = u * u;
  }
  std::vector<double> cum(nodes + 1, 0.0);
  numerics::QuadOptions opt;
  opt.max_intervals = 200;
  try {
    for (std::size_t j = 1; j <= nodes; ++j) {
      opt.abs_tol = tol * (s_nodes[j] - s_nodes[j - 1]);
      cum[j] = cum[j - 1] + numerics::integrate_gk(g, s_nodes[j - 1], s_nodes[j], opt).value;
    }
  } catch (const Error& e) {
    throw Error(Errc::BuildError, std::string("quarter-wave quadrature failed: ") + e.what());
  }
  gs.tab_half_ = gs.amp_ * cum[nodes];
  if (std::fabs(gs.tab_half_ - gs.half_) > 1e-9) {
    throw Error(Errc::BuildError, "tabulated half period " + std::to_string(gs.tab_half_) +
                                      " disagrees with closed form " + std::to_string(gs.half_));
  }

  // Rescale so that psi(s=0) = pi_p/2 and psi(s=1) = 0 exactly.
  const std::size_t n = nodes + 1;
  gs.psi_.resize(n);
  gs.sv_.resize(n);
  gs.dsdpsi_.resize(n);
  const double scale = gs.half_ / cum[nodes];
  for (std::size_t j = 0; j <= nodes; ++j) {
    const std::size_t k = nodes - j;  // increasing psi
    gs.psi_[k] = gs.half_ - scale * cum[j];
    gs.sv_[k] = s_nodes[j];
    gs.dsdpsi_[k] = -1.0 / (scale * g(s_nodes[j]));
  }
  gs.psi_.front() = 0.0;
  gs.psi_.back() = gs.half_;
  return gs;
}

SineValue GenSine::quarter(double psi) const {
  psi = std::clamp(psi, 0.0, half_);
  const auto it = std::upper_bound(psi_.begin(), psi_.end(), psi);
  std::size_t i = (it == psi_.begin()) ? 0 : static_cast<std::size_t>(it - psi_.begin()) - 1;
  if (i + 1 >= psi_.size()) i = psi_.size() - 2;
  double s = hermite(psi_[i], psi_[i + 1], sv_[i], sv_[i + 1], dsdpsi_[i], dsdpsi_[i + 1], psi);
  s = std::clamp(s, 0.0, 1.0);
  const double sq = std::pow(s, q_);
  const double value = amp_ * (1.0 - sq);
  const double sprime = std::pow(one_minus_pow(sq, p_), 1.0 / p_);
  return {value, sprime};
}

SineValue GenSine::eval(double psi) const {
  const double period = 4.0 * half_;
  double x = std::fmod(psi, period);
  if (x < 0.0) x += period;
  const double pi = 2.0 * half_;
  if (x <= half_) return quarter(x);
  if (x <= pi) {
    const SineValue v = quarter(pi - x);
    return {v.s, -v.sprime};
  }
  if (x <= pi + half_) {
    const SineValue v = quarter(x - pi);
    return {-v.s, -v.sprime};
  }
  const SineValue v = quarter(period - x);
  return {-v.s, v.sprime};
}

double GenSine::sprime_pow_p(double psi) const {
  const double s = eval(psi).s;
  return one_minus_pow(std::pow(std::fabs(s) / amp_, p_), 1.0);
}

double GenSine::inverse_quarter(double value) const {
  const double x = std::clamp(value / amp_, 0.0, 1.0);
  const double s = std::pow(1.0 - x, 1.0 / q_);
  // sv_ decreases along psi_.
  const auto it = std::lower_bound(sv_.begin(), sv_.end(), s, std::greater<>());
  std::size_t i = (it == sv_.begin()) ? 0 : static_cast<std::size_t>(it - sv_.begin()) - 1;
  if (i + 1 >= sv_.size()) i = sv_.size() - 2;
  const double m0 = 1.0 / dsdpsi_[i];
  const double m1 = 1.0 / dsdpsi_[i + 1];
  // Hermite in the reversed direction: psi as a function of s.
  double psi = hermite(sv_[i + 1], sv_[i], psi_[i + 1], psi_[i], m1, m0, s);
  psi = std::clamp(psi, 0.0, half_);
  // One Newton polish against the forward table.
  const SineValue v = quarter(psi);
  if (v.sprime > 1e-8) {
    psi = std::clamp(psi - (v.s - value) / v.sprime, 0.0, half_);
  }
  return psi;
}

double GenSine::inverse_half(double value, double sprime_sign) const {
  const double base = inverse_quarter(value);
  return sprime_sign >= 0.0 ? base : 2.0 * half_ - base;
}

QuarterAngles quarter_pi_p(const GenSine& gs) {
  const double p = gs.p();
  const double target = std::pow((p - 1.0) / p, 1.0 / p);
  const numerics::ScalarFn f = [&](double psi) { return gs.s(psi) - target; };
  const auto bracket = numerics::make_bracket(f, 0.0, gs.half_period());
  const double quarter = numerics::find_root(f, bracket, 1e-15);
  return {quarter, gs.pi_p() - quarter};
}

}  // namespace hplap::specfun
