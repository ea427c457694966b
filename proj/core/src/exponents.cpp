#include "hplap/exponents.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hplap/error.hpp"
#include "hplap/numerics/roots.hpp"

namespace hplap::exponents {

namespace {

void require_pN(double p, int N) {
  if (!(p > 1.0) || N < 2) {
    throw Error(Errc::DomainError, "need p > 1 and N >= 2");
  }
}

double signed_pow(double x, double s) { return std::copysign(std::pow(std::fabs(x), s), x); }

double root_in(const numerics::ScalarFn& f, double lo, double hi) {
  const auto b = numerics::make_bracket(f, lo, hi);
  return numerics::find_root(f, b, 1e-16);
}

}  // namespace

HardyConstants hardy_constants(double p, int N) {
  require_pN(p, N);
  const double n = static_cast<double>(N);
  HardyConstants c;
  const double ratio = std::fabs((n - p) / p);
  c.C_H = std::pow(ratio, p);
  if (is_critical_dimension(p, N)) {
    c.C_H = 0.0;
    c.C_star = std::pow((n - 1.0) / n, n);
    c.m_star = N;
  } else {
    c.C_star = (p - 1.0) / (2.0 * p) * std::pow(ratio, p - 2.0);
    c.m_star = 2;
  }
  return c;
}

double gamma_star(double p, int N) { return (p - static_cast<double>(N)) / p; }

double gamma_map(double p, int N, double gamma) {
  // gamma |gamma|^{p-2} written as sign(gamma) |gamma|^{p-1} so p < 2 is finite at 0.
  return -signed_pow(gamma, p - 1.0) * (gamma * (p - 1.0) + static_cast<double>(N) - p);
}

bool mu_is_critical(double p, int N, double mu) {
  const double ch = hardy_constants(p, N).C_H;
  return std::fabs(mu - ch) <= kDoubleRootTol * std::max(1.0, ch);
}

GammaRoots gamma_roots(double p, int N, double mu) {
  require_pN(p, N);
  const double ch = hardy_constants(p, N).C_H;
  const double gs = gamma_star(p, N);
  if (mu_is_critical(p, N, mu)) return {gs, gs};
  if (mu > ch) {
    throw Error(Errc::NoRealRoots, "mu = " + std::to_string(mu) + " exceeds C_H = " +
                                       std::to_string(ch));
  }
  // The map is unimodal with maximum C_H at gamma*, so each side has one root.
  if (mu == 0.0) {
    // Factorised: the zero at gamma = 0 is degenerate for p > 2, so do not root-find it.
    const double other = (p - static_cast<double>(N)) / (p - 1.0);
    return {std::min(0.0, other), std::max(0.0, other)};
  }
  // The map is unimodal with maximum C_H at gamma*, so each side has one root. Push the
  // outer end away from gamma* until the sign changes.
  const numerics::ScalarFn f = [&](double g) { return gamma_map(p, N, g) - mu; };
  auto outer = [&](double dir) {
    double w = 1.0 + std::fabs(mu);
    for (int i = 0; i < 200 && f(gs + dir * w) > 0.0; ++i) w *= 2.0;
    return gs + dir * w;
  };
  GammaRoots r;
  r.minus = root_in(f, outer(-1.0), gs);
  r.plus = root_in(f, gs, outer(1.0));
  return r;
}

double beta_map(double p, int N, double beta) {
  if (is_critical_dimension(p, N)) {
    const double n = static_cast<double>(N);
    return std::pow(beta, n - 1.0) * (1.0 - beta) * (n - 1.0);
  }
  const double gs = gamma_star(p, N);
  return 0.5 * std::pow(std::fabs(gs), p - 2.0) * (p - 1.0) * (2.0 - beta * p) * beta;
}

BetaRoots beta_roots(double p, int N, double eps) {
  require_pN(p, N);
  const double cs = hardy_constants(p, N).C_star;
  const double tol = kDoubleRootTol * std::max(1.0, cs);
  if (eps < 0.0 || eps > cs + tol) {
    throw Error(Errc::EpsOutOfRange,
                "eps = " + std::to_string(eps) + " outside [0, C*=" + std::to_string(cs) + "]");
  }
  if (is_critical_dimension(p, N)) {
    const double n = static_cast<double>(N);
    const double peak = (n - 1.0) / n;
    if (std::fabs(eps - cs) <= tol) return {peak, peak};
    if (eps == 0.0) return {0.0, 1.0};
    const numerics::ScalarFn f = [&](double b) { return beta_map(p, N, b) - eps; };
    return {root_in(f, 0.0, peak), root_in(f, peak, 1.0)};
  }
  if (std::fabs(eps - cs) <= tol) return {1.0 / p, 1.0 / p};
  // p beta^2 - 2 beta + eps/C* / p = 0 after dividing through by C* p.
  const double disc = std::sqrt(std::max(0.0, 1.0 - eps / cs));
  const double plus = (1.0 + disc) / p;
  const double minus = (eps / cs) / (p * p * plus);
  return {minus, plus};
}

ExponentData exponent_data(double p, int N, double mu, double eps) {
  ExponentData d;
  d.constants = hardy_constants(p, N);
  d.gamma_star = gamma_star(p, N);
  const auto g = gamma_roots(p, N, mu);
  d.gamma_minus = g.minus;
  d.gamma_plus = g.plus;
  if (eps >= 0.0 && eps <= d.constants.C_star * (1.0 + kDoubleRootTol)) {
    const auto b = beta_roots(p, N, eps);
    d.beta_minus = b.minus;
    d.beta_plus = b.plus;
  }
  return d;
}

double critical_line(double p, int N, double mu, double q) {
  const auto g = gamma_roots(p, N, mu);
  const double k = q - p + 1.0;
  return std::min(g.minus * k + p, g.plus * k + p);
}

std::string_view to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::Nonexistence: return "Nonexistence";
    case Verdict::Existence: return "Existence";
    case Verdict::ExcludedPoint: return "ExcludedPoint";
    case Verdict::NonexistenceAllQ: return "NonexistenceAllQ";
  }
  return "?";
}

Classification classify(const ProblemParams& params) {
  validate(params);
  const double p = params.p;
  const int N = params.N;
  const double ch = hardy_constants(p, N).C_H;
  const bool critical = mu_is_critical(p, N, params.mu);
  if (!critical && params.mu > ch) return {Verdict::NonexistenceAllQ, std::nullopt};
  if (params.q == p - 1.0 && params.sigma == p) return {Verdict::ExcludedPoint, p};

  const double lambda = critical_line(p, N, params.mu, params.q);
  const double on_line = 1e-12 * std::max(1.0, std::fabs(lambda));
  const double diff = params.sigma - lambda;
  bool none;
  if (!critical) {
    none = diff <= on_line;
  } else {
    none = diff < -on_line || (std::fabs(diff) <= on_line && params.q >= -1.0);
  }
  return {none ? Verdict::Nonexistence : Verdict::Existence, lambda};
}

double nonlinear_exponent(const ProblemParams& params) {
  const double k = params.q - (params.p - 1.0);
  if (k == 0.0) throw Error(Errc::HomogeneousCase, "q = p - 1 has no nonlinear lower bound");
  return (params.sigma - params.p) / k;
}

std::vector<RegionVertex> region_polyline(double p, int N, double mu, double q_min, double q_max,
                                          double step) {
  if (!(step > 0.0) || !(q_max >= q_min)) {
    throw Error(Errc::ConfigError, "region needs step > 0 and q_max >= q_min");
  }
  const auto g = gamma_roots(p, N, mu);
  auto line = [&](double q) {
    const double k = q - p + 1.0;
    return std::min(g.minus * k + p, g.plus * k + p);
  };
  std::vector<RegionVertex> out;
  const auto n = static_cast<long long>(std::floor((q_max - q_min) / step + 1e-9));
  const double kink = p - 1.0;
  bool kink_done = false;
  for (long long i = 0; i <= n; ++i) {
    const double q = q_min + static_cast<double>(i) * step;
    if (!kink_done && q >= kink) {
      if (std::fabs(q - kink) > 1e-12) out.push_back({kink, p});
      kink_done = true;
      if (std::fabs(q - kink) <= 1e-12) {
        out.push_back({kink, p});
        continue;
      }
    }
    out.push_back({q, line(q)});
  }
  if (!kink_done) out.push_back({kink, p});
  std::sort(out.begin(), out.end(), [](const RegionVertex& a, const RegionVertex& b) { return a.q < b.q; });
  return out;
}

}  // namespace hplap::exponents
