#include "hplap/hardy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "hplap/error.hpp"
#include "hplap/exponents.hpp"
#include "hplap/numerics/power.hpp"
#include "hplap/numerics/quadrature.hpp"

namespace hplap::hardy {

using numerics::Dual2;
using numerics::signed_pow;

namespace {

numerics::QuadOptions tight() {
  numerics::QuadOptions o;
  o.abs_tol = 0.0;
  o.rel_tol = 1e-12;
  o.max_intervals = 20000;
  return o;
}

double integrate(const numerics::ScalarFn& f, double a, double b) {
  auto o = tight();
  o.abs_tol = 1e-300;
  return numerics::integrate_gk(f, a, b, o).value;
}

// Exact per-cell integral of |v'|^p r^{N-1}.
double dirichlet_part(const RadialTestFunction& v, double p, int N) {
  double sum = 0.0;
  for (std::size_t i = 0; i < v.cells(); ++i) {
    const double s = v.slope(i);
    if (s == 0.0) continue;
    sum += std::pow(std::fabs(s), p) * (std::pow(v.r[i + 1], N) - std::pow(v.r[i], N)) / N;
  }
  return sum;
}

// int |v|^p r^{N-1-p} w(r) over the support, cell by cell.
double weighted_part(const RadialTestFunction& v, double p, int N,
                     const std::function<double(double)>& extra) {
  double sum = 0.0;
  for (std::size_t i = 0; i < v.cells(); ++i) {
    const double r0 = v.r[i], r1 = v.r[i + 1];
    const double v0 = v.values[i], s = v.slope(i);
    if (v0 == 0.0 && v.values[i + 1] == 0.0) continue;
    sum += integrate(
        [&](double r) {
          const double val = v0 + s * (r - r0);
          return std::pow(std::fabs(val), p) * std::pow(r, N - 1.0 - p) * extra(r);
        },
        r0, r1);
  }
  return sum;
}

}  // namespace

std::vector<double> log_spaced(double a, double b, std::size_t n) {
  if (!(a > 0.0 && b > a) || n == 0) throw Error(Errc::DomainError, "log_spaced needs 0 < a < b");
  std::vector<double> r(n + 1);
  const double la = std::log(a), lb = std::log(b);
  for (std::size_t i = 0; i <= n; ++i) r[i] = std::exp(la + (lb - la) * i / n);
  r.front() = a;
  r.back() = b;
  return r;
}

void RadialTestFunction::validate() const {
  if (r.size() < 2 || r.size() != values.size()) {
    throw Error(Errc::DomainError, "test function needs matching nodes and values");
  }
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (!std::isfinite(values[i]) || !std::isfinite(r[i])) {
      throw Error(Errc::DomainError, "test function has non-finite entries");
    }
    if (i > 0 && !(r[i] > r[i - 1])) throw Error(Errc::DomainError, "nodes must increase");
  }
  if (values.front() != 0.0 || values.back() != 0.0) {
    throw Error(Errc::DomainError, "test function must vanish at both ends");
  }
}

RadialTestFunction RadialTestFunction::sample(const std::function<double(double)>& f,
                                              double rho_in, double R_out, std::size_t n) {
  RadialTestFunction v;
  v.r = log_spaced(rho_in, R_out, n);
  v.values.assign(v.r.size(), 0.0);
  for (std::size_t i = 1; i + 1 < v.r.size(); ++i) v.values[i] = f(v.r[i]);
  return v;
}

RadialTestFunction RadialTestFunction::hat(double a, double b, std::size_t n) {
  const double la = std::log(a), lb = std::log(b);
  return sample(
      [&](double r) {
        const double x = (std::log(r) - la) / (lb - la);
        return 1.0 - std::fabs(2.0 * x - 1.0);
      },
      a, b, n);
}

FormEvaluation energy_form(const RadialTestFunction& v, const ProblemParams& params) {
  v.validate();
  const double p = params.p;
  const int N = params.N;
  FormEvaluation f;
  f.dirichlet = dirichlet_part(v, p, N);
  if (params.mu != 0.0) {
    f.hardy_term = params.mu * weighted_part(v, p, N, [](double) { return 1.0; });
  }
  if (params.eps != 0.0) {
    if (!(v.r.front() > 1.0)) {
      throw Error(Errc::DomainError, "log weight needs support in |x| > 1");
    }
    const int m = exponents::hardy_constants(p, N).m_star;
    f.log_term = params.eps * weighted_part(v, p, N, [m](double r) {
                   return std::pow(std::log(r), -m);
                 });
  }
  f.total = f.dirichlet - f.hardy_term - f.log_term;
  return f;
}

double rayleigh_quotient(const RadialTestFunction& v, double p, int N) {
  v.validate();
  return dirichlet_part(v, p, N) / weighted_part(v, p, N, [](double) { return 1.0; });
}

RayleighResult rayleigh_min(double p, int N, double rho_in, double R_out, std::size_t n_grid,
                            const RayleighOptions& options) {
  if (n_grid < 16) throw Error(Errc::ConfigError, "rayleigh_min needs at least 16 cells");
  if (!(p > 1.0) || N < 1) throw Error(Errc::ConfigError, "rayleigh_min needs p > 1, N >= 1");
  const auto r = log_spaced(rho_in, R_out, n_grid);
  const std::size_t n = n_grid;  // cells; unknowns at nodes 1..n-1
  std::vector<double> h(n), c(n);
  for (std::size_t i = 0; i < n; ++i) {
    h[i] = r[i + 1] - r[i];
    c[i] = (std::pow(r[i + 1], N) - std::pow(r[i], N)) / N;
  }
  const auto gauss = numerics::gauss_legendre(8);
  // Per cell quadrature points, weights (including r^{N-1-p}) and hat values.
  std::vector<double> qw(n * 8), qx(n * 8);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < 8; ++k) {
      const double x = 0.5 * (gauss.nodes[k] + 1.0);
      const double rr = r[i] + x * h[i];
      qx[i * 8 + k] = x;
      qw[i * 8 + k] = 0.5 * gauss.weights[k] * h[i] * std::pow(rr, N - 1.0 - p);
    }
  }
  auto denominator = [&](const std::vector<double>& v) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < 8; ++k) {
        const double x = qx[i * 8 + k];
        s += qw[i * 8 + k] * std::pow(std::fabs((1 - x) * v[i] + x * v[i + 1]), p);
      }
    }
    return s;
  };
  auto numerator = [&](const std::vector<double>& v) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += c[i] * std::pow(std::fabs((v[i + 1] - v[i]) / h[i]), p);
    return s;
  };
  // (1/p) gradient of the denominator at v.
  auto load = [&](const std::vector<double>& v) {
    std::vector<double> b(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < 8; ++k) {
        const double x = qx[i * 8 + k];
        const double f = qw[i * 8 + k] * signed_pow((1 - x) * v[i] + x * v[i + 1], p - 1.0);
        b[i] += (1 - x) * f;
        b[i + 1] += x * f;
      }
    }
    return b;
  };

  const double gs = exponents::gamma_star(p, N);
  const double L = std::log(R_out / rho_in);
  std::vector<double> v(n + 1, 0.0);
  for (std::size_t i = 1; i < n; ++i) {
    const double s = std::log(r[i] / rho_in) / L;
    v[i] = std::pow(r[i] / rho_in, gs) * std::sin(M_PI * s);
  }
  auto normalize = [&](std::vector<double>& w) {
    const double d = std::pow(denominator(w), 1.0 / p);
    for (auto& x : w) x /= d;
  };
  normalize(v);
  double lambda = numerator(v);

  // Solves grad(A)/p (w) = b by damped Newton with a tridiagonal Hessian.
  auto solve = [&](const std::vector<double>& b, std::vector<double> w) {
    std::vector<double> grad(n + 1), diag(n + 1), off(n + 1), dw(n + 1);
    auto objective = [&](const std::vector<double>& x) {
      double s = numerator(x) / p;
      for (std::size_t i = 1; i < n; ++i) s -= b[i] * x[i];
      return s;
    };
    for (int it = 0; it < 60; ++it) {
      std::fill(grad.begin(), grad.end(), 0.0);
      std::fill(diag.begin(), diag.end(), 0.0);
      std::fill(off.begin(), off.end(), 0.0);
      double smax = 0.0;
      for (std::size_t i = 0; i < n; ++i) smax = std::max(smax, std::fabs((w[i + 1] - w[i]) / h[i]));
      const double eta = 1e-10 * smax;
      for (std::size_t i = 0; i < n; ++i) {
        const double s = (w[i + 1] - w[i]) / h[i];
        const double flux = c[i] * signed_pow(s, p - 1.0) / h[i];
        grad[i] -= flux;
        grad[i + 1] += flux;
        const double k = (p - 1.0) * c[i] * std::pow(s * s + eta * eta, 0.5 * (p - 2.0)) / (h[i] * h[i]);
        diag[i] += k;
        diag[i + 1] += k;
        off[i] = -k;  // couples i and i+1
      }
      for (std::size_t i = 1; i < n; ++i) grad[i] -= b[i];
      // Thomas algorithm on nodes 1..n-1.
      std::vector<double> cp(n + 1, 0.0), dp(n + 1, 0.0);
      for (std::size_t i = 1; i < n; ++i) {
        const double lower = i > 1 ? off[i - 1] : 0.0;
        const double denom = diag[i] - lower * (i > 1 ? cp[i - 1] : 0.0);
        cp[i] = off[i] / denom;
        dp[i] = (-grad[i] - lower * (i > 1 ? dp[i - 1] : 0.0)) / denom;
      }
      dw[n] = 0.0;
      dw[0] = 0.0;
      for (std::size_t i = n - 1; i >= 1; --i) {
        dw[i] = dp[i] - (i + 1 < n ? cp[i] * dw[i + 1] : 0.0);
        if (i == 1) break;
      }
      const double f0 = objective(w);
      double step = 1.0;
      std::vector<double> trial(n + 1);
      double wmax = 0.0, dmax = 0.0;
      for (int ls = 0; ls < 40; ++ls) {
        for (std::size_t i = 0; i <= n; ++i) trial[i] = w[i] + step * dw[i];
        if (objective(trial) <= f0) break;
        step *= 0.5;
      }
      for (std::size_t i = 0; i <= n; ++i) {
        wmax = std::max(wmax, std::fabs(trial[i]));
        dmax = std::max(dmax, std::fabs(trial[i] - w[i]));
      }
      w.swap(trial);
      if (dmax <= 1e-14 * wmax) break;
    }
    return w;
  };

  RayleighResult res;
  for (std::size_t it = 1; it <= options.max_iterations; ++it) {
    // Warm start from the current iterate scaled to the expected solution size.
    std::vector<double> w = v;
    for (auto& x : w) x *= std::pow(lambda, -1.0 / (p - 1.0));
    w = solve(load(v), std::move(w));
    for (auto& x : w) x = std::fabs(x);
    normalize(w);
    const double next = numerator(w);
    v.swap(w);
    const bool done = std::fabs(lambda - next) <= options.tol * next;
    lambda = next;
    if (done) {
      res.iterations = it;
      res.quotient = lambda;
      res.minimizer.r = r;
      res.minimizer.values = v;
      res.minimizer.values.front() = res.minimizer.values.back() = 0.0;
      return res;
    }
  }
  throw Error(Errc::ConvergenceFailure,
              "Rayleigh quotient did not settle after " + std::to_string(options.max_iterations) +
                  " iterations");
}

HardyRadius improved_hardy_radius(double p, int N) {
  const auto hc = exponents::hardy_constants(p, N);
  ProblemParams params;
  params.p = p;
  params.N = N;
  params.mu = hc.C_H;
  params.eps = hc.C_star;
  HardyRadius out;
  out.profile = is_critical_dimension(p, N)
                    ? barriers::RadialProfile{0.0, (N - 1.0) / N, 1.0 / N, 1.0}
                    : barriers::RadialProfile{exponents::gamma_star(p, N), 1.0 / p, 1.0 / p, 1.0};
  const double t_lo = barriers::domain_min_t(out.profile);
  for (int k = 1; k <= 11; ++k) {
    const double t = std::ldexp(1.0, k);
    if (t <= t_lo) continue;
    const auto rep = barriers::classify_barrier(out.profile, params, t, 4096.0, 300);
    if (rep.classification == barriers::BarrierKind::SuperSolution && rep.threshold_t == t) {
      out.log_rho = t;
      return out;
    }
  }
  throw Error(Errc::NotConverged, "no radius certified for the improved inequality");
}

HardyMargin improved_hardy_check(double p, int N, double rho, const RadialTestFunction& v) {
  v.validate();
  if (v.r.front() < rho * (1.0 - 1e-12)) {
    throw Error(Errc::DomainError, "test function not supported in |x| >= rho");
  }
  const auto hc = exponents::hardy_constants(p, N);
  ProblemParams params;
  params.p = p;
  params.N = N;
  params.mu = hc.C_H;
  params.eps = hc.C_star;
  const auto f = energy_form(v, params);
  return {f.total, f.dirichlet};
}

Dual2 cutoff(const CutoffFamily& fam, double t) {
  const double a = fam.log_rho + std::log(1.5);
  const double b = fam.log_rho + std::log(2.0);
  const double T = fam.log_R;
  if (t <= a || t >= 2.0 * T) return {0.0, 0.0, 0.0};
  if (t < b) {
    const double e = 2.0 * std::exp(t - fam.log_rho);
    return {e - 3.0, e, e};
  }
  if (t <= T) return {1.0, 0.0, 0.0};
  return {(2.0 * T - t) / T, -1.0 / T, 0.0};
}

namespace {

// log B(a, y e^{-s}) for B(a, b) = |a+b|^p - |a|^p - p|a|^{p-2} a b, without
// forming e^{-s} when it would underflow.
double log_bregman(double a, double y, double s, double p) {
  if (y == 0.0) return -std::numeric_limits<double>::infinity();
  if (a == 0.0) return p * (std::log(std::fabs(y)) - s);
  const double ya = y / a;
  const double x = ya * std::exp(-s);
  if (std::fabs(x) < 1e-2) {
    // |a|^p x^2 sum_k binom(p, k) x^{k-2}
    double coef = p * (p - 1.0) / 2.0;
    double xk = 1.0;
    double sum = 0.0;
    for (int k = 2; k < 12; ++k) {
      sum += coef * xk;
      coef *= (p - k) / (k + 1.0);
      xk *= x;
    }
    return p * std::log(std::fabs(a)) + 2.0 * (std::log(std::fabs(ya)) - s) + std::log(sum);
  }
  return std::log(numerics::bregman_pow(a, y * std::exp(-s), p));
}

}  // namespace

double family_energy(const barriers::RadialProfile& phi, const CutoffFamily& fam,
                     const ProblemParams& params) {
  const double p = params.p;
  const int N = params.N;
  const auto hc = exponents::hardy_constants(p, N);
  const double gs = exponents::gamma_star(p, N);
  if (std::fabs(phi.gamma - gs) > 1e-12) {
    throw Error(Errc::DomainError, "family profiles carry the power r^gamma*");
  }
  const double a = fam.log_rho + std::log(1.5);
  const double b = fam.log_rho + std::log(2.0);
  const double T = fam.log_R;
  if (!(T > b)) throw Error(Errc::DomainError, "cutoff needs R > 2 rho");
  if (!(a > barriers::domain_min_t(phi)) || (params.eps != 0.0 && !(a > 0.0))) {
    throw Error(Errc::DomainError, "cutoff support leaves the profile domain");
  }
  const double excess = params.mu - hc.C_H;
  const int m = hc.m_star;
  const double S = std::log(T);
  // With z = theta^alpha phi r^{-gamma*} the density of E per unit t is
  // z^p (B(gamma*, lambda - gamma*) - (mu - C_H) - eps t^{-m}), lambda = (log w)_t:
  // the tangent term at gamma* integrates to zero over the support. Every piece
  // is evaluated in logs so that R = e^T with T near the double range works.
  // log_jac: log of dt/du plus the theta factor; s = log t; y = (lambda - gamma*) t.
  auto density = [&](double log_jac, double s, double y, double y_scale_log) {
    double L = log_jac + p * std::log(phi.scale);
    if (phi.beta != 0.0) L += p * phi.beta * s;
    if (phi.tau != 0.0) L += p * phi.tau * std::log(s);
    double out = std::exp(L + log_bregman(gs, y, y_scale_log, p));
    if (excess != 0.0) out -= excess * std::exp(L);
    if (params.eps != 0.0) out -= params.eps * std::exp(L - m * s);
    return out;
  };
  auto profile_y = [&](double s) {
    return phi.beta + (phi.tau != 0.0 ? phi.tau / s : 0.0);
  };
  auto integ = [](const numerics::ScalarFn& f, double lo, double hi) {
    numerics::QuadOptions o;
    o.abs_tol = 1e-13;
    o.rel_tol = 1e-10;
    o.max_intervals = 20000;
    return numerics::integrate_gk(f, lo, hi, o).value;
  };
  // Ramp: theta = 2 r/rho - 3 in t.
  double e = integ(
      [&](double t) {
        const double th = 2.0 * std::exp(t - fam.log_rho) - 3.0;
        if (!(th > 0.0)) return 0.0;
        const double dth = th + 3.0;
        const double s = std::log(t);
        const double y = profile_y(s) + t * fam.alpha * dth / th;
        return density(fam.alpha * p * std::log(th), s, y, s);
      },
      a, b);
  // Plateau, in s = log t.
  e += integ([&](double s) { return density(s, s, profile_y(s), s); }, std::log(b), S);
  // Outer ramp theta = 2 - t/T, in sigma = t/T - 1.
  e += integ(
      [&](double sig) {
        const double th = 1.0 - sig;
        if (!(th > 0.0)) return 0.0;
        const double s = S + std::log1p(sig);
        const double y = profile_y(s) / (1.0 + sig) - fam.alpha / th;
        return density(S + fam.alpha * p * std::log(th), s, y, S);
      },
      0.0, 1.0);
  return e;
}

std::string_view to_string(SharpnessCase c) noexcept {
  switch (c) {
    case SharpnessCase::EpsAboveCstar: return "eps_above_Cstar";
    case SharpnessCase::MuAboveCH: return "mu_above_CH";
  }
  return "?";
}

double default_tau(double p) { return -1.0 / (2.0 * p); }

namespace {

double default_alpha(double p) { return p >= 2.0 ? 1.0 : 2.0 / p + 0.25; }

barriers::RadialProfile family_profile(double p, int N, SharpnessCase which, double tau) {
  if (which == SharpnessCase::MuAboveCH) return {exponents::gamma_star(p, N), 0.0, 0.0, 1.0};
  if (is_critical_dimension(p, N)) return {0.0, (N - 1.0) / N, tau, 1.0};
  return {exponents::gamma_star(p, N), 1.0 / p, tau, 1.0};
}

ProblemParams family_params(double p, int N, SharpnessCase which, double excess) {
  const auto hc = exponents::hardy_constants(p, N);
  ProblemParams pp;
  pp.p = p;
  pp.N = N;
  pp.mu = hc.C_H;
  if (which == SharpnessCase::MuAboveCH) {
    pp.mu += excess;
  } else {
    pp.eps = hc.C_star + excess;
  }
  return pp;
}

}  // namespace

SharpnessReport sharpness_family(double p, int N, SharpnessCase which,
                                 const std::vector<double>& log_R, double excess,
                                 std::optional<double> tau) {
  const double tv = tau.value_or(default_tau(p));
  if (which == SharpnessCase::EpsAboveCstar && !(tv > -1.0 / p && tv < 0.0)) {
    throw Error(Errc::ConfigError, "tau must lie in (-1/p, 0)");
  }
  if (!(excess > 0.0)) throw Error(Errc::ConfigError, "excess must be positive");
  SharpnessReport rep;
  rep.which = which;
  rep.params = family_params(p, N, which, excess);
  rep.profile = family_profile(p, N, which, tv);
  rep.family.alpha = default_alpha(p);
  rep.growth_exponent = which == SharpnessCase::MuAboveCH ? 1.0 : tv * p + 1.0;
  rep.strictly_decreasing = true;
  for (double T : log_R) {
    rep.family.log_R = T;
    const double e = family_energy(rep.profile, rep.family, rep.params);
    if (!rep.members.empty()) rep.strictly_decreasing &= e < rep.members.back().energy;
    rep.members.push_back({T, e});
  }
  if (!rep.members.empty()) {
    const double T = rep.members.back().log_R;
    const double var = which == SharpnessCase::MuAboveCH ? T : std::pow(std::log(T), rep.growth_exponent);
    rep.growth_ratio = -rep.members.back().energy / var;
  }
  return rep;
}

PiconePoint picone_at(Dual2 w, Dual2 phi, double p) {
  if (!(phi.value > 0.0)) throw Error(Errc::DomainError, "Picone needs phi > 0");
  const double dw = w.d1, dphi = phi.d1;
  const double ratio = w.value / phi.value;
  const double phi_flux = signed_pow(dphi, p - 1.0);
  const double grad_w = std::pow(std::fabs(dw), p);
  const double cross = p * signed_pow(ratio, p - 1.0) * phi_flux * dw;
  const double last = (p - 1.0) * std::pow(std::fabs(ratio), p) * std::pow(std::fabs(dphi), p);
  PiconePoint out;
  out.L = grad_w - cross + last;
  const Dual2 q = numerics::abs_pow(w, p) / pow(phi, p - 1.0);
  out.R = grad_w - q.d1 * phi_flux;
  out.scale = grad_w + std::fabs(cross) + last;
  return out;
}

PiconeReport picone_check(const RadialTestFunction& w, const barriers::RadialProfile& phi,
                          double p, std::size_t n_samples) {
  w.validate();
  PiconeReport rep;
  rep.min_L = std::numeric_limits<double>::infinity();
  const std::size_t per_cell = std::max<std::size_t>(1, n_samples / w.cells());
  for (std::size_t i = 0; i < w.cells(); ++i) {
    for (std::size_t k = 0; k < per_cell; ++k) {
      const double x = (k + 0.5) / per_cell;
      const double r = w.r[i] + x * (w.r[i + 1] - w.r[i]);
      const double s = w.slope(i);
      const Dual2 wv{w.values[i] + s * (r - w.r[i]), s, 0.0};
      const Dual2 g = barriers::log_profile(phi, std::log(r));
      const double ph = std::exp(g.value);
      const Dual2 pv{ph, ph * g.d1 / r, 0.0};
      const auto pt = picone_at(wv, pv, p);
      if (pt.scale == 0.0) continue;
      const double diff = std::fabs(pt.L - pt.R) / pt.scale;
      rep.max_difference = std::max(rep.max_difference, diff);
      rep.min_L = std::min(rep.min_L, pt.L / pt.scale);
      rep.max_violation = std::max({rep.max_violation, diff, -pt.L / pt.scale});
      ++rep.samples;
    }
  }
  if (rep.samples == 0) rep.min_L = 0.0;
  return rep;
}

std::optional<NonexistenceWitness> nonexistence_witness(double p, int N, double mu, double eps) {
  ProblemParams params;
  params.p = p;
  params.N = N;
  params.mu = mu;
  params.eps = eps;
  validate(params);
  NonexistenceWitness wit;
  auto accept = [&](SharpnessCase which, const barriers::RadialProfile& prof,
                    const CutoffFamily& fam, double e) {
    wit.family_case = which;
    wit.profile = prof;
    wit.family = fam;
    wit.energy = e;
    wit.profile.scale = std::pow(-1.0 / e, 1.0 / p);
    // A grid version when R^2 = e^{2T} stays well inside double range.
    if (2.0 * fam.log_R <= 200.0) {
      const double a = std::exp(fam.log_rho) * 1.5;
      const double b = std::exp(2.0 * fam.log_R);
      const auto n = static_cast<std::size_t>(std::clamp(400.0 * (2.0 * fam.log_R - std::log(a)), 2000.0, 40000.0));
      auto grid = RadialTestFunction::sample(
          [&](double r) {
            const double t = std::log(r);
            return std::exp(barriers::log_profile(wit.profile, t).value) *
                   std::pow(cutoff(fam, t).value, fam.alpha);
          },
          a, b, n);
      // The ramp ends at 2 rho; put a node there so the kink is resolved.
      grid.r.insert(std::upper_bound(grid.r.begin(), grid.r.end(), 2.0 * a / 1.5), 2.0 * a / 1.5);
      grid.values.assign(grid.r.size(), 0.0);
      for (std::size_t i = 1; i + 1 < grid.r.size(); ++i) {
        const double t = std::log(grid.r[i]);
        grid.values[i] = std::exp(barriers::log_profile(wit.profile, t).value) *
                         std::pow(cutoff(fam, t).value, fam.alpha);
      }
      wit.discretized_energy = energy_form(grid, params).total;
      wit.discretized = std::move(grid);
    }
  };

  const double alpha = default_alpha(p);
  // Hardy-constant family: energy ~ -(mu - C_H) log R.
  {
    CutoffFamily fam{3.0, 8.0, alpha};
    const auto prof = family_profile(p, N, SharpnessCase::MuAboveCH, 0.0);
    for (; fam.log_R <= 4096.0; fam.log_R *= 2.0) {
      const double e = family_energy(prof, fam, params);
      if (e < 0.0) {
        accept(SharpnessCase::MuAboveCH, prof, fam, e);
        return wit;
      }
    }
  }
  // Logarithmic family: energy ~ -(eps - C*) (log log R)^{tau p + 1}. Off the
  // critical mu the Hardy-constant family above already decides the sign.
  if (!exponents::mu_is_critical(p, N, mu)) return std::nullopt;
  for (double tau : {default_tau(p), -0.1 / p, -0.02 / p}) {
    const auto prof = family_profile(p, N, SharpnessCase::EpsAboveCstar, tau);
    CutoffFamily fam{3.0, 8.0, alpha};
    for (double s = std::log(8.0); s <= 700.0; s += 0.25 * std::max(1.0, s)) {
      fam.log_R = std::exp(s);
      const double e = family_energy(prof, fam, params);
      if (e < 0.0) {
        accept(SharpnessCase::EpsAboveCstar, prof, fam, e);
        return wit;
      }
    }
  }
  return std::nullopt;
}

RadialTestFunction random_test_function(double a, double b, std::size_t n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  RadialTestFunction v;
  v.r = log_spaced(a, b, n);
  v.values.assign(v.r.size(), 0.0);
  for (std::size_t i = 1; i + 1 < v.r.size(); ++i) v.values[i] = u(gen);
  return v;
}

}  // namespace hplap::hardy
