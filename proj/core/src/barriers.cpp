#include "hplap/barriers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "hplap/error.hpp"
#include "hplap/exponents.hpp"
#include "hplap/numerics/power.hpp"
#include "hplap/numerics/quadrature.hpp"

namespace hplap::barriers {

using numerics::Dual2;

namespace {

std::vector<double> geometric_grid(double lo, double hi, std::size_t n) {
  std::vector<double> out(n);
  if (n == 1) {
    out[0] = lo;
    return out;
  }
  const bool geometric = lo > 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double s = static_cast<double>(i) / static_cast<double>(n - 1);
    out[i] = geometric ? lo * std::pow(hi / lo, s) : lo + (hi - lo) * s;
  }
  out.front() = lo;
  out.back() = hi;
  return out;
}

double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

double domain_min_t(const RadialProfile& profile) {
  if (profile.tau != 0.0) return std::exp(1.0);
  if (profile.beta != 0.0) return 1.0;
  return -std::numeric_limits<double>::infinity();
}

Dual2 log_profile(const RadialProfile& profile, double t) {
  if (!(profile.scale > 0.0)) throw Error(Errc::DomainError, "profile scale must be positive");
  if (!(t > domain_min_t(profile))) {
    throw Error(Errc::DomainError, "t = " + std::to_string(t) + " outside the profile domain");
  }
  const Dual2 x = Dual2::variable(t);
  Dual2 g = std::log(profile.scale) + profile.gamma * x;
  if (profile.beta != 0.0) g += profile.beta * log(x);
  if (profile.tau != 0.0) g += profile.tau * log(log(x));
  return g;
}

ResidualPoint residual_at(const RadialProfile& profile, const ProblemParams& params, double t) {
  const double p = params.p;
  const double n = static_cast<double>(params.N);
  const Dual2 g = log_profile(profile, t);
  const double h = g.d1;
  const double ht = g.d2;
  if (h == 0.0 && p < 2.0 && ht != 0.0) {
    throw Error(Errc::DomainError, "u' vanishes at t = " + std::to_string(t) + " with p < 2");
  }
  const double hp2 = (h == 0.0) ? (p == 2.0 ? 1.0 : 0.0) : std::pow(std::fabs(h), p - 2.0);
  const double a = (p - 1.0) * hp2 * h * h;
  const double b = (p - 1.0) * hp2 * ht;
  const double c = (n - p) * numerics::signed_pow(h, p - 1.0);
  double log_term = 0.0;
  if (params.eps != 0.0) {
    if (!(t > 0.0)) throw Error(Errc::DomainError, "log potential needs r > 1");
    const int m = exponents::hardy_constants(p, params.N).m_star;
    log_term = params.eps / std::pow(t, m);
  }
  ResidualPoint out;
  out.normalized = -(a + b + c) - params.mu - log_term;
  out.log_weight = (p - 1.0) * g.value - p * t;
  out.magnitude = std::max({std::fabs(a), std::fabs(b), std::fabs(c), std::fabs(params.mu),
                            std::fabs(log_term)});
  return out;
}

double radial_p_laplace_residual(const RadialProfile& profile, const ProblemParams& params,
                                 double t) {
  const auto r = residual_at(profile, params, t);
  return r.normalized * std::exp(r.log_weight);
}

std::string_view to_string(BarrierKind k) noexcept {
  switch (k) {
    case BarrierKind::SubSolution: return "SubSolution";
    case BarrierKind::SuperSolution: return "SuperSolution";
    case BarrierKind::Indeterminate: return "Indeterminate";
  }
  return "?";
}

ResidualReport classify_barrier(const RadialProfile& profile, const ProblemParams& params,
                                double t_min, double t_max, std::size_t n_samples) {
  if (!(t_max > t_min) || n_samples < 8) {
    throw Error(Errc::ConfigError, "classify_barrier needs t_max > t_min and >= 8 samples");
  }
  ResidualReport rep;
  rep.t = geometric_grid(t_min, t_max, n_samples);
  for (double t : rep.t) {
    const auto r = residual_at(profile, params, t);
    rep.normalized.push_back(r.normalized);
    rep.residual.push_back(r.normalized * std::exp(r.log_weight));
    rep.tol.push_back(kSignTol * r.magnitude);
  }

  std::vector<double> thresholds{t_min};
  for (int k = 2; k <= 12; ++k) {
    const double tk = std::ldexp(1.0, k);
    if (tk > t_min && tk < t_max) thresholds.push_back(tk);
  }

  rep.threshold_t = t_min;
  rep.classification = BarrierKind::Indeterminate;
  for (double th : thresholds) {
    std::size_t count = 0;
    bool all_nonneg = true, all_nonpos = true, some_pos = false, some_neg = false;
    for (std::size_t i = 0; i < rep.t.size(); ++i) {
      if (rep.t[i] < th) continue;
      ++count;
      const double v = rep.normalized[i];
      const double tol = rep.tol[i];
      all_nonneg &= v >= -tol;
      all_nonpos &= v <= tol;
      some_pos |= v > tol;
      some_neg |= v < -tol;
    }
    if (count < 4) break;
    if (all_nonneg && all_nonpos) {
      // Residual is rounding noise throughout: an exact solution.
      rep.threshold_t = th;
      return rep;
    }
    if (all_nonneg && some_pos) {
      rep.classification = BarrierKind::SuperSolution;
      rep.threshold_t = th;
      return rep;
    }
    if (all_nonpos && some_neg) {
      rep.classification = BarrierKind::SubSolution;
      rep.threshold_t = th;
      return rep;
    }
  }
  return rep;
}

double expansion_value(const RadialProfile& profile, double p, int N, double t) {
  if (is_critical_dimension(p, N)) {
    throw Error(Errc::DomainError, "the log expansion is only defined for p != N");
  }
  const double gs = exponents::gamma_star(p, N);
  const double b = profile.beta;
  const double tau = profile.tau;
  const double L = std::log(t);
  const double t2 = t * t;
  double e = gs * gs + b * (p - 1.0) * (2.0 - b * p) / (2.0 * t2) +
             p * (p - 1.0) * (p - 2.0) / (3.0 * (static_cast<double>(N) - p)) * b * b *
                 (b * p - 3.0) / (t2 * t);
  if (tau != 0.0) {
    e += tau * (p - 1.0) * (1.0 - b * p) / (t2 * L) +
         tau * (p - 1.0) * (2.0 - tau * p) / (2.0 * t2 * L * L);
  }
  return std::pow(std::fabs(gs), p - 2.0) * e;
}

double expansion_check(const RadialProfile& profile, const ProblemParams& params, double t) {
  ProblemParams bare = params;
  bare.mu = 0.0;
  bare.eps = 0.0;
  const double lhs = residual_at(profile, bare, t).normalized;
  return lhs - expansion_value(profile, params.p, params.N, t);
}

double nonlinear_normalized(const RadialProfile& profile, const ProblemParams& params, double t) {
  const double linear = residual_at(profile, params, t).normalized;
  const double g = log_profile(profile, t).value;
  const double expo = (params.p - params.sigma) * t + (params.q - params.p + 1.0) * g;
  return linear - params.C * std::exp(expo);
}

ExistenceCertificate existence_supersolution(const ProblemParams& params, double t_max,
                                             std::size_t n_samples) {
  const auto cls = exponents::classify(params);
  if (cls.verdict != exponents::Verdict::Existence) {
    throw Error(Errc::NotInExistenceRegion,
                std::string("classifier verdict is ") + std::string(exponents::to_string(cls.verdict)));
  }
  const double p = params.p;
  const int N = params.N;
  const double k = params.q - p + 1.0;
  ExistenceCertificate cert;
  RadialProfile base;
  if (!exponents::mu_is_critical(p, N, params.mu)) {
    const auto g = exponents::gamma_roots(p, N, params.mu);
    double lo = g.minus, hi = g.plus;
    if (k > 0.0) hi = std::min(hi, (params.sigma - p) / k);
    if (k < 0.0) lo = std::max(lo, (params.sigma - p) / k);
    base.gamma = 0.5 * (lo + hi);
  } else if (is_critical_dimension(p, N)) {
    const double n = static_cast<double>(N);
    base.beta = (params.sigma > n) ? 0.5 : 0.5 * (n / (n - 1.0 - params.q) + 1.0);
  } else {
    base.gamma = exponents::gamma_star(p, N);
    const double lambda = *cls.lambda_star;
    const bool on_line = std::fabs(params.sigma - lambda) <= 1e-12 * std::max(1.0, std::fabs(lambda));
    base.beta = on_line ? 0.5 * (-2.0 / k + 2.0 / p) : 1.0 / p;
    cert.eps_margin = base.beta * (p - 1.0) * (2.0 - base.beta * p) / 2.0;
  }

  std::vector<double> scales{1.0};
  if (k != 0.0) {
    for (int j = 1; j <= 60; ++j) scales.push_back(k > 0.0 ? std::ldexp(1.0, -j) : std::ldexp(1.0, j));
  }
  const double t_floor = std::max(2.0, std::isfinite(domain_min_t(base)) ? domain_min_t(base) : 2.0);
  for (int e = 2; e <= 12; ++e) {
    const double th = std::max(std::ldexp(1.0, e), t_floor * 1.000001);
    if (th >= t_max) break;
    const auto grid = geometric_grid(th, t_max, n_samples);
    for (double s : scales) {
      RadialProfile prof = base;
      prof.scale = s;
      std::vector<double> vals;
      vals.reserve(grid.size());
      bool ok = true;
      for (double t : grid) {
        const double v = nonlinear_normalized(prof, params, t);
        if (!(v >= 0.0)) {
          ok = false;
          break;
        }
        vals.push_back(v);
      }
      if (ok) {
        cert.profile = prof;
        cert.threshold_t = th;
        cert.t = grid;
        cert.nonlinear_normalized = std::move(vals);
        return cert;
      }
    }
  }
  throw Error(Errc::NotConverged, "no scale/threshold in the scan makes the residual nonnegative");
}

std::string_view to_string(DecayCase c) noexcept {
  switch (c) {
    case DecayCase::PowerBelowCritical: return "power_below_critical";
    case DecayCase::CriticalLog: return "critical_log";
    case DecayCase::CriticalDimension: return "critical_dimension";
  }
  return "?";
}

double picone_remainder_density(const RadialProfile& profile, double p, int N, double alpha,
                                double T, double t) {
  const Dual2 g = log_profile(profile, t);
  const double theta = (2.0 * T - t) / T;
  if (theta <= 0.0) return 0.0;
  const double b = alpha * (-1.0 / T) / theta;
  const double weight = p * g.value + (static_cast<double>(N) - p) * t + alpha * p * std::log(theta);
  return std::exp(weight) * numerics::bregman_pow(g.d1, b, p);
}

DecayReport condition_s_decay(const RadialProfile& profile, const ProblemParams& params,
                              const std::vector<double>& log_R) {
  const double p = params.p;
  const int N = params.N;
  const double gs = exponents::gamma_star(p, N);
  DecayReport rep;
  const double tol = 1e-12;
  if (profile.beta == 0.0 && profile.tau == 0.0 && profile.gamma <= gs + tol) {
    rep.which = DecayCase::PowerBelowCritical;
    rep.bound_slope = profile.gamma * p + N - p;
  } else if (!is_critical_dimension(p, N) && std::fabs(profile.gamma - gs) <= tol &&
             std::fabs(profile.beta - 1.0 / p) <= tol && profile.tau < 0.0) {
    rep.which = DecayCase::CriticalLog;
    rep.bound_slope = profile.tau * p;
  } else if (is_critical_dimension(p, N) && std::fabs(profile.gamma) <= tol &&
             std::fabs(profile.beta - (N - 1.0) / N) <= tol && profile.tau < 0.0) {
    rep.which = DecayCase::CriticalDimension;
    rep.bound_slope = profile.tau * N;
  } else {
    throw Error(Errc::DomainError, "profile matches none of the decay cases");
  }
  rep.alpha = p >= 2.0 ? 1.0 : 2.0 / p + 0.25;
  if (log_R.size() < 2) throw Error(Errc::ConfigError, "need at least two radii");

  numerics::QuadOptions opt;
  opt.abs_tol = 0.0;
  opt.rel_tol = 1e-10;
  opt.max_intervals = 4000;
  std::vector<double> xs, ys;
  for (double T : log_R) {
    if (!(T > domain_min_t(profile))) throw Error(Errc::DomainError, "R below the profile domain");
    const auto res = numerics::integrate_gk(
        [&](double t) { return picone_remainder_density(profile, p, N, rep.alpha, T, t); }, T,
        2.0 * T, opt);
    rep.log_R.push_back(T);
    rep.integral.push_back(res.value);
    xs.push_back(rep.which == DecayCase::PowerBelowCritical ? T : std::log(T));
    ys.push_back(std::log(res.value));
  }
  rep.fitted_slope = least_squares_slope(xs, ys);
  rep.decreasing = true;
  for (std::size_t i = 1; i < rep.integral.size(); ++i) {
    rep.decreasing &= rep.integral[i] < rep.integral[i - 1];
  }
  return rep;
}

}  // namespace hplap::barriers
