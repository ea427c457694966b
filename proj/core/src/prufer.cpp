#include "hplap/prufer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "hplap/error.hpp"
#include "hplap/exponents.hpp"
#include "hplap/numerics/dual2.hpp"
#include "hplap/numerics/power.hpp"
#include "hplap/numerics/roots.hpp"

namespace hplap::prufer {

using numerics::signed_pow;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Potential {
  double value = 0.0;  // r^p V = mu + eps t^{-m}
  double dt = 0.0;     // its t-derivative
};

Potential potential(const ProblemParams& params, double t) {
  Potential v{params.mu, 0.0};
  if (params.eps != 0.0) {
    if (!(t > 0.0)) throw Error(Errc::DomainError, "log potential needs r > 1");
    const int m = exponents::hardy_constants(params.p, params.N).m_star;
    const double tm = std::pow(t, -m);
    v.value += params.eps * tm;
    v.dt = -m * params.eps * tm / t;
  }
  if (!(v.value > 0.0)) {
    throw Error(Errc::NonpositivePotential,
                "r^p V = " + std::to_string(v.value) + " at t = " + std::to_string(t));
  }
  return v;
}

double field_weight(const ProblemParams& params, const Potential& v) {
  return (params.N - params.p) / (params.p - 1.0) + v.dt / (params.p * v.value);
}

double slope(const std::vector<double>& x, const std::vector<double>& y) {
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

double rel_err(double fitted, double predicted) {
  return std::fabs(fitted - predicted) / std::max(1.0, std::fabs(predicted));
}

numerics::Trajectory integrate_from(const ProblemParams& params, const specfun::GenSine& sine,
                                    double t0, double psi0, double t_end,
                                    const IntegrationOptions& opt) {
  potential(params, t0);  // fail early on V <= 0
  numerics::OdeProblem prob;
  prob.rhs = [&](double t, std::span<const double> y, std::span<double> d) {
    const auto r = prufer_rhs(params, sine, t, y[0]);
    d[0] = r.dpsi_dt;
    d[1] = r.dlogrho_dt;
  };
  prob.t0 = t0;
  prob.t_end = t_end;
  prob.y0 = {psi0, 0.0};
  prob.rel_tol = opt.rel_tol;
  prob.abs_tol = opt.abs_tol;
  numerics::OdeOptions o;
  o.max_steps = opt.max_steps;
  return numerics::integrate_ode(prob, o);
}

}  // namespace

PruferRates prufer_rhs(const ProblemParams& params, const specfun::GenSine& sine, double t,
                       double psi) {
  const Potential v = potential(params, t);
  const double p = params.p;
  const auto sv = sine.eval(psi);
  const double w = field_weight(params, v);
  PruferRates r;
  r.dpsi_dt = std::pow(v.value, 1.0 / p) + w * sv.s * signed_pow(sv.sprime, p - 1.0);
  r.dlogrho_dt = w * std::pow(std::fabs(sv.s), p);
  return r;
}

double log_q(const ProblemParams& params, double t) {
  const Potential v = potential(params, t);
  return std::log(v.value) + t * params.p * (params.N - params.p) / (params.p - 1.0);
}

double reconstruct_log_u(const ProblemParams& params, const specfun::GenSine& sine, double t,
                         double psi, double log_rho) {
  const double s = sine.s(psi);
  if (!(s > 0.0)) return -std::numeric_limits<double>::infinity();
  return log_rho / (params.p - 1.0) + std::log(s) - log_q(params, t) / params.p;
}

PruferFixedPoints fixed_points(const ProblemParams& params, const specfun::GenSine& sine) {
  const double p = params.p;
  const int N = params.N;
  const double n = static_cast<double>(N);
  PruferFixedPoints fp;
  if (params.eps == 0.0 && !is_critical_dimension(p, N)) {
    const double ch = exponents::hardy_constants(p, N).C_H;
    if (!(params.mu > 0.0) || params.mu > ch * (1.0 + exponents::kDoubleRootTol)) {
      throw Error(Errc::DomainError, "fixed points need 0 < mu <= C_H");
    }
    const auto quarters = specfun::quarter_pi_p(sine);
    fp.psi_star = p > n ? quarters.quarter : quarters.three_quarter;
    if (exponents::mu_is_critical(p, N, params.mu)) {
      fp.psi_minus = fp.psi_plus = fp.psi_star;
      return fp;
    }
    const auto g = exponents::gamma_roots(p, N, params.mu);
    const double mu_root = std::pow(params.mu, 1.0 / p);
    const numerics::ScalarFn field = [&](double psi) {
      const auto sv = sine.eval(psi);
      return mu_root + (n - p) / (p - 1.0) * sv.s * signed_pow(sv.sprime, p - 1.0);
    };
    auto angle = [&](double gamma) {
      const double base = std::max(0.0, (gamma * (p - 1.0) + n - p) * (p - 1.0) / (n - p));
      double psi = sine.inverse_half(std::pow(base, 1.0 / p), gamma);
      // Polish against the tabulated field.
      const double h = 1e-7;
      const double lo = psi - h, hi = psi + h;
      if (field(lo) * field(hi) < 0.0) {
        psi = numerics::find_root(field, numerics::make_bracket(field, lo, hi), 1e-15);
      }
      return psi;
    };
    fp.psi_minus = angle(g.minus);
    fp.psi_plus = angle(g.plus);
    return fp;
  }
  if (is_critical_dimension(p, N) && params.mu == 0.0 && params.eps > 0.0) {
    const auto b = exponents::beta_roots(p, N, params.eps);
    auto angle = [&](double beta) {
      return sine.inverse_quarter(std::pow((n - 1.0) * (1.0 - beta), 1.0 / n));
    };
    fp.psi_minus = angle(b.minus);
    fp.psi_plus = angle(b.plus);
    fp.psi_star = angle((n - 1.0) / n);
    return fp;
  }
  throw Error(Errc::DomainError, "no autonomous angular field for these parameters");
}

LargeSubsolution integrate_large_subsolution(const ProblemParams& params,
                                             const specfun::GenSine& sine, double t0,
                                             double t_end, const IntegrationOptions& opt) {
  validate(params);
  if (!(t_end > t0)) throw Error(Errc::ConfigError, "t_end must exceed log R");
  if (std::fabs(sine.p() - params.p) > 1e-15) {
    throw Error(Errc::ConfigError, "generalized sine built for a different p");
  }
  LargeSubsolution sol;
  sol.params_ = params;
  sol.sine_ = &sine;
  sol.t0_ = t0;
  sol.t_end_ = t_end;
  if (params.eps == 0.0 && params.mu <= 0.0) {
    const auto g = exponents::gamma_roots(params.p, params.N, params.mu);
    if (is_critical_dimension(params.p, params.N) && params.mu == 0.0) {
      sol.kind_ = LargeSubsolution::ClosedForm::Logarithm;
    } else if (g.plus > 0.0) {
      sol.kind_ = LargeSubsolution::ClosedForm::PowerPlus;
      sol.exponent_ = g.plus;
    } else {
      // mu = 0, p < N: gamma+ = 0, use the decaying p-harmonic profile instead.
      sol.kind_ = LargeSubsolution::ClosedForm::HarmonicDecay;
      sol.exponent_ = g.minus;
    }
    constexpr int n = 2000;
    for (int i = 0; i <= n; ++i) sol.states_.push_back(sol.at(t0 + (t_end - t0) * i / n));
    return sol;
  }
  sol.traj_ = integrate_from(params, sine, t0, 0.0, t_end, opt);
  for (std::size_t i = 0; i < sol.traj_.size(); ++i) {
    const double t = sol.traj_.t(i);
    const double psi = sol.traj_.y(i, 0);
    const double lr = sol.traj_.y(i, 1);
    sol.states_.push_back({t, psi, lr, reconstruct_log_u(params, sine, t, psi, lr)});
  }
  return sol;
}

PruferState LargeSubsolution::at(double t) const {
  PruferState s;
  s.t = t;
  const double x = t - t0_;
  switch (kind_) {
    case ClosedForm::Logarithm:
      s.psi = s.log_rho = kNaN;
      s.log_u = std::log(x);
      return s;
    case ClosedForm::PowerPlus:
      // r^g - R^g = r^g (1 - e^{-g x})
      s.psi = s.log_rho = kNaN;
      s.log_u = exponent_ * t + std::log(-std::expm1(-exponent_ * x));
      return s;
    case ClosedForm::HarmonicDecay:
      // 1 - (r/R)^g with g < 0
      s.psi = s.log_rho = kNaN;
      s.log_u = std::log(-std::expm1(exponent_ * x));
      return s;
    case ClosedForm::None:
      break;
  }
  s.psi = traj_.interpolate(t, 0);
  s.log_rho = traj_.interpolate(t, 1);
  s.log_u = reconstruct_log_u(params_, *sine_, t, s.psi, s.log_rho);
  return s;
}

double reconstruction_residual(const LargeSubsolution& sol, const ProblemParams& params,
                               const specfun::GenSine& sine, double t) {
  const double p = params.p;
  const double n = static_cast<double>(params.N);
  double h, ht;
  if (sol.closed_form()) {
    const double d = 1e-3;
    const double lm = sol.at(t - d).log_u, l0 = sol.at(t).log_u, lp = sol.at(t + d).log_u;
    h = (lp - lm) / (2 * d);
    const double d2 = (lp - 2 * l0 + lm) / (d * d);
    ht = d2;
  } else {
    // d(log u)/dt in terms of (t, psi), from the reconstruction and the field.
    auto dlogu = [&](double tt, double psi) {
      const auto r = prufer_rhs(params, sine, tt, psi);
      const auto sv = sine.eval(psi);
      const Potential v = potential(params, tt);
      const double dlogq = v.dt / v.value + p * (n - p) / (p - 1.0);
      return r.dlogrho_dt / (p - 1.0) + sv.sprime / sv.s * r.dpsi_dt - dlogq / p;
    };
    const double psi = sol.at(t).psi;
    const double dpsi = prufer_rhs(params, sine, t, psi).dpsi_dt;
    // Central difference along the tangent: the O(d^2) offset from the true
    // trajectory has the same sign on both sides and cancels.
    const double d = 1e-4;
    h = dlogu(t, psi);
    ht = (dlogu(t + d, psi + d * dpsi) - dlogu(t - d, psi - d * dpsi)) / (2 * d);
  }
  const double hp2 = std::pow(std::fabs(h), p - 2.0);
  double extra = params.mu;
  if (params.eps != 0.0) {
    extra += params.eps / std::pow(t, exponents::hardy_constants(p, params.N).m_star);
  }
  return -((p - 1.0) * hp2 * h * h + (n - p) * signed_pow(h, p - 1.0) + (p - 1.0) * hp2 * ht) -
         extra;
}

std::string_view to_string(AsymptoticCase c) noexcept {
  switch (c) {
    case AsymptoticCase::PowerGrowth: return "power_growth";
    case AsymptoticCase::CriticalHardy: return "critical_hardy";
    case AsymptoticCase::CriticalDimension: return "critical_dimension";
    case AsymptoticCase::LogPerturbed: return "log_perturbed";
  }
  return "?";
}

std::vector<AsymptoticFit> fit_asymptotics(const LargeSubsolution& sol,
                                           const ProblemParams& params, AsymptoticCase which,
                                           double t_lo, double t_hi) {
  if (t_lo < 0.0) t_lo = 0.5 * sol.t_end();
  if (t_hi < 0.0) t_hi = sol.t_end();
  if (!(t_hi > t_lo) || t_lo <= sol.t0() || t_hi > sol.t_end() * (1.0 + 1e-12)) {
    throw Error(Errc::WindowTooShort, "fit window [" + std::to_string(t_lo) + ", " +
                                          std::to_string(t_hi) + "] outside the integration");
  }
  constexpr int n = 400;
  std::vector<double> ts, logt, lu, lr;
  for (int i = 0; i <= n; ++i) {
    const double t = t_lo + (t_hi - t_lo) * i / n;
    const auto s = sol.at(t);
    ts.push_back(t);
    logt.push_back(std::log(t));
    lu.push_back(s.log_u);
    lr.push_back(s.log_rho);
  }
  const double p = params.p;
  const int N = params.N;
  const double gs = exponents::gamma_star(p, N);
  std::vector<AsymptoticFit> out;
  auto push = [&](std::string q, double fitted, double predicted) {
    out.push_back({std::move(q), t_lo, t_hi, fitted, predicted, rel_err(fitted, predicted)});
  };
  std::vector<double> reduced(lu.size());
  for (std::size_t i = 0; i < lu.size(); ++i) reduced[i] = lu[i] - gs * ts[i];
  switch (which) {
    case AsymptoticCase::PowerGrowth: {
      const auto g = exponents::gamma_roots(p, N, params.mu);
      push("dlog u/dlog r", slope(ts, lu), g.plus);
      if (!sol.closed_form()) {
        push("dlog rho/dlog r", slope(ts, lr), g.plus * (p - 1.0) + N - p);
      }
      break;
    }
    case AsymptoticCase::CriticalHardy:
      push("dlog(u r^-gamma*)/dlog log r", slope(logt, reduced), 2.0 / p);
      break;
    case AsymptoticCase::CriticalDimension:
      push("dlog u/dlog log r", slope(logt, lu), exponents::beta_roots(p, N, params.eps).plus);
      break;
    case AsymptoticCase::LogPerturbed:
      push("dlog(u r^-gamma*)/dlog log r", slope(logt, reduced),
           exponents::beta_roots(p, N, params.eps).plus);
      break;
  }
  return out;
}

std::string_view to_string(PerturbationLaw c) noexcept {
  switch (c) {
    case PerturbationLaw::Exponential: return "exponential";
    case PerturbationLaw::InverseLog: return "inverse_log";
    case PerturbationLaw::LogPower: return "log_power";
  }
  return "?";
}

PerturbationFit perturbation_rate(const LargeSubsolution& sol, const ProblemParams& params,
                                  const specfun::GenSine& sine, PerturbationLaw law) {
  if (sol.closed_form()) throw Error(Errc::DomainError, "closed-form solutions carry no angle");
  const double p = params.p;
  const int N = params.N;
  PerturbationFit fit;
  fit.law = law;
  fit.psi_limit = fixed_points(params, sine).psi_plus;
  const auto& st = sol.states();
  std::vector<double> xs, ys;
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  auto take = [&](const PruferState& s, double x) {
    xs.push_back(x);
    ys.push_back(std::log(std::fabs(s.psi - fit.psi_limit)));
    lo = std::min(lo, s.t);
    hi = std::max(hi, s.t);
  };
  switch (law) {
    case PerturbationLaw::Exponential: {
      const auto g = exponents::gamma_roots(p, N, params.mu);
      fit.predicted = -(g.plus * p + N - p);
      for (const auto& s : st) {
        const double w = std::fabs(s.psi - fit.psi_limit);
        if (w < 1e-2 && w > 1e-9) take(s, s.t);
      }
      break;
    }
    case PerturbationLaw::LogPower: {
      const auto b = exponents::beta_roots(p, N, params.eps);
      fit.predicted = N * (1.0 - b.plus) - 1.0;
      for (const auto& s : st) {
        const double w = std::fabs(s.psi - fit.psi_limit);
        if (w < 1e-2 && w > 1e-10 && s.t >= 0.1 * sol.t_end()) take(s, std::log(s.t));
      }
      break;
    }
    case PerturbationLaw::InverseLog: {
      fit.predicted = -(2.0 / p) * (p - 1.0) / std::fabs(p - N);
      for (const auto& s : st) {
        if (s.t >= 0.5 * sol.t_end()) take(s, std::log(s.t));
      }
      break;
    }
  }
  if (xs.size() < (law == PerturbationLaw::InverseLog ? 1u : 8u)) {
    throw Error(Errc::NotConverged, "too few steps in the linearization regime");
  }
  fit.t_lo = lo;
  fit.t_hi = hi;
  if (law == PerturbationLaw::InverseLog) {
    const auto& last = st.back();
    fit.fitted = (last.psi - fit.psi_limit) * last.t;
  } else {
    fit.fitted = slope(xs, ys);
  }
  fit.rel_err = rel_err(fit.fitted, fit.predicted);
  return fit;
}

ComparisonAngle comparison_angle(const ProblemParams& params, const specfun::GenSine& sine,
                                 double beta, double t) {
  using numerics::Dual2;
  const double p = params.p;
  const int N = params.N;
  const double ch = exponents::hardy_constants(p, N).C_H;
  const double gs = exponents::gamma_star(p, N);
  const Dual2 x = Dual2::variable(t);
  const Dual2 vhat = ch + params.eps / (x * x);
  const Dual2 u = pow(vhat, 1.0 / p);
  const Dual2 a = gs + beta / x;
  const Dual2 d = pow(abs_pow(a, p) + pow(u, p) / (p - 1.0), 1.0 / p);
  const Dual2 s = u / d;
  const double sp = a.value / d.value;
  ComparisonAngle out;
  out.psi = sine.inverse_half(s.value, sp);
  out.dpsi_dt = s.d1 / sp;
  const double w = (N - p) / (p - 1.0) - 2.0 * params.eps / (t * t * t) / (p * vhat.value);
  const double field = u.value + w * s.value * signed_pow(sp, p - 1.0);
  out.residual = out.dpsi_dt - field;
  return out;
}

SandwichReport eps_sandwich_run(const ProblemParams& params, const specfun::GenSine& sine,
                                double delta, double t_end, const IntegrationOptions& opt) {
  const double p = params.p;
  const int N = params.N;
  if (is_critical_dimension(p, N) || !exponents::mu_is_critical(p, N, params.mu)) {
    throw Error(Errc::DomainError, "sandwich run needs mu = C_H and p != N");
  }
  const double cs = exponents::hardy_constants(p, N).C_star;
  if (!(params.eps > 0.0 && params.eps < cs)) {
    throw Error(Errc::EpsOutOfRange, "sandwich run needs eps in (0, C*)");
  }
  SandwichReport rep;
  rep.delta = delta;
  rep.t_end = t_end;
  rep.beta_plus = exponents::beta_roots(p, N, params.eps).plus;
  const double bmax = std::min(rep.beta_plus - 1.0 / p, 2.0 / p - rep.beta_plus);
  if (!(delta > 0.0 && delta < bmax)) {
    throw Error(Errc::DeltaOutOfRange,
                "delta must lie in (0, " + std::to_string(bmax) + "), got " + std::to_string(delta));
  }
  const double b = rep.beta_plus - delta;
  const double B = rep.beta_plus + delta;
  const auto quarters = specfun::quarter_pi_p(sine);
  rep.psi_limit = p > N ? quarters.quarter : quarters.three_quarter;

  // psi_b must be an upper solution (residual >= 0) and psi_B a lower one.
  bool found = false;
  for (int k = 1; k <= 14 && !found; ++k) {
    const double tk = std::ldexp(1.0, k);
    if (tk >= 0.25 * t_end) break;
    bool ok = true;
    constexpr int n = 200;
    for (int i = 0; i <= n && ok; ++i) {
      const double t = tk * std::pow(t_end / tk, static_cast<double>(i) / n);
      const double A_b = exponents::gamma_star(p, N) + b / t;
      const double A_B = exponents::gamma_star(p, N) + B / t;
      if ((A_b > 0.0) != (p > N) || (A_B > 0.0) != (p > N)) {
        ok = false;
        break;
      }
      ok = comparison_angle(params, sine, b, t).residual >= 0.0 &&
           comparison_angle(params, sine, B, t).residual <= 0.0;
    }
    if (ok && comparison_angle(params, sine, B, tk).psi < comparison_angle(params, sine, b, tk).psi) {
      rep.t_delta = tk;
      found = true;
    }
  }
  if (!found) throw Error(Errc::NotConverged, "no radius found where the comparison angles order");

  const double psi0 = 0.5 * (comparison_angle(params, sine, B, rep.t_delta).psi +
                             comparison_angle(params, sine, b, rep.t_delta).psi);
  const auto traj = integrate_from(params, sine, rep.t_delta, psi0, t_end, opt);
  rep.steps = traj.size();
  rep.holds = true;
  rep.min_lower_margin = rep.min_upper_margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const double t = traj.t(i);
    const double psi = traj.y(i, 0);
    const double lower = psi - comparison_angle(params, sine, B, t).psi;
    const double upper = comparison_angle(params, sine, b, t).psi - psi;
    rep.min_lower_margin = std::min(rep.min_lower_margin, lower);
    rep.min_upper_margin = std::min(rep.min_upper_margin, upper);
    rep.holds &= lower >= 0.0 && upper >= 0.0;
  }
  rep.psi_end = traj.y(traj.size() - 1, 0);

  std::vector<double> xs, ys;
  const double gs = exponents::gamma_star(p, N);
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const double t = traj.t(i);
    if (t < 0.5 * t_end) continue;
    xs.push_back(std::log(t));
    ys.push_back(reconstruct_log_u(params, sine, t, traj.y(i, 0), traj.y(i, 1)) - gs * t);
  }
  if (xs.size() < 3) throw Error(Errc::WindowTooShort, "too few steps in the fit window");
  const double f = slope(xs, ys);
  rep.fit = {"dlog(u r^-gamma*)/dlog log r", 0.5 * t_end, t_end, f, rep.beta_plus,
             rel_err(f, rep.beta_plus)};
  return rep;
}

}  // namespace hplap::prufer
