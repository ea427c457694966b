#include "hplap/numerics/ode.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "hplap/error.hpp"

namespace hplap::numerics {

void Trajectory::push_back(double t, std::span<const double> y) {
  t_.push_back(t);
  states_.insert(states_.end(), y.begin(), y.end());
}

double Trajectory::interpolate(double t, std::size_t component) const {
  if (t_.empty()) {
    throw Error(Errc::DomainError, "interpolate on empty trajectory");
  }
  if (t <= t_.front()) return y(0, component);
  if (t >= t_.back()) return y(t_.size() - 1, component);
  const auto it = std::upper_bound(t_.begin(), t_.end(), t);
  const std::size_t i = static_cast<std::size_t>(it - t_.begin()) - 1;
  const double t0 = t_[i];
  const double t1 = t_[i + 1];
  const double h = t1 - t0;
  const double s = (t - t0) / h;
  const double y0 = y(i, component);
  const double y1 = y(i + 1, component);
  if (dydt_.size() != states_.size()) {
    return y0 + s * (y1 - y0);
  }
  const double m0 = dydt_[i * dim_ + component] * h;
  const double m1 = dydt_[(i + 1) * dim_ + component] * h;
  const double s2 = s * s;
  const double s3 = s2 * s;
  return (2 * s3 - 3 * s2 + 1) * y0 + (s3 - 2 * s2 + s) * m0 + (-2 * s3 + 3 * s2) * y1 +
         (s3 - s2) * m1;
}

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

void validate(const OdeProblem& prob) {
  if (!prob.rhs) throw Error(Errc::DomainError, "ODE right-hand side not set");
  if (!(prob.t0 < prob.t_end)) throw Error(Errc::DomainError, "ODE requires t0 < t_end");
  if (!(prob.rel_tol > 0.0) || !(prob.abs_tol > 0.0)) {
    throw Error(Errc::DomainError, "ODE tolerances must be positive");
  }
  if (prob.y0.empty()) throw Error(Errc::DomainError, "ODE state is empty");
}

}  // namespace

Trajectory integrate_ode(const OdeProblem& prob, const OdeOptions& opt) {
  validate(prob);
  const std::size_t n = prob.y0.size();
  Trajectory traj(n);
  std::vector<double> derivs;

  std::vector<double> y = prob.y0;
  std::vector<double> ynew(n), tmp(n), err(n);
  std::array<std::vector<double>, 7> k;
  for (auto& ki : k) ki.assign(n, 0.0);

  double t = prob.t0;
  const double t_end = prob.t_end;
  auto rhs = [&](double tt, const std::vector<double>& yy, std::vector<double>& out) {
    prob.rhs(tt, yy, out);
    ++traj.rhs_evaluations;
  };

  rhs(t, y, k[0]);
  traj.push_back(t, y);
  derivs.insert(derivs.end(), k[0].begin(), k[0].end());

  auto scale = [&](double a, double b) {
    return prob.abs_tol + prob.rel_tol * std::max(std::fabs(a), std::fabs(b));
  };

  double h = opt.h_init;
  if (!(h > 0.0)) {
    // Hairer-Norsett-Wanner starting step.
    double d0 = 0.0, d1 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double sc = scale(y[i], y[i]);
      d0 += (y[i] / sc) * (y[i] / sc);
      d1 += (k[0][i] / sc) * (k[0][i] / sc);
    }
    d0 = std::sqrt(d0 / n);
    d1 = std::sqrt(d1 / n);
    double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h0 = std::min(h0, t_end - t);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h0 * k[0][i];
    rhs(t + h0, tmp, k[1]);
    double d2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double sc = scale(y[i], y[i]);
      const double v = (k[1][i] - k[0][i]) / sc;
      d2 += v * v;
    }
    d2 = std::sqrt(d2 / n) / h0;
    const double h1 = (std::max(d1, d2) <= 1e-15) ? std::max(1e-6, h0 * 1e-3)
                                                  : std::pow(0.01 / std::max(d1, d2), 0.2);
    h = std::min(100.0 * h0, h1);
  }
  h = std::min({h, opt.h_max, t_end - t});

  bool last_rejected = false;
  std::size_t steps = 0;
  while (t < t_end) {
    if (++steps > opt.max_steps) {
      throw Error(Errc::NotConverged, "ODE step budget exhausted at t=" + std::to_string(t));
    }
    const double floor = 16.0 * std::numeric_limits<double>::epsilon() *
                         std::max(std::fabs(t), 1.0);
    if (h < floor) {
      throw Error(Errc::StepUnderflow, "step size underflow at t=" + std::to_string(t));
    }
    if (t + h > t_end || t_end - (t + h) < floor) h = t_end - t;

    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * a21 * k[0][i];
    rhs(t + c2 * h, tmp, k[1]);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * (a31 * k[0][i] + a32 * k[1][i]);
    rhs(t + c3 * h, tmp, k[2]);
    for (std::size_t i = 0; i < n; ++i)
      tmp[i] = y[i] + h * (a41 * k[0][i] + a42 * k[1][i] + a43 * k[2][i]);
    rhs(t + c4 * h, tmp, k[3]);
    for (std::size_t i = 0; i < n; ++i)
      tmp[i] = y[i] + h * (a51 * k[0][i] + a52 * k[1][i] + a53 * k[2][i] + a54 * k[3][i]);
    rhs(t + c5 * h, tmp, k[4]);
    for (std::size_t i = 0; i < n; ++i)
      tmp[i] = y[i] + h * (a61 * k[0][i] + a62 * k[1][i] + a63 * k[2][i] + a64 * k[3][i] +
                           a65 * k[4][i]);
    rhs(t + h, tmp, k[5]);
    for (std::size_t i = 0; i < n; ++i)
      ynew[i] = y[i] + h * (b1 * k[0][i] + b3 * k[2][i] + b4 * k[3][i] + b5 * k[4][i] +
                            b6 * k[5][i]);
    rhs(t + h, ynew, k[6]);

    double err_norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      err[i] = h * (e1 * k[0][i] + e3 * k[2][i] + e4 * k[3][i] + e5 * k[4][i] + e6 * k[5][i] +
                    e7 * k[6][i]);
      const double v = err[i] / scale(y[i], ynew[i]);
      err_norm += v * v;
    }
    err_norm = std::sqrt(err_norm / n);

    if (!std::isfinite(err_norm)) {
      h *= 0.25;
      last_rejected = true;
      ++traj.rejected_steps;
      continue;
    }

    if (err_norm <= 1.0) {
      t += h;
      y.swap(ynew);
      k[0].swap(k[6]);
      traj.push_back(t, y);
      derivs.insert(derivs.end(), k[0].begin(), k[0].end());
      double fac = (err_norm == 0.0) ? 5.0 : 0.9 * std::pow(err_norm, -0.2);
      fac = std::clamp(fac, 0.2, last_rejected ? 1.0 : 5.0);
      h = std::min(h * fac, opt.h_max);
      last_rejected = false;
    } else {
      const double fac = std::max(0.2, 0.9 * std::pow(err_norm, -0.2));
      h *= fac;
      last_rejected = true;
      ++traj.rejected_steps;
    }
  }
  traj.set_derivatives(std::move(derivs));
  return traj;
}

Trajectory integrate_rk4(const OdeProblem& prob, std::size_t steps) {
  validate(prob);
  if (steps == 0) throw Error(Errc::DomainError, "RK4 requires at least one step");
  const std::size_t n = prob.y0.size();
  Trajectory traj(n);
  std::vector<double> y = prob.y0, tmp(n), k1(n), k2(n), k3(n), k4(n);
  const double h = (prob.t_end - prob.t0) / static_cast<double>(steps);
  traj.push_back(prob.t0, y);
  for (std::size_t s = 0; s < steps; ++s) {
    const double t = prob.t0 + static_cast<double>(s) * h;
    prob.rhs(t, y, k1);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
    prob.rhs(t + 0.5 * h, tmp, k2);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
    prob.rhs(t + 0.5 * h, tmp, k3);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * k3[i];
    prob.rhs(t + h, tmp, k4);
    for (std::size_t i = 0; i < n; ++i) y[i] += h / 6.0 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
    traj.push_back(s + 1 == steps ? prob.t_end : t + h, y);
  }
  traj.rhs_evaluations = 4 * steps;
  return traj;
}

}  // namespace hplap::numerics
