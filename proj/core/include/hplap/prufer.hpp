#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "hplap/numerics/ode.hpp"
#include "hplap/params.hpp"
#include "hplap/specfun.hpp"

namespace hplap::prufer {

// The radial equation -r^{1-N}(r^{N-1}|u'|^{p-2}u')' = V u^{p-1},
// V = mu/r^p + eps/(r^p log^m r), in generalized polar coordinates
//   r^{N-1} u'|u'|^{p-2} = rho S'|S'|^{p-2},   Q^{(p-1)/p} u^{p-1} = rho S^{p-1},
// with Q = V r^{p(N-1)/(p-1)} and t = log r as the independent variable.

struct PruferRates {
  double dpsi_dt = 0.0;
  double dlogrho_dt = 0.0;
};

/// Throws NonpositivePotential when r^p V(r) <= 0 at r = e^t.
PruferRates prufer_rhs(const ProblemParams& params, const specfun::GenSine& sine, double t,
                       double psi);

/// log Q(e^t).
double log_q(const ProblemParams& params, double t);

/// log u reconstructed from (psi, log rho).
double reconstruct_log_u(const ProblemParams& params, const specfun::GenSine& sine, double t,
                         double psi, double log_rho);

struct PruferFixedPoints {
  double psi_minus = 0.0;
  double psi_plus = 0.0;  // the attracting limit of psi
  double psi_star = 0.0;  // (pi/4)_p for p > N, (3 pi/4)_p for p < N
};

/// Zeros of the autonomous angular field. Two regimes:
///   eps = 0, 0 < mu <= C_H, p != N: angles of the power solutions r^gamma_+-;
///   p = N, mu = 0, 0 < eps <= C*: angles of log^beta_+- r (angular field is F(psi)/t).
/// Throws DomainError otherwise.
PruferFixedPoints fixed_points(const ProblemParams& params, const specfun::GenSine& sine);

struct PruferState {
  double t = 0.0;
  double psi = 0.0;
  double log_rho = 0.0;
  double log_u = 0.0;
};

struct IntegrationOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  std::size_t max_steps = 2000000;
};

/// Large sub-solution vanishing at r = R = e^{t0}: psi(t0) = 0, log rho(t0) = 0.
///
/// For mu <= 0 and eps = 0 the potential is not positive and the closed forms
/// are returned instead (psi and log_rho are NaN there).
class LargeSubsolution {
 public:
  enum class ClosedForm { None, PowerPlus, HarmonicDecay, Logarithm };

  bool closed_form() const noexcept { return kind_ != ClosedForm::None; }
  ClosedForm kind() const noexcept { return kind_; }
  double t0() const noexcept { return t0_; }
  double t_end() const noexcept { return t_end_; }
  /// Accepted integrator steps, or a uniform grid for closed forms.
  const std::vector<PruferState>& states() const noexcept { return states_; }
  /// Dense evaluation inside [t0, t_end].
  PruferState at(double t) const;

  friend LargeSubsolution integrate_large_subsolution(const ProblemParams&,
                                                      const specfun::GenSine&, double, double,
                                                      const IntegrationOptions&);

 private:
  ProblemParams params_;
  const specfun::GenSine* sine_ = nullptr;
  ClosedForm kind_ = ClosedForm::None;
  double exponent_ = 0.0;
  double t0_ = 0.0;
  double t_end_ = 0.0;
  std::vector<PruferState> states_;
  numerics::Trajectory traj_{2};
};

/// `sine` must outlive the result.
LargeSubsolution integrate_large_subsolution(const ProblemParams& params,
                                             const specfun::GenSine& sine, double t0,
                                             double t_end, const IntegrationOptions& opt = {});

/// Normalized residual of the radial equation for the reconstructed u at t,
/// i.e. the left-hand side times r^p/u^{p-1}. u' and u'' come from the Prufer
/// right-hand side, so this checks the transformation algebra end to end.
double reconstruction_residual(const LargeSubsolution& sol, const ProblemParams& params,
                               const specfun::GenSine& sine, double t);

enum class AsymptoticCase {
  PowerGrowth,        // mu < C_H: u ~ r^{gamma+}
  CriticalHardy,      // mu = C_H, eps = 0, p != N: u ~ r^{gamma*} (log r)^{2/p}
  CriticalDimension,  // p = N, mu = 0, eps in (0, C*): u ~ (log r)^{beta+}
  LogPerturbed,       // mu = C_H, eps in (0, C*), p != N: u ~ r^{gamma*} (log r)^{beta+ +- delta}
};

std::string_view to_string(AsymptoticCase c) noexcept;

struct AsymptoticFit {
  std::string quantity;
  double t_lo = 0.0;
  double t_hi = 0.0;
  double fitted_exponent = 0.0;
  double predicted_exponent = 0.0;
  double rel_err = 0.0;  // |fitted - predicted| / max(1, |predicted|)
};

/// Least-squares slopes on [t_lo, t_hi] (default [t_end/2, t_end]). Throws
/// WindowTooShort when the window is empty or outside the integrated range.
std::vector<AsymptoticFit> fit_asymptotics(const LargeSubsolution& sol,
                                           const ProblemParams& params, AsymptoticCase which,
                                           double t_lo = -1.0, double t_hi = -1.0);

enum class PerturbationLaw {
  Exponential,  // omega ~ r^{-(gamma+ p + N - p)}
  InverseLog,   // omega ~ c / log r
  LogPower,     // omega ~ (log r)^{N(1-beta+) - 1}
};

std::string_view to_string(PerturbationLaw c) noexcept;

struct PerturbationFit {
  PerturbationLaw law = PerturbationLaw::Exponential;
  double psi_limit = 0.0;
  double t_lo = 0.0;
  double t_hi = 0.0;
  /// Exponential: slope of log|omega| vs t. LogPower: slope vs log t.
  /// InverseLog: omega(t_end) * t_end.
  double fitted = 0.0;
  double predicted = 0.0;
  double rel_err = 0.0;
};

/// Throws NotConverged when fewer than 8 steps lie in the linearization regime.
PerturbationFit perturbation_rate(const LargeSubsolution& sol, const ProblemParams& params,
                                  const specfun::GenSine& sine, PerturbationLaw law);

/// Comparison angle psi_beta(t) for u = r^{gamma*} (log r)^beta in the
/// eps-perturbed critical case, and its t-derivative.
struct ComparisonAngle {
  double psi = 0.0;
  double dpsi_dt = 0.0;
  double residual = 0.0;  // dpsi_dt - (angular field at psi)
};

ComparisonAngle comparison_angle(const ProblemParams& params, const specfun::GenSine& sine,
                                 double beta, double t);

struct SandwichReport {
  double delta = 0.0;
  double beta_plus = 0.0;
  double t_delta = 0.0;  // log of the scanned radius beyond which the comparison holds
  double t_end = 0.0;
  std::size_t steps = 0;
  bool holds = false;
  double min_lower_margin = 0.0;  // min over steps of psi - psi_B
  double min_upper_margin = 0.0;  // min over steps of psi_b - psi
  double psi_limit = 0.0;         // (pi/4)_p or its complement
  double psi_end = 0.0;
  AsymptoticFit fit;              // log(u r^{-gamma*}) against log log r
};

/// Throws DeltaOutOfRange unless 0 < delta < min(beta+ - 1/p, 2/p - beta+).
SandwichReport eps_sandwich_run(const ProblemParams& params, const specfun::GenSine& sine,
                                double delta, double t_end = 1e4,
                                const IntegrationOptions& opt = {});

}  // namespace hplap::prufer
