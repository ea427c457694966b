#pragma once

#include <string_view>
#include <vector>

#include "hplap/numerics/dual2.hpp"
#include "hplap/params.hpp"

namespace hplap::barriers {

/// u(r) = scale r^gamma (log r)^beta (log log r)^tau.
///
/// Everything here is parametrised by t = log r, since the interesting radii
/// (r = e^4096 and beyond) are not representable.
struct RadialProfile {
  double gamma = 0.0;
  double beta = 0.0;
  double tau = 0.0;
  double scale = 1.0;
};

/// Infimum of admissible t: e when tau != 0, 1 when only beta != 0, -inf otherwise.
double domain_min_t(const RadialProfile& profile);

/// log u as a function of t, carried with its first two t-derivatives.
numerics::Dual2 log_profile(const RadialProfile& profile, double t);

struct ResidualPoint {
  /// (-Delta_p u - mu u^{p-1}/r^p - eps u^{p-1}/(r^p log^m r)) * r^p / u^{p-1}.
  double normalized = 0.0;
  /// log(u^{p-1}/r^p); residual = normalized * exp(log_weight).
  double log_weight = 0.0;
  /// Largest magnitude among the terms summed into `normalized`.
  double magnitude = 0.0;
};

/// Throws DomainError outside the profile domain, or where u' = 0 makes the
/// operator singular.
ResidualPoint residual_at(const RadialProfile& profile, const ProblemParams& params, double t);

/// Full left-hand side at r = e^t (may under/overflow for extreme t).
double radial_p_laplace_residual(const RadialProfile& profile, const ProblemParams& params,
                                 double t);

enum class BarrierKind { SubSolution, SuperSolution, Indeterminate };

std::string_view to_string(BarrierKind k) noexcept;

/// Relative floor for sign decisions.
inline constexpr double kSignTol = 1e-13;

struct ResidualReport {
  std::vector<double> t;           // log r samples
  std::vector<double> residual;    // unnormalized left-hand side
  std::vector<double> normalized;  // residual * r^p / u^{p-1}
  std::vector<double> tol;         // kSignTol * local magnitude
  BarrierKind classification = BarrierKind::Indeterminate;
  double threshold_t = 0.0;        // log of the threshold radius
};

/// Samples the residual on a geometric t-grid in [t_min, t_max] and classifies
/// by uniform sign beyond the first threshold in {t_min} U {2^k : k = 2..12}
/// that leaves at least four samples.
ResidualReport classify_barrier(const RadialProfile& profile, const ProblemParams& params,
                                double t_min, double t_max, std::size_t n_samples = 400);

/// Truncated large-r expansion of -Delta_p u * r^p/u^{p-1} for
/// u = r^{gamma*} (log r)^beta (log log r)^tau. Needs p != N.
double expansion_value(const RadialProfile& profile, double p, int N, double t);

/// (-Delta_p u * r^p / u^{p-1}) - expansion_value. Needs p != N and profile.gamma = gamma*.
double expansion_check(const RadialProfile& profile, const ProblemParams& params, double t);

struct ExistenceCertificate {
  RadialProfile profile;
  double eps_margin = 0.0;  // eps of the linear inequality used (0 for pure powers)
  double threshold_t = 0.0;
  std::vector<double> t;
  std::vector<double> nonlinear_normalized;  // (LHS - C u^q / r^sigma) * r^p / u^{p-1}
};

/// Explicit super-solution of the nonlinear equation in the existence region.
/// Throws NotInExistenceRegion otherwise.
ExistenceCertificate existence_supersolution(const ProblemParams& params, double t_max = 4096.0,
                                             std::size_t n_samples = 300);

/// Nonlinear normalized residual used by existence_supersolution.
double nonlinear_normalized(const RadialProfile& profile, const ProblemParams& params, double t);

enum class DecayCase { PowerBelowCritical, CriticalLog, CriticalDimension };

std::string_view to_string(DecayCase c) noexcept;

struct DecayReport {
  DecayCase which = DecayCase::PowerBelowCritical;
  double alpha = 1.0;
  std::vector<double> log_R;
  std::vector<double> integral;
  /// Least-squares slope of log(integral) against log R (first case) or
  /// against log log R (the two logarithmic cases).
  double fitted_slope = 0.0;
  /// The corresponding exponent of the analytic bound.
  double bound_slope = 0.0;
  bool decreasing = false;
};

/// Integral over R < |x| < R^2 of the Picone remainder R(theta_R^alpha v, v) for
/// the three profile shapes that satisfy the decay condition. Throws DomainError
/// when the profile matches none of them.
DecayReport condition_s_decay(const RadialProfile& profile, const ProblemParams& params,
                              const std::vector<double>& log_R);

/// Picone remainder density (per unit t, including v^p r^{N-p}) for
/// w = theta^alpha v with the outer cutoff theta = (2T - t)/T.
double picone_remainder_density(const RadialProfile& profile, double p, int N, double alpha,
                                double T, double t);

}  // namespace hplap::barriers
