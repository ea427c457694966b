#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "hplap/barriers.hpp"
#include "hplap/numerics/dual2.hpp"
#include "hplap/params.hpp"

namespace hplap::hardy {

/// Radial function, linear in r between increasing nodes and zero at both ends.
///
/// Integrals are radial: the sphere area |S^{N-1}| is left out everywhere.
struct RadialTestFunction {
  std::vector<double> r;
  std::vector<double> values;

  /// Throws DomainError unless nodes increase, values are finite and vanish at the ends.
  void validate() const;
  std::size_t cells() const noexcept { return r.empty() ? 0 : r.size() - 1; }
  double slope(std::size_t cell) const {
    return (values[cell + 1] - values[cell]) / (r[cell + 1] - r[cell]);
  }

  /// n + 1 geometric nodes on [rho_in, R_out]; f is sampled at interior nodes.
  static RadialTestFunction sample(const std::function<double(double)>& f, double rho_in,
                                   double R_out, std::size_t n);
  /// Hat with apex at the geometric midpoint of [a, b], n cells.
  static RadialTestFunction hat(double a, double b, std::size_t n = 64);
};

std::vector<double> log_spaced(double a, double b, std::size_t n);

struct FormEvaluation {
  double dirichlet = 0.0;   // int |v'|^p r^{N-1}
  double hardy_term = 0.0;  // mu int |v|^p r^{N-1-p}
  double log_term = 0.0;    // eps int |v|^p r^{N-1-p} / log^m r
  double total = 0.0;
};

/// Dirichlet part exact per cell, the potential terms by adaptive quadrature.
/// Throws DomainError when eps != 0 and the support reaches r <= 1.
FormEvaluation energy_form(const RadialTestFunction& v, const ProblemParams& params);

struct RayleighOptions {
  std::size_t max_iterations = 2000;
  double tol = 1e-11;  // relative change of the quotient
};

struct RayleighResult {
  double quotient = 0.0;
  RadialTestFunction minimizer;
  std::size_t iterations = 0;
};

/// Minimum of int |v'|^p r^{N-1} / int |v|^p r^{N-1-p} over piecewise-linear v on
/// n_grid geometric cells of [rho_in, R_out], by nonlinear inverse iteration.
/// Throws ConvergenceFailure when the quotient has not settled after max_iterations.
RayleighResult rayleigh_min(double p, int N, double rho_in, double R_out, std::size_t n_grid,
                            const RayleighOptions& options = {});

double rayleigh_quotient(const RadialTestFunction& v, double p, int N);

struct HardyRadius {
  double log_rho = 0.0;
  barriers::RadialProfile profile;  // positive super-solution on |x| > rho
};

/// Scans rho = e^{2^k} until an explicit super-solution of the critical equation
/// (mu = C_H, eps = C*) keeps its sign on [log rho, 4096]. Throws NotConverged.
HardyRadius improved_hardy_radius(double p, int N);

struct HardyMargin {
  double margin = 0.0;  // E_{C_H, C*}(v)
  double scale = 0.0;   // Dirichlet part, for relative tolerances
};

/// Throws DomainError when v is not supported in |x| >= rho.
HardyMargin improved_hardy_check(double p, int N, double rho, const RadialTestFunction& v);

/// Cutoff theta: linear ramp from 0 to 1 on [3 rho/2, 2 rho], 1 up to R, then
/// log(R^2/r)/log R down to 0 at R^2. Radii as logs.
struct CutoffFamily {
  double log_rho = 3.0;
  double log_R = 10.0;
  double alpha = 1.0;
};

/// theta and d theta/dt at t = log r.
numerics::Dual2 cutoff(const CutoffFamily& family, double t);

/// E_{mu,eps}(theta^alpha phi), by quadrature of the Bregman form of the density
/// (the tangent term at gamma* integrates to zero), so no cancellation occurs.
double family_energy(const barriers::RadialProfile& phi, const CutoffFamily& family,
                     const ProblemParams& params);

enum class SharpnessCase { EpsAboveCstar, MuAboveCH };

std::string_view to_string(SharpnessCase c) noexcept;

struct SharpnessMember {
  double log_R = 0.0;
  double energy = 0.0;
};

struct SharpnessReport {
  SharpnessCase which = SharpnessCase::MuAboveCH;
  ProblemParams params;
  barriers::RadialProfile profile;
  CutoffFamily family;  // log_R of the last member
  std::vector<SharpnessMember> members;
  bool strictly_decreasing = false;
  /// Predicted growth of -E: log R (mu case) or (log log R)^{tau p + 1} (eps case).
  double growth_exponent = 0.0;
  /// -E divided by the predicted growth variable at the last member.
  double growth_ratio = 0.0;
};

/// Default tau for the eps family, inside (-1/p, 0).
double default_tau(double p);

/// Evaluates the cutoff family for each log R. excess is added to C* (eps case)
/// or C_H (mu case).
SharpnessReport sharpness_family(double p, int N, SharpnessCase which,
                                 const std::vector<double>& log_R, double excess = 0.1,
                                 std::optional<double> tau = std::nullopt);

struct PiconePoint {
  double L = 0.0;
  double R = 0.0;
  double scale = 0.0;
};

/// L and R of the Picone identity for radial w, phi given as (value, d/dr) pairs;
/// R differentiates w^p / phi^{p-1} through the dual numbers.
PiconePoint picone_at(numerics::Dual2 w, numerics::Dual2 phi, double p);

struct PiconeReport {
  std::size_t samples = 0;
  double max_violation = 0.0;  // max over samples of max(|L-R|, -L) / scale
  double max_difference = 0.0;
  double min_L = 0.0;          // relative to scale
};

/// Samples cell interiors of w; phi must be positive there.
PiconeReport picone_check(const RadialTestFunction& w, const barriers::RadialProfile& phi,
                          double p, std::size_t n_samples);

struct NonexistenceWitness {
  SharpnessCase family_case = SharpnessCase::MuAboveCH;
  barriers::RadialProfile profile;  // scaled so that the energy is -1
  CutoffFamily family;
  double energy = 0.0;              // before scaling
  /// Grid version of theta^alpha phi when R^2 is representable, with its energy.
  std::optional<RadialTestFunction> discretized;
  double discretized_energy = 0.0;
};

/// Searches both cutoff families over growing R for a negative form value.
std::optional<NonexistenceWitness> nonexistence_witness(double p, int N, double mu, double eps);

/// Random piecewise-linear test functions on [a, b] with zero ends.
RadialTestFunction random_test_function(double a, double b, std::size_t n, std::uint64_t seed);

}  // namespace hplap::hardy
