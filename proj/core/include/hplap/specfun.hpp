#pragma once

#include <cstddef>
#include <vector>

namespace hplap::specfun {

/// pi_p = 2 (p-1)^(1/p) pi / (p sin(pi/p)). Throws DomainError for p <= 1.
double pi_p(double p);

/// Half period pi_p/2 recomputed from the integral of 1/(1 - t^p/(p-1))^(1/p)
/// over [0, (p-1)^(1/p)], after a substitution that removes the endpoint
/// singularity. Independent of the closed form above.
double half_pi_p_by_quadrature(double p, double tol = 1e-14);

struct SineValue {
  double s = 0.0;       // S_p(psi)
  double sprime = 0.0;  // S_p'(psi)
};

/// Generalized sine S_p: the solution of |w'|^p + |w|^p/(p-1) = 1 with
/// w(0) = 0, w'(0) = 1, continued evenly about pi_p/2, oddly about pi_p and
/// 2 pi_p-periodically.
///
/// The quarter wave is tabulated in the variable s = (1 - S/a)^(1/q),
/// a = (p-1)^(1/p), q = p/(p-1), in which psi(s) is smooth up to the maximum.
/// S' is recovered from the first integral, so |S'|^p + |S|^p/(p-1) = 1 holds
/// to rounding everywhere.
class GenSine {
 public:
  static constexpr std::size_t kDefaultNodes = 2048;

  /// Throws DomainError for p <= 1 and BuildError when the tabulated half
  /// period disagrees with the closed form by more than 1e-9.
  static GenSine build(double p, double tol = 1e-14, std::size_t nodes = kDefaultNodes);

  double p() const noexcept { return p_; }
  double amplitude() const noexcept { return amp_; }
  double pi_p() const noexcept { return 2.0 * half_; }
  double half_period() const noexcept { return half_; }
  /// Half period as obtained by summing the table's cell integrals.
  double tabulated_half_period() const noexcept { return tab_half_; }
  std::size_t nodes() const noexcept { return psi_.size(); }

  SineValue eval(double psi) const;
  double s(double psi) const { return eval(psi).s; }
  double sprime(double psi) const { return eval(psi).sprime; }

  /// psi in [0, pi_p/2] with S_p(psi) = value (value clamped to [0, a]).
  double inverse_quarter(double value) const;

  /// psi in [0, pi_p) with S_p(psi) = value and sign(S_p'(psi)) = sign.
  double inverse_half(double value, double sprime_sign) const;

  /// |S'|^p computed without cancellation near the maximum.
  double sprime_pow_p(double psi) const;

 private:
  GenSine() = default;
  SineValue quarter(double psi) const;  // psi in [0, pi_p/2]

  double p_ = 2.0;
  double amp_ = 1.0;
  double q_ = 2.0;
  double half_ = 0.0;
  double tab_half_ = 0.0;
  // Nodes ordered by increasing psi (decreasing s).
  std::vector<double> psi_;
  std::vector<double> sv_;
  std::vector<double> dsdpsi_;
};

struct QuarterAngles {
  double quarter = 0.0;        // (pi/4)_p: S_p = S_p' = ((p-1)/p)^(1/p)
  double three_quarter = 0.0;  // pi_p - (pi/4)_p
};

QuarterAngles quarter_pi_p(const GenSine& gs);

}  // namespace hplap::specfun
