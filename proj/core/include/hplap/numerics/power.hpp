#pragma once

#include <cmath>

namespace hplap::numerics {

/// sign(x) |x|^s, finite at x = 0 for s > 0.
inline double signed_pow(double x, double s) {
  return std::copysign(std::pow(std::fabs(x), s), x);
}

/// |a + b|^p - |a|^p - p |a|^{p-2} a b without cancellation when |b| << |a|.
/// This is the remainder of the convex function |.|^p past its tangent at a.
inline double bregman_pow(double a, double b, double p) {
  if (a == 0.0) return std::pow(std::fabs(b), p);
  const double x = b / a;
  const double scale = std::pow(std::fabs(a), p);
  if (std::fabs(x) < 1e-2) {
    // (1+x)^p - 1 - p x as a binomial series.
    double coef = p * (p - 1.0) / 2.0;
    double xk = x * x;
    double sum = 0.0;
    for (int k = 2; k < 12; ++k) {
      sum += coef * xk;
      coef *= (p - k) / (k + 1.0);
      xk *= x;
    }
    return scale * sum;
  }
  if (x > -1.0) return scale * (std::expm1(p * std::log1p(x)) - p * x);
  return std::pow(std::fabs(a + b), p) - scale - p * signed_pow(a, p - 1.0) * b;
}

}  // namespace hplap::numerics
