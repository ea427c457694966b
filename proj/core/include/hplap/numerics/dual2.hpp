#pragma once

#include <cmath>

#include "hplap/error.hpp"

namespace hplap::numerics {

/// Value with first and second derivative with respect to one scalar.
///
/// `nonsmooth` is raised when an abs-power |x|^s with s < 2 is evaluated at
/// x = 0; the second derivative is then reported as 0 by convention.
struct Dual2 {
  double value = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
  bool nonsmooth = false;

  constexpr Dual2() = default;
  constexpr Dual2(double v) : value(v) {}  // NOLINT(google-explicit-constructor)
  constexpr Dual2(double v, double g, double h, bool ns = false)
      : value(v), d1(g), d2(h), nonsmooth(ns) {}

  static constexpr Dual2 variable(double x) { return {x, 1.0, 0.0}; }
};

namespace detail {
// Applies f with f' and f'' at a.value through the chain rule.
constexpr Dual2 chain(const Dual2& a, double f, double fp, double fpp, bool ns = false) {
  return {f, fp * a.d1, fpp * a.d1 * a.d1 + fp * a.d2, a.nonsmooth || ns};
}
}  // namespace detail

constexpr Dual2 operator-(const Dual2& a) { return {-a.value, -a.d1, -a.d2, a.nonsmooth}; }

constexpr Dual2 operator+(const Dual2& a, const Dual2& b) {
  return {a.value + b.value, a.d1 + b.d1, a.d2 + b.d2, a.nonsmooth || b.nonsmooth};
}

constexpr Dual2 operator-(const Dual2& a, const Dual2& b) {
  return {a.value - b.value, a.d1 - b.d1, a.d2 - b.d2, a.nonsmooth || b.nonsmooth};
}

constexpr Dual2 operator*(const Dual2& a, const Dual2& b) {
  return {a.value * b.value, a.d1 * b.value + a.value * b.d1,
          a.d2 * b.value + 2.0 * a.d1 * b.d1 + a.value * b.d2, a.nonsmooth || b.nonsmooth};
}

constexpr Dual2 operator/(const Dual2& a, const Dual2& b) {
  const double inv = 1.0 / b.value;
  const double q = a.value * inv;
  const double q1 = (a.d1 - q * b.d1) * inv;
  const double q2 = (a.d2 - 2.0 * q1 * b.d1 - q * b.d2) * inv;
  return {q, q1, q2, a.nonsmooth || b.nonsmooth};
}

inline Dual2& operator+=(Dual2& a, const Dual2& b) { return a = a + b; }
inline Dual2& operator-=(Dual2& a, const Dual2& b) { return a = a - b; }
inline Dual2& operator*=(Dual2& a, const Dual2& b) { return a = a * b; }
inline Dual2& operator/=(Dual2& a, const Dual2& b) { return a = a / b; }

inline Dual2 exp(const Dual2& a) {
  const double e = std::exp(a.value);
  return detail::chain(a, e, e, e);
}

inline Dual2 log(const Dual2& a) {
  if (!(a.value > 0.0)) {
    throw Error(Errc::DomainError, "log of non-positive value");
  }
  const double inv = 1.0 / a.value;
  return detail::chain(a, std::log(a.value), inv, -inv * inv);
}

inline Dual2 sqrt(const Dual2& a) {
  if (a.value < 0.0) {
    throw Error(Errc::DomainError, "sqrt of negative value");
  }
  const double s = std::sqrt(a.value);
  return detail::chain(a, s, 0.5 / s, -0.25 / (s * a.value));
}

/// x^s for x > 0 (real exponent).
inline Dual2 pow(const Dual2& a, double s) {
  if (!(a.value > 0.0)) {
    throw Error(Errc::DomainError, "pow of non-positive base with real exponent");
  }
  const double v = std::pow(a.value, s);
  return detail::chain(a, v, s * v / a.value, s * (s - 1.0) * v / (a.value * a.value));
}

/// |x|^s, d/dx = s sign(x) |x|^(s-1).
inline Dual2 abs_pow(const Dual2& a, double s) {
  const double x = a.value;
  const double ax = std::fabs(x);
  if (ax == 0.0) {
    if (s > 1.0) {
      const bool ns = s < 2.0;
      const double fpp = (s == 2.0) ? 2.0 : 0.0;
      return detail::chain(a, 0.0, 0.0, fpp, ns);
    }
    if (s == 1.0) {
      return {0.0, 0.0, 0.0, true};
    }
    throw Error(Errc::DomainError, "abs_pow with exponent <= 1 at zero");
  }
  const double v = std::pow(ax, s);
  const double sgn = x > 0.0 ? 1.0 : -1.0;
  return detail::chain(a, v, s * sgn * v / ax, s * (s - 1.0) * v / (ax * ax));
}

/// Evaluates f and its first two derivatives at x.
template <class F>
Dual2 dual2_eval(F&& f, double x) {
  return f(Dual2::variable(x));
}

}  // namespace hplap::numerics
