#pragma once

#include <functional>

namespace hplap::numerics {

using ScalarFn = std::function<double(double)>;

/// Interval [lo, hi] on which f changes sign (or vanishes at an end).
struct Bracket {
  double lo = 0.0;
  double hi = 0.0;
  double f_lo = 0.0;
  double f_hi = 0.0;
};

/// Evaluates f at both ends and validates lo < hi, f(lo) f(hi) <= 0.
/// Throws Error(InvalidBracket) otherwise.
Bracket make_bracket(const ScalarFn& f, double lo, double hi);

/// Widens [lo, hi] geometrically about its midpoint until the sign changes.
/// Throws Error(InvalidBracket) after `max_expansions` attempts.
Bracket expand_bracket(const ScalarFn& f, double lo, double hi, double factor = 2.0,
                       int max_expansions = 60);

/// Brent's method (inverse quadratic interpolation, secant, bisection).
/// The returned x lies in [bracket.lo, bracket.hi] and satisfies |f(x)| <= tol
/// or the final enclosing interval has width <= tol.
double find_root(const ScalarFn& f, const Bracket& bracket, double tol);

}  // namespace hplap::numerics
