#include "hplap/numerics/roots.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "hplap/error.hpp"

namespace hplap::numerics {

namespace {
bool opposite_or_zero(double a, double b) {
  return (a <= 0.0 && b >= 0.0) || (a >= 0.0 && b <= 0.0);
}
}  // namespace

Bracket make_bracket(const ScalarFn& f, double lo, double hi) {
  if (!(lo < hi)) {
    throw Error(Errc::InvalidBracket, "bracket requires lo < hi");
  }
  const double f_lo = f(lo);
  const double f_hi = f(hi);
  if (std::isnan(f_lo) || std::isnan(f_hi) || !opposite_or_zero(f_lo, f_hi)) {
    throw Error(Errc::InvalidBracket, "no sign change on [" + std::to_string(lo) + ", " +
                                          std::to_string(hi) + "]");
  }
  return {lo, hi, f_lo, f_hi};
}

Bracket expand_bracket(const ScalarFn& f, double lo, double hi, double factor,
                       int max_expansions) {
  if (!(lo < hi)) {
    throw Error(Errc::InvalidBracket, "bracket requires lo < hi");
  }
  double f_lo = f(lo);
  double f_hi = f(hi);
  for (int k = 0; k < max_expansions; ++k) {
    if (opposite_or_zero(f_lo, f_hi)) {
      return {lo, hi, f_lo, f_hi};
    }
    const double mid = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo) * factor;
    lo = mid - half;
    hi = mid + half;
    f_lo = f(lo);
    f_hi = f(hi);
  }
  throw Error(Errc::InvalidBracket, "bracket expansion failed");
}

// Brent's zeroin with the usual safeguards.
double find_root(const ScalarFn& f, const Bracket& bracket, double tol) {
  if (!(bracket.lo < bracket.hi) || !opposite_or_zero(bracket.f_lo, bracket.f_hi)) {
    throw Error(Errc::InvalidBracket, "invalid bracket passed to find_root");
  }
  constexpr double eps = std::numeric_limits<double>::epsilon();

  double a = bracket.lo;
  double b = bracket.hi;
  double fa = bracket.f_lo;
  double fb = bracket.f_hi;
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;

  double c = a;
  double fc = fa;
  double d = b - a;
  double e = d;

  for (int iter = 0; iter < 500; ++iter) {
    if ((fb > 0.0) == (fc > 0.0)) {
      c = a;
      fc = fa;
      d = b - a;
      e = d;
    }
    if (std::fabs(fc) < std::fabs(fb)) {
      a = b;
      b = c;
      c = a;
      fa = fb;
      fb = fc;
      fc = fa;
    }
    const double tol_act = 2.0 * eps * std::fabs(b) + 0.5 * tol;
    const double m = 0.5 * (c - b);
    if (std::fabs(m) <= tol_act || fb == 0.0 || std::fabs(fb) <= tol) {
      return b;
    }
    if (std::fabs(e) >= tol_act && std::fabs(fa) > std::fabs(fb)) {
      double p;
      double q;
      const double s = fb / fa;
      if (a == c) {
        p = 2.0 * m * s;
        q = 1.0 - s;
      } else {
        const double qa = fa / fc;
        const double r = fb / fc;
        p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
        q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) {
        q = -q;
      } else {
        p = -p;
      }
      if (2.0 * p < std::min(3.0 * m * q - std::fabs(tol_act * q), std::fabs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = m;
        e = m;
      }
    } else {
      d = m;
      e = m;
    }
    a = b;
    fa = fb;
    b += (std::fabs(d) > tol_act) ? d : (m > 0.0 ? tol_act : -tol_act);
    fb = f(b);
  }
  return b;
}

}  // namespace hplap::numerics
