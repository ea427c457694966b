#pragma once

#include <cstddef>
#include <vector>

#include "hplap/numerics/roots.hpp"

namespace hplap::numerics {

struct QuadOptions {
  double abs_tol = 1e-12;
  double rel_tol = 0.0;
  std::size_t max_intervals = 4000;
};

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  std::size_t intervals = 0;
};

/// Globally adaptive Gauss-Kronrod (7-15) quadrature on a finite interval.
/// Stops when error <= max(abs_tol, rel_tol |value|); throws
/// Error(MaxRefinementExceeded) when the interval budget runs out first.
QuadResult integrate_gk(const ScalarFn& f, double a, double b, const QuadOptions& options);

/// Shorthand with an absolute tolerance.
double quad_adaptive(const ScalarFn& f, double a, double b, double tol);

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
GaussRule gauss_legendre(std::size_t n);

}  // namespace hplap::numerics
