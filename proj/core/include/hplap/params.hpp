#pragma once

namespace hplap {

/// Parameters of -Delta_p u - mu/|x|^p u^{p-1} - eps/(|x|^p log^m |x|) u^{p-1} = C/|x|^sigma u^q
/// on an exterior domain. The log term only enters the linear analysis.
struct ProblemParams {
  double p = 2.0;
  int N = 3;
  double mu = 0.0;
  double eps = 0.0;
  double q = 1.0;
  double sigma = 0.0;
  double C = 1.0;
};

/// Throws ConfigError unless p > 1, N >= 2, C > 0 and eps >= 0.
void validate(const ProblemParams& params);

/// p == N up to 1e-12.
bool is_critical_dimension(double p, int N) noexcept;

}  // namespace hplap
