#include "hplap/params.hpp"

#include <cmath>
#include <string>

#include "hplap/error.hpp"

namespace hplap {

void validate(const ProblemParams& params) {
  if (!(params.p > 1.0) || !std::isfinite(params.p)) {
    throw Error(Errc::ConfigError, "p must be > 1, got " + std::to_string(params.p));
  }
  if (params.N < 2) throw Error(Errc::ConfigError, "N must be >= 2");
  if (!(params.C > 0.0)) throw Error(Errc::ConfigError, "C must be > 0");
  if (!(params.eps >= 0.0)) throw Error(Errc::ConfigError, "eps must be >= 0");
  if (!std::isfinite(params.mu) || !std::isfinite(params.q) || !std::isfinite(params.sigma)) {
    throw Error(Errc::ConfigError, "mu, q and sigma must be finite");
  }
}

bool is_critical_dimension(double p, int N) noexcept {
  return std::fabs(p - static_cast<double>(N)) <= 1e-12;
}

}  // namespace hplap
