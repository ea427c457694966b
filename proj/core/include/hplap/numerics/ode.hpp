#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace hplap::numerics {

using OdeRhs = std::function<void(double t, std::span<const double> y, std::span<double> dydt)>;

struct OdeProblem {
  OdeRhs rhs;
  double t0 = 0.0;
  std::vector<double> y0;
  double t_end = 1.0;
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
};

struct OdeOptions {
  double h_init = 0.0;  // 0 selects an automatic first step
  double h_max = std::numeric_limits<double>::infinity();
  std::size_t max_steps = 2'000'000;
};

/// Accepted steps of an integration, states stored row-major.
class Trajectory {
 public:
  explicit Trajectory(std::size_t dim = 0) : dim_(dim) {}

  void push_back(double t, std::span<const double> y);

  std::size_t size() const noexcept { return t_.size(); }
  std::size_t dim() const noexcept { return dim_; }
  bool empty() const noexcept { return t_.empty(); }

  double t(std::size_t i) const { return t_[i]; }
  std::span<const double> y(std::size_t i) const {
    return {states_.data() + i * dim_, dim_};
  }
  double y(std::size_t i, std::size_t component) const { return states_[i * dim_ + component]; }

  const std::vector<double>& times() const noexcept { return t_; }

  /// Cubic Hermite interpolation of one component between accepted steps
  /// (uses the stored derivatives when available, else linear).
  double interpolate(double t, std::size_t component) const;

  void set_derivatives(std::vector<double> dydt) { dydt_ = std::move(dydt); }
  std::size_t rejected_steps = 0;
  std::size_t rhs_evaluations = 0;

 private:
  std::size_t dim_;
  std::vector<double> t_;
  std::vector<double> states_;
  std::vector<double> dydt_;
};

/// Adaptive Dormand-Prince 5(4) integration from t0 to t_end.
/// Throws Error(StepUnderflow) when the step collapses below the
/// machine-relative floor, Error(NotConverged) when max_steps is exceeded.
Trajectory integrate_ode(const OdeProblem& problem, const OdeOptions& options = {});

/// Classical fixed-step RK4; retained as an independent cross-check.
Trajectory integrate_rk4(const OdeProblem& problem, std::size_t steps);

}  // namespace hplap::numerics
