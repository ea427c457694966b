#pragma once

#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "hplap/params.hpp"

namespace hplap::exponents {

struct HardyConstants {
  double C_H = 0.0;
  double C_star = 0.0;
  int m_star = 2;
};

HardyConstants hardy_constants(double p, int N);

/// (p - N)/p.
double gamma_star(double p, int N);

/// The map gamma -> -gamma |gamma|^{p-2} (gamma (p-1) + N - p), whose level set at mu
/// gives the exponents of the power solutions r^gamma.
double gamma_map(double p, int N, double gamma);

/// |mu - C_H| at or below this (relative to max(1, C_H)) counts as mu = C_H.
inline constexpr double kDoubleRootTol = 1e-12;

bool mu_is_critical(double p, int N, double mu);

struct GammaRoots {
  double minus = 0.0;
  double plus = 0.0;
};

/// Throws NoRealRoots when mu > C_H.
GammaRoots gamma_roots(double p, int N, double mu);

struct BetaRoots {
  double minus = 0.0;
  double plus = 0.0;
};

/// Roots of the log-correction equation. Throws EpsOutOfRange outside [0, C*].
BetaRoots beta_roots(double p, int N, double eps);

/// Left-hand side of the beta equation: 1/2 |gamma*|^{p-2} (p-1)(2 - beta p) beta for p != N,
/// beta^{N-1} (1 - beta)(N - 1) for p = N.
double beta_map(double p, int N, double beta);

struct ExponentData {
  HardyConstants constants;
  double gamma_minus = 0.0;
  double gamma_star = 0.0;
  double gamma_plus = 0.0;
  std::optional<double> beta_minus;
  std::optional<double> beta_plus;
};

/// Everything above in one go. gamma roots require mu <= C_H.
ExponentData exponent_data(double p, int N, double mu, double eps);

/// min over the two roots of gamma (q - p + 1) + p.
double critical_line(double p, int N, double mu, double q);

enum class Verdict { Nonexistence, Existence, ExcludedPoint, NonexistenceAllQ };

std::string_view to_string(Verdict v) noexcept;

struct Classification {
  Verdict verdict = Verdict::Existence;
  std::optional<double> lambda_star;  // absent when mu > C_H
};

Classification classify(const ProblemParams& params);

/// (sigma - p)/(q - (p - 1)). Throws HomogeneousCase when q = p - 1.
double nonlinear_exponent(const ProblemParams& params);

struct RegionVertex {
  double q = 0.0;
  double lambda_star = 0.0;
};

/// Samples of the critical line on [q_min, q_max] with step `step`, plus the kink
/// (p-1, p) inserted as an exact vertex.
std::vector<RegionVertex> region_polyline(double p, int N, double mu, double q_min, double q_max,
                                          double step);

}  // namespace hplap::exponents
