#pragma once

#include <cmath>
#include <optional>
#include <string>

#include <boost/math/tools/numerical_differentiation.hpp>

#include "encdec/common.hpp"
#include "encdec/theory/critical.hpp"
#include "encdec/theory/disorder.hpp"

namespace encdec::theory {

enum class ScalingKind { logistic_nu1, erf_nu2 };

inline std::string to_string(ScalingKind k) { return k == ScalingKind::logistic_nu1 ? "logistic_nu1" : "erf_nu2"; }

/// Default disordered-depolarizing constants at r = 1/2.
inline constexpr double kErfSlopeHalfRate = 0.8864;
inline constexpr double kErfWidthHalfRate = 0.3272;
inline constexpr double kErfCriticalHalfRate = 0.7332;

/// Finite-size scaling form F(N, s).
///  logistic_nu1: 1 / (1 + exp(N (s - s_c) / (4/3 - s_c)))
///  erf_nu2:      (1/2) (1 - erf(slope sqrt(N) (s - s_c) / (sqrt(2) width)))
/// Both equal 1/2 at s = s_c for every N.
class ScalingFunction {
 public:
  static ScalingFunction logistic_nu1(double critical) { return ScalingFunction(ScalingKind::logistic_nu1, critical, 0, 0); }

  static ScalingFunction logistic_nu1_for_rate(double r) { return logistic_nu1(critical_lambda_value(r)); }

  static ScalingFunction erf_nu2(std::optional<double> slope = std::nullopt, std::optional<double> width = std::nullopt,
                                 double critical = kErfCriticalHalfRate) {
    if (!slope || !width) throw InvalidArgument("erf_nu2: slope and width constants are required");
    encdec::detail::require(*width > 0, "erf_nu2: width must be > 0");
    return ScalingFunction(ScalingKind::erf_nu2, critical, *slope, *width);
  }

  static ScalingFunction erf_nu2_default() { return erf_nu2(kErfSlopeHalfRate, kErfWidthHalfRate, kErfCriticalHalfRate); }

  /// Constants computed for rate r: W_c from E[a] = r, slope = -dE[a]/dW at
  /// W_c, width = std of a at W_c.
  static ScalingFunction erf_nu2_computed(double r) {
    const double wc = solve_disordered_critical(ErrorKind::depolarizing_disordered, r).value;
    const double slope = -boost::math::differentiation::finite_difference_derivative(mean_rate_depolarizing, wc);
    return erf_nu2(slope, rate_spread_depolarizing(wc), wc);
  }

  ScalingKind kind() const { return kind_; }
  double critical() const { return critical_; }
  double slope() const { return slope_; }
  double width() const { return width_; }

  double operator()(double n, double s) const {
    if (kind_ == ScalingKind::logistic_nu1) return 1 / (1 + std::exp(n * (s - critical_) / (4.0 / 3 - critical_)));
    return 0.5 * (1 - std::erf(slope_ * std::sqrt(n) * (s - critical_) / (std::sqrt(2.0) * width_)));
  }

 private:
  ScalingFunction(ScalingKind k, double c, double s, double w) : kind_(k), critical_(c), slope_(s), width_(w) {}
  ScalingKind kind_;
  double critical_, slope_, width_;
};

}  // namespace encdec::theory
