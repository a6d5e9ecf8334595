#pragma once

#include <algorithm>
#include <cmath>

#include "encdec/common.hpp"
#include "encdec/theory/critical.hpp"

namespace encdec::theory {

// Large-N prefactors of entropies in units of the relevant region size. Each
// is a clamp to [0, 1] of an expression linear in log2 cos(alpha/2) or
// log2(4 - 3 lambda); q = inf is the limit q/(q-1) -> 1.

namespace detail {

inline void check_q(double q) { encdec::detail::require(q > 1.0, "slope: renyi index must be > 1"); }

/// q / (q - 1), with the q = inf limit.
inline double q_ratio(double q) { return std::isinf(q) ? 1.0 : q / (q - 1); }

/// 1 / q, with the q = inf limit.
inline double inv_q(double q) { return std::isinf(q) ? 0.0 : 1.0 / q; }

inline double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

inline double log2_cos_half(double alpha) { return std::log2(std::cos(alpha / 2)); }

inline void check_alpha(double alpha) {
  encdec::detail::require(alpha >= 0.0 && alpha < std::numbers::pi, "slope: alpha outside [0, pi)");
}

}  // namespace detail

//------------------------------------------------------------------------------
// Logical register
//------------------------------------------------------------------------------

/// Entanglement-entropy prefactor S_q(X1) / |X1| for |X1| = r1 N:
/// 2q (log2 cos(alpha/2) + (1-r)/2) / ((1-q) r1).
inline double slope_entanglement_logical(double q, double r, double r1, double alpha) {
  detail::check_q(q);
  check_rate(r);
  encdec::detail::require(r1 > 0.0 && r1 <= r / 2 + 1e-15, "slope_entanglement_logical: need 0 < r1 <= r/2");
  detail::check_alpha(alpha);
  return detail::clamp01(-2 * detail::q_ratio(q) * (detail::log2_cos_half(alpha) + (1 - r) / 2) / r1);
}

/// Angle where the entanglement prefactor reaches 1:
/// 2 arccos(2^{(q(r - r1 - 1) + r1) / (2q)}).
inline double breakpoint_entanglement_logical(double q, double r, double r1) {
  detail::check_q(q);
  const double e = (r - r1 - 1) / 2 + r1 * detail::inv_q(q) / 2;
  return 2 * std::acos(std::exp2(e));
}

/// Thermodynamic-entropy prefactor S_q(rho_X) / k:
/// q (r + 1 - log2(4 - 3 lambda)) / ((q - 1) r).
inline double slope_thermo_logical(double q, double r, double lambda) {
  detail::check_q(q);
  check_rate(r);
  encdec::detail::require(r > 0.0, "slope_thermo_logical: need r > 0");
  encdec::detail::require(lambda >= 0.0 && lambda <= 1.0, "slope_thermo_logical: lambda outside [0,1]");
  return detail::clamp01(detail::q_ratio(q) * (r + 1 - std::log2(4 - 3 * lambda)) / r);
}

/// lambda where the thermodynamic prefactor reaches 1: (4 - 2^{(q+r)/q}) / 3.
inline double breakpoint_thermo_logical(double q, double r) {
  detail::check_q(q);
  return (4 - std::exp2(1 + r * detail::inv_q(q))) / 3;
}

/// Multifractal dimension of the decoded logical state's diagonal:
/// q ((r - 1) - log2 cos^2(alpha/2)) / ((q - 1) r).
inline double dimension_participation_logical(double q, double r, double alpha) {
  detail::check_q(q);
  check_rate(r);
  encdec::detail::require(r > 0.0, "dimension_participation_logical: need r > 0");
  detail::check_alpha(alpha);
  return detail::clamp01(detail::q_ratio(q) * ((r - 1) - 2 * detail::log2_cos_half(alpha)) / r);
}

/// Angle where D_q reaches 1: 2 arccos(2^{-(q - r)/(2q)}).
inline double breakpoint_participation_logical(double q, double r) {
  detail::check_q(q);
  return 2 * std::acos(std::exp2(-(1 - r * detail::inv_q(q)) / 2));
}

//------------------------------------------------------------------------------
// Code space (state after the error, before decoding)
//------------------------------------------------------------------------------

struct CodespaceSlopes {
  double entanglement;              // half-cut S_q / (r N / 2) prefactor
  double participation;             // D_q of the code-space diagonal
  double entanglement_breakpoint;   // 2 arccos(2^{r/(2q) - r/2})
  double participation_breakpoint;  // from the D_q expression: 2 arccos(2^{-(q-1)/(2q)})
};

inline CodespaceSlopes codespace_slopes(double q, double r, double alpha) {
  detail::check_q(q);
  check_rate(r);
  encdec::detail::require(r > 0.0, "codespace_slopes: need r > 0");
  detail::check_alpha(alpha);
  const double l = detail::log2_cos_half(alpha);
  CodespaceSlopes s{};
  s.entanglement = detail::clamp01(-2 * detail::q_ratio(q) * l / r);
  s.participation = detail::clamp01(-2 * detail::q_ratio(q) * l);
  s.entanglement_breakpoint = 2 * std::acos(std::exp2(r * detail::inv_q(q) / 2 - r / 2));
  s.participation_breakpoint = 2 * std::acos(std::exp2(-(1 - detail::inv_q(q)) / 2));
  return s;
}

/// The r-dependent code-space participation breakpoint as printed,
/// 2 arccos(2^{-(q-1) r / (2q)}); kept for comparison only.
inline double codespace_participation_breakpoint_printed(double q, double r) {
  detail::check_q(q);
  return 2 * std::acos(std::exp2(-(1 - detail::inv_q(q)) * r / 2));
}

}  // namespace encdec::theory
