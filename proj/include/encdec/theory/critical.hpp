#pragma once

#include <cmath>
#include <numbers>
#include <string>

#include <boost/math/tools/roots.hpp>

#include "encdec/common.hpp"
#include "encdec/noise.hpp"
#include "encdec/theory/annealed.hpp"

namespace encdec::theory {

enum class CriticalSource { closed_form, transcendental_solve };

inline std::string to_string(CriticalSource s) {
  return s == CriticalSource::closed_form ? "closed_form" : "transcendental_solve";
}

struct CriticalPoint {
  ErrorKind kind;
  double rate;
  double value;
  CriticalSource source;
};

/// Which expression to use for the coherent critical angle. `consistent` is the
/// large-N limit of the annealed fidelity, 2 arccos(2^{(r-1)/2}); `printed` is
/// 2 arccos(2^{-r/2}). The two agree at r = 1/2.
enum class CriticalForm { consistent, printed };

inline void check_rate(double r) { encdec::detail::require(r >= 0.0 && r <= 1.0, "code rate outside [0,1]"); }

inline double critical_alpha_value(double r, CriticalForm form = CriticalForm::consistent) {
  check_rate(r);
  const double e = form == CriticalForm::consistent ? (r - 1) / 2 : -r / 2;
  return 2 * std::acos(std::exp2(e));
}

inline double critical_lambda_value(double r) {
  check_rate(r);
  return 4 * (1 - std::exp2(r - 1)) / 3;
}

inline CriticalPoint critical_alpha(double r, CriticalForm form = CriticalForm::consistent) {
  return {ErrorKind::coherent, r, critical_alpha_value(r, form), CriticalSource::closed_form};
}

inline CriticalPoint critical_lambda(double r) {
  return {ErrorKind::depolarizing, r, critical_lambda_value(r), CriticalSource::closed_form};
}

/// Strength at which the uniform annealed fidelity crosses 1/2 at finite N,
/// found by bracketing on [lo, hi] where the fidelity is monotone decreasing.
inline double half_crossing(ErrorKind kind, int n, int k, double lo, double hi) {
  auto f = [&](double s) {
    const double v = kind == ErrorKind::coherent ? annealed_fidelity_coherent(n, k, s)
                                                 : annealed_fidelity_depolarizing(n, k, s);
    return v - 0.5;
  };
  encdec::detail::require(f(lo) > 0 && f(hi) < 0, "half_crossing: fidelity does not cross 1/2 in bracket");
  std::uintmax_t iters = 200;
  const auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, boost::math::tools::eps_tolerance<double>(50), iters);
  return 0.5 * (a + b);
}

}  // namespace encdec::theory
