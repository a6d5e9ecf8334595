#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/tools/roots.hpp>

#include "encdec/common.hpp"
#include "encdec/theory/critical.hpp"

namespace encdec::theory {

// Per-site large-N growth rate of the no-error weight against the code rate:
// a = log2(2 - 3 lambda/2) (depolarizing) or log2(2 cos^2(alpha/2)) (coherent).
// A disordered register is error-resilient when E[a] > r.

inline constexpr double kQuadratureTol = 1e-10;

/// E[log2(2 - 3 lambda/2)], lambda ~ Uniform[0, W].
inline double mean_rate_depolarizing(double width) {
  encdec::detail::require(width >= 0.0 && width <= 1.0, "mean_rate_depolarizing: width outside [0,1]");
  if (width == 0.0) return 1.0;
  auto f = [](double l) { return std::log2(2 - 1.5 * l); };
  double err = 0;
  const double integral = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, 0.0, width, 15, kQuadratureTol, &err);
  return integral / width;
}

/// E[log2(1 + cos alpha)], alpha ~ Normal(0, W^2). The integrand has log
/// singularities at odd multiples of pi; the line is split at those points and
/// each piece integrated with tanh-sinh, which hands the integrand the exact
/// distance t to the nearest endpoint so that 1 + cos = 2 sin^2(t/2) keeps full
/// precision next to a singular endpoint.
inline double mean_rate_coherent(double width) {
  encdec::detail::require(width >= 0.0 && std::isfinite(width), "mean_rate_coherent: width must be >= 0");
  if (width == 0.0) return 1.0;
  constexpr double pi = std::numbers::pi;
  const double norm = 1 / (width * std::sqrt(2 * pi));
  boost::math::quadrature::tanh_sinh<double> ts;
  auto piece = [&](double lo, double hi, bool lo_singular, bool hi_singular) {
    const double mid = 0.5 * (lo + hi);
    auto f = [&](double a, double t) {
      const bool singular_end = a < mid ? lo_singular : hi_singular;
      double v;
      if (singular_end && std::abs(t) < pi / 2) {
        const double s = std::sin(std::abs(t) / 2);
        v = 2 * s * s;
      } else {
        v = 1 + std::cos(a);
      }
      if (v <= 0) return 0.0;
      return std::log2(v) * norm * std::exp(-a * a / (2 * width * width));
    };
    return ts.integrate(f, lo, hi, kQuadratureTol);
  };
  // Central segment [-pi, pi] split around the Gaussian bulk, then segments
  // [(2j-1) pi, (2j+1) pi], j >= 1, counted twice by symmetry.
  const double m = std::min(12 * width, pi / 2);
  double total = piece(-m, m, false, false) + 2 * piece(m, pi, false, true);
  for (int j = 1; (2 * j - 1) * pi < 12 * width; ++j) total += 2 * piece((2 * j - 1) * pi, (2 * j + 1) * pi, true, true);
  return total;
}

/// Same expectation from the Fourier series
/// log|cos(x/2)| = -ln 2 - sum_k (-1)^k cos(k x) / k and E[cos k alpha] = exp(-k^2 W^2 / 2).
inline double mean_rate_coherent_series(double width) {
  encdec::detail::require(width > 0.0, "mean_rate_coherent_series: width must be > 0");
  double acc = 0;
  for (int k = 1; k < 100000; ++k) {
    const double term = std::exp(-0.5 * k * k * width * width) / k;
    acc += (k % 2 ? -term : term);
    if (term < 1e-18) break;
  }
  return 1 + 2 * (-std::numbers::ln2 - acc) / std::numbers::ln2;
}

/// Standard deviation of the per-site rate at width W (the Gaussian width
/// constant of the disordered scaling form, up to 1/sqrt(N)).
inline double rate_spread_depolarizing(double width) {
  encdec::detail::require(width > 0.0 && width <= 1.0, "rate_spread_depolarizing: width outside (0,1]");
  auto f2 = [](double l) {
    const double a = std::log2(2 - 1.5 * l);
    return a * a;
  };
  const double m2 = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f2, 0.0, width, 15, kQuadratureTol) / width;
  const double m = mean_rate_depolarizing(width);
  return std::sqrt(std::max(0.0, m2 - m * m));
}

/// Critical disorder width solving E[a](W) = r.
inline CriticalPoint solve_disordered_critical(ErrorKind kind, double r) {
  encdec::detail::require(r > 0.0 && r < 1.0, "solve_disordered_critical: need 0 < r < 1");
  std::function<double(double)> mu;
  double lo = 1e-9, hi;
  if (kind == ErrorKind::depolarizing_disordered || kind == ErrorKind::depolarizing) {
    mu = mean_rate_depolarizing;
    hi = 1.0;
    kind = ErrorKind::depolarizing_disordered;
  } else if (kind == ErrorKind::coherent_disordered || kind == ErrorKind::coherent) {
    mu = mean_rate_coherent;
    hi = 50.0;
    kind = ErrorKind::coherent_disordered;
  } else {
    throw InvalidArgument("solve_disordered_critical: unsupported error kind");
  }
  auto g = [&](double w) { return mu(w) - r; };
  if (!(g(lo) > 0 && g(hi) < 0))
    throw Error("solve_disordered_critical: no root in bracket for r = " + std::to_string(r));
  std::uintmax_t iters = 200;
  const auto [a, b] = boost::math::tools::toms748_solve(g, lo, hi, boost::math::tools::eps_tolerance<double>(40), iters);
  return {kind, r, 0.5 * (a + b), CriticalSource::transcendental_solve};
}

}  // namespace encdec::theory
