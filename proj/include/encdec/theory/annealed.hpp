#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "encdec/common.hpp"

namespace encdec::theory {

/// Per-site no-error factor of the two-replica average: cos^2(alpha/2) for a
/// rotation, 1 - 3 lambda/4 for depolarizing noise. The annealed fidelity
/// depends on the channel only through the product c of these factors.
inline double coherent_site_factor(double alpha) {
  const double c = std::cos(alpha / 2);
  return c * c;
}

inline double depolarizing_site_factor(double lambda) {
  encdec::detail::require(lambda >= 0.0 && lambda <= 1.0, "depolarizing strength outside [0,1]");
  return 1 - 0.75 * lambda;
}

/// log2 of prod_i factor(s_i).
template <class Factor>
double log2_product(std::span<const double> strengths, Factor factor) {
  double acc = 0.0;
  for (double s : strengths) acc += std::log2(factor(s));
  return acc;
}

/// (D-1)(Dc+1) / (Dc(D-K) + DK - 1) with D = 2^N, K = 2^k and c given as log2 c.
/// Direct evaluation for N <= 64. Above that, numerator and denominator are
/// divided by D K and carried through z = D c / K, so no term overflows:
/// (1 - 1/D)(z + 1/K) / (z (1 - K/D) + 1 - 1/(D K)).
inline double annealed_fidelity_from_log2c(int n, int k, double log2c) {
  encdec::detail::require(n >= 1 && k >= 1 && k <= n, "annealed fidelity: need 1 <= k <= N");
  if (log2c == 0.0) return 1.0;
  if (n <= 64) {
    const double d = std::ldexp(1.0, n), kk = std::ldexp(1.0, k);
    const double dc = std::exp2(n + log2c);
    return (d - 1) * (dc + 1) / (dc * (d - kk) + d * kk - 1);
  }
  // Terms below 2^-1074 underflow to 0, which is harmless here.
  const double inv_d = std::exp2(-n), inv_k = std::exp2(-k), k_over_d = std::exp2(k - n);
  const double inv_dk = std::exp2(-static_cast<double>(n) - k);
  const double log2z = n + log2c - k;
  if (log2z > 900) {
    const double inv_z = std::exp2(-log2z);
    return (1 - inv_d) * (1 + inv_k * inv_z) / ((1 - k_over_d) + (1 - inv_dk) * inv_z);
  }
  const double z = std::exp2(log2z);
  return (1 - inv_d) * (z + inv_k) / (z * (1 - k_over_d) + 1 - inv_dk);
}

inline double annealed_fidelity_coherent(int n, int k, std::span<const double> alphas) {
  encdec::detail::require(static_cast<int>(alphas.size()) == n, "annealed_fidelity_coherent: need N angles");
  return annealed_fidelity_from_log2c(n, k, log2_product(alphas, coherent_site_factor));
}

inline double annealed_fidelity_coherent(int n, int k, double alpha) {
  return annealed_fidelity_from_log2c(n, k, n * std::log2(coherent_site_factor(alpha)));
}

inline double annealed_fidelity_depolarizing(int n, int k, std::span<const double> lambdas) {
  encdec::detail::require(static_cast<int>(lambdas.size()) == n, "annealed_fidelity_depolarizing: need N strengths");
  return annealed_fidelity_from_log2c(n, k, log2_product(lambdas, depolarizing_site_factor));
}

inline double annealed_fidelity_depolarizing(int n, int k, double lambda) {
  return annealed_fidelity_from_log2c(n, k, n * std::log2(depolarizing_site_factor(lambda)));
}

}  // namespace encdec::theory
