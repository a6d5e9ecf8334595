#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "encdec/common.hpp"
#include "encdec/state.hpp"
#include "encdec/stats.hpp"

namespace encdec {

//------------------------------------------------------------------------------
// Fidelity
//------------------------------------------------------------------------------

/// F = <psi|rho_X|psi> split into numerator m2 = <psi|P rho P|psi> (unnormalized)
/// and denominator p2 = tr(P rho P), P the ancilla-zero projector.
struct FidelitySplit {
  double fidelity = 0.0;
  double m2 = 0.0;
  double p2 = 0.0;
};

inline FidelitySplit fidelity(const Projected<PureState>& decoded, const PureState& reference) {
  detail::require(decoded.state.dim() == reference.dim(), "fidelity: logical dimension mismatch");
  const double f = std::norm(reference.amplitudes.dot(decoded.state.amplitudes));
  return {f, f * decoded.post_prob, decoded.post_prob};
}

inline FidelitySplit fidelity(const Projected<MixedState>& decoded, const PureState& reference) {
  detail::require(decoded.state.dim() == reference.dim(), "fidelity: logical dimension mismatch");
  const double f = reference.amplitudes.dot(decoded.state.matrix * reference.amplitudes).real();
  return {f, f * decoded.post_prob, decoded.post_prob};
}

/// From the unnormalized ancilla-zero block directly (no renormalization).
inline FidelitySplit fidelity_unnormalized(const Vector& block, const Vector& reference) {
  detail::require(block.size() == reference.size(), "fidelity: logical dimension mismatch");
  const double p2 = block.squaredNorm();
  const double m2 = std::norm(reference.dot(block));
  return {p2 > 0 ? m2 / p2 : 0.0, m2, p2};
}

inline FidelitySplit fidelity_unnormalized(const Matrix& block, const Vector& reference) {
  detail::require(block.rows() == reference.size(), "fidelity: logical dimension mismatch");
  const double p2 = block.trace().real();
  const double m2 = reference.dot(block * reference).real();
  return {p2 > 0 ? m2 / p2 : 0.0, m2, p2};
}

//------------------------------------------------------------------------------
// Entropies (bits)
//------------------------------------------------------------------------------

namespace detail {

inline void check_renyi_index(double q) {
  require(q > 0.0, "renyi index must be > 0");
  require(q != 1.0, "renyi index q = 1 is not supported");
}

}  // namespace detail

/// (1/(1-q)) log2 sum_i p_i^q, or -log2 max p_i for q = inf.
inline double renyi_of_distribution(std::span<const double> p, double q) {
  detail::check_renyi_index(q);
  if (std::isinf(q)) return -std::log2(*std::max_element(p.begin(), p.end()));
  stats::CompensatedSum acc;
  for (double x : p)
    if (x > 0) acc.add(std::pow(x, q));
  return std::log2(acc.value()) / (1 - q);
}

inline double renyi_entropy(const MixedState& rho, double q) {
  detail::check_renyi_index(q);
  const auto ev = spectrum(rho);
  return renyi_of_distribution(ev, q);
}

/// Entropy of the reduced state on `keep`.
template <class State>
double renyi_entropy(const State& s, double q, const std::vector<int>& keep) {
  detail::check_renyi_index(q);
  return renyi_entropy(reduced_density_matrix(s, keep), q);
}

inline constexpr double kDiagonalNormTol = 1e-8;

inline double participation_entropy(std::span<const double> weights, double q) {
  const double total = stats::sum(weights);
  if (std::abs(total - 1.0) > kDiagonalNormTol)
    throw InvalidArgument("participation_entropy: diagonal sums to " + std::to_string(total));
  return renyi_of_distribution(weights, q);
}

template <class State>
double participation_entropy(const State& s, double q) {
  const auto w = diagonal_weights(s);
  return participation_entropy(std::span<const double>(w), q);
}

//------------------------------------------------------------------------------
// Records
//------------------------------------------------------------------------------

enum class EntropyKind { entanglement, thermodynamic, participation_logical, participation_codespace };

inline std::string to_string(EntropyKind k) {
  switch (k) {
    case EntropyKind::entanglement: return "entanglement";
    case EntropyKind::thermodynamic: return "thermodynamic";
    case EntropyKind::participation_logical: return "participation_logical";
    case EntropyKind::participation_codespace: return "participation_codespace";
  }
  return "unknown";
}

inline EntropyKind parse_entropy_kind(const std::string& s) {
  for (EntropyKind k : {EntropyKind::entanglement, EntropyKind::thermodynamic, EntropyKind::participation_logical,
                        EntropyKind::participation_codespace})
    if (to_string(k) == s) return k;
  throw ConfigError("unknown entropy kind '" + s + "'");
}

struct EntropyValue {
  EntropyKind kind;
  double q;
  int subsystem;  // number of qubits in the region the entropy refers to
  double value;
};

struct RunRecord {
  std::size_t realization = 0;
  std::uint64_t seed = 0;
  double m2 = 0.0;
  double p2 = 0.0;
  double fidelity = 0.0;
  double post_prob = 0.0;
  std::vector<EntropyValue> entropies;
};

//------------------------------------------------------------------------------
// Self-averaging
//------------------------------------------------------------------------------

struct FluctuationRatios {
  stats::MeanSem numerator;    // F(m2) with jackknife error
  stats::MeanSem denominator;  // F(p2) with jackknife error
};

inline constexpr std::size_t kMinFluctuationSample = 30;

/// Relative realization-to-realization fluctuation std/mean of m2 and p2.
inline FluctuationRatios fluctuation_ratios(std::span<const double> m2, std::span<const double> p2) {
  detail::require(m2.size() == p2.size(), "fluctuation_ratios: length mismatch");
  detail::require(m2.size() >= kMinFluctuationSample, "fluctuation_ratios: need >= 30 records");
  auto one = [](std::span<const double> x) {
    std::vector<double> sq(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) sq[i] = x[i] * x[i];
    auto ratio = [](double m1, double m2) { return std::sqrt(std::max(0.0, m2 - m1 * m1)) / m1; };
    stats::MeanSem js = stats::jackknife(x, sq, ratio);
    js.mean = stats::relative_fluctuation(x);
    return js;
  };
  return {one(m2), one(p2)};
}

inline FluctuationRatios fluctuation_ratios(std::span<const RunRecord> records) {
  std::vector<double> m2, p2;
  for (const auto& r : records) {
    m2.push_back(r.m2);
    p2.push_back(r.p2);
  }
  return fluctuation_ratios(m2, p2);
}

}  // namespace encdec
