#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "encdec/common.hpp"
#include "encdec/rng.hpp"
#include "encdec/state.hpp"

namespace encdec {

enum class ErrorKind { coherent, coherent_disordered, depolarizing, depolarizing_disordered, device_noise };

inline std::string to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::coherent: return "coherent";
    case ErrorKind::coherent_disordered: return "coherent_disordered";
    case ErrorKind::depolarizing: return "depolarizing";
    case ErrorKind::depolarizing_disordered: return "depolarizing_disordered";
    case ErrorKind::device_noise: return "device_noise";
  }
  return "unknown";
}

inline ErrorKind parse_error_kind(const std::string& s) {
  for (ErrorKind k : {ErrorKind::coherent, ErrorKind::coherent_disordered, ErrorKind::depolarizing,
                      ErrorKind::depolarizing_disordered, ErrorKind::device_noise})
    if (to_string(k) == s) return k;
  throw ConfigError("unknown error model '" + s + "'");
}

/// Local error model. Uniform kinds carry one strength; disordered kinds carry a
/// width and, once instantiated, the realized per-site strengths.
struct ErrorModel {
  ErrorKind kind = ErrorKind::coherent;
  double strength = 0.0;        // alpha, lambda or epsilon
  double disorder_width = 0.0;  // W_alpha or W_lambda
  std::vector<double> site_strengths;

  static ErrorModel coherent(double alpha) {
    detail::require(alpha >= 0.0 && alpha <= std::numbers::pi / 2 + 1e-12, "coherent: alpha outside [0, pi/2]");
    return {ErrorKind::coherent, alpha, 0.0, {}};
  }
  static ErrorModel depolarizing(double lambda) {
    detail::require(lambda >= 0.0 && lambda <= 1.0, "depolarizing: lambda outside [0, 1]");
    return {ErrorKind::depolarizing, lambda, 0.0, {}};
  }
  static ErrorModel coherent_disordered(double width) {
    detail::require(width >= 0.0 && std::isfinite(width), "coherent_disordered: width must be >= 0");
    return {ErrorKind::coherent_disordered, 0.0, width, {}};
  }
  static ErrorModel depolarizing_disordered(double width) {
    detail::require(width >= 0.0 && width <= 1.0, "depolarizing_disordered: width outside [0, 1]");
    return {ErrorKind::depolarizing_disordered, 0.0, width, {}};
  }
  static ErrorModel device_noise(double epsilon) {
    detail::require(epsilon >= 0.0 && epsilon <= 1.0, "device_noise: epsilon outside [0, 1]");
    return {ErrorKind::device_noise, epsilon, 0.0, {}};
  }

  bool is_coherent() const { return kind == ErrorKind::coherent || kind == ErrorKind::coherent_disordered; }
  bool is_disordered() const {
    return kind == ErrorKind::coherent_disordered || kind == ErrorKind::depolarizing_disordered;
  }
  bool instantiated() const { return !site_strengths.empty(); }

  /// Per-site strengths for an N-qubit register.
  std::vector<double> strengths(int n_qubits) const {
    if (is_disordered()) {
      detail::require(static_cast<int>(site_strengths.size()) == n_qubits,
                      "ErrorModel: disorder not instantiated for this register");
      return site_strengths;
    }
    return std::vector<double>(static_cast<std::size_t>(n_qubits), strength);
  }
};

/// Draws per-site strengths: alpha_i ~ Normal(0, W^2), lambda_i ~ Uniform[0, W].
/// Draws are unit variates scaled by W, so one seed gives a smooth family in W.
inline ErrorModel instantiate_disorder(ErrorModel model, int n_qubits, RngStream& rng) {
  detail::require(model.is_disordered(), "instantiate_disorder: model kind is not disordered");
  detail::require(n_qubits >= 1, "instantiate_disorder: empty register");
  model.site_strengths.assign(static_cast<std::size_t>(n_qubits), 0.0);
  if (model.kind == ErrorKind::coherent_disordered) {
    std::normal_distribution<double> unit(0.0, 1.0);
    for (double& a : model.site_strengths) a = model.disorder_width * unit(rng);
  } else {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (double& l : model.site_strengths) l = model.disorder_width * unit(rng);
  }
  return model;
}

//------------------------------------------------------------------------------
// Kraus sets
//------------------------------------------------------------------------------

inline Mat2 pauli_matrix(int mu) {
  Mat2 m;
  switch (mu) {
    case 0: m << 1, 0, 0, 1; break;
    case 1: m << 0, 1, 1, 0; break;
    case 2: m << 0, Complex(0, -1), Complex(0, 1), 0; break;
    case 3: m << 1, 0, 0, -1; break;
    default: throw InvalidArgument("pauli_matrix: index must be 0..3");
  }
  return m;
}

struct KrausSet {
  std::vector<std::vector<Mat2>> sites;

  /// max over sites of |sum_mu K^dag K - I|.
  double completeness_defect() const {
    double worst = 0.0;
    for (const auto& ops : sites) {
      Mat2 acc = Mat2::Zero();
      for (const auto& k : ops) acc += k.adjoint() * k;
      worst = std::max(worst, (acc - Mat2::Identity()).cwiseAbs().maxCoeff());
    }
    return worst;
  }
};

inline Mat2 coherent_kraus(double alpha) {
  Mat2 k = Mat2::Zero();
  k(0, 0) = std::polar(1.0, -alpha / 2);
  k(1, 1) = std::polar(1.0, alpha / 2);
  return k;
}

inline std::vector<Mat2> depolarizing_kraus(double lambda) {
  return {std::sqrt(1 - 0.75 * lambda) * pauli_matrix(0), std::sqrt(lambda / 4) * pauli_matrix(1),
          std::sqrt(lambda / 4) * pauli_matrix(2), std::sqrt(lambda / 4) * pauli_matrix(3)};
}

inline KrausSet kraus_set(const ErrorModel& model, int n_qubits) {
  KrausSet set;
  for (double s : model.strengths(n_qubits)) {
    if (model.is_coherent())
      set.sites.push_back({coherent_kraus(s)});
    else
      set.sites.push_back(depolarizing_kraus(s));
  }
  return set;
}

//------------------------------------------------------------------------------
// Coherent layer: prod_i exp(-i alpha_i sigma^z_i / 2) is diagonal.
//------------------------------------------------------------------------------

/// phase[m] = prod_i exp(-+ i alpha_i / 2) with the sign set by bit i of m.
inline std::vector<Complex> coherent_phase_table(std::span<const double> angles) {
  std::vector<Complex> table{Complex(1.0)};
  table.reserve(dim_of(static_cast<int>(angles.size())));
  for (double a : angles) {
    const Complex p0 = std::polar(1.0, -a / 2), p1 = std::polar(1.0, a / 2);
    const std::size_t half = table.size();
    table.resize(2 * half);
    for (std::size_t m = 0; m < half; ++m) {
      table[m + half] = table[m] * p1;
      table[m] *= p0;
    }
  }
  return table;
}

inline void apply_coherent_layer(PureState& s, std::span<const double> angles) {
  detail::require(static_cast<int>(angles.size()) == s.n_qubits, "apply_coherent_layer: need one angle per qubit");
  const auto table = coherent_phase_table(angles);
  for (std::size_t m = 0; m < table.size(); ++m) s.amplitudes(static_cast<Eigen::Index>(m)) *= table[m];
}

inline void apply_coherent_layer(MixedState& s, std::span<const double> angles) {
  detail::require(static_cast<int>(angles.size()) == s.n_qubits, "apply_coherent_layer: need one angle per qubit");
  const auto table = coherent_phase_table(angles);
  const auto d = static_cast<Eigen::Index>(table.size());
  for (Eigen::Index b = 0; b < d; ++b)
    for (Eigen::Index a = 0; a < d; ++a)
      s.matrix(a, b) *= table[static_cast<std::size_t>(a)] * std::conj(table[static_cast<std::size_t>(b)]);
}

//------------------------------------------------------------------------------
// Depolarizing channel on a density matrix. Site i maps
// rho -> (1 - lambda) rho + lambda tr_i(rho) (x) I/2.
//------------------------------------------------------------------------------

namespace detail {

inline void depolarize_site(Matrix& rho, int n_qubits, int site, double lambda) {
  if (lambda == 0.0) return;
  const std::size_t m = std::size_t{1} << site;
  const std::size_t half = dim_of(n_qubits) >> 1;
  const double keep = 1 - lambda / 2, mix = lambda / 2, off = 1 - lambda;
  for (std::size_t tb = 0; tb < half; ++tb) {
    const auto b0 = static_cast<Eigen::Index>(insert_zero_bit(tb, site));
    const auto b1 = static_cast<Eigen::Index>(static_cast<std::size_t>(b0) | m);
    for (std::size_t ta = 0; ta < half; ++ta) {
      const auto a0 = static_cast<Eigen::Index>(insert_zero_bit(ta, site));
      const auto a1 = static_cast<Eigen::Index>(static_cast<std::size_t>(a0) | m);
      const Complex x00 = rho(a0, b0), x11 = rho(a1, b1);
      rho(a0, b0) = keep * x00 + mix * x11;
      rho(a1, b1) = keep * x11 + mix * x00;
      rho(a0, b1) *= off;
      rho(a1, b0) *= off;
    }
  }
}

}  // namespace detail

inline void apply_depolarizing_channel(MixedState& s, std::span<const double> lambdas) {
  detail::require(static_cast<int>(lambdas.size()) == s.n_qubits,
                  "apply_depolarizing_channel: need one strength per qubit");
  for (double l : lambdas) detail::require(l >= 0.0 && l <= 1.0, "apply_depolarizing_channel: lambda outside [0,1]");
  for (int i = 0; i < s.n_qubits; ++i) detail::depolarize_site(s.matrix, s.n_qubits, i, lambdas[static_cast<std::size_t>(i)]);
}

//------------------------------------------------------------------------------
// Pauli trajectories
//------------------------------------------------------------------------------

enum class Pauli : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

using PauliString = std::vector<Pauli>;

/// Probability that the channel with these strengths applies no Pauli at all.
inline double no_error_weight(std::span<const double> lambdas) {
  double w = 1.0;
  for (double l : lambdas) w *= 1 - 0.75 * l;
  return w;
}

namespace detail {

inline Pauli uniform_nonidentity(RngStream& rng) {
  std::uniform_int_distribution<int> pick(1, 3);
  return static_cast<Pauli>(pick(rng));
}

}  // namespace detail

/// Site i draws I with probability 1 - 3 lambda_i/4, each of X, Y, Z with lambda_i/4.
inline PauliString sample_pauli_trajectory(RngStream& rng, std::span<const double> lambdas) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  PauliString out(lambdas.size(), Pauli::I);
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    if (lambdas[i] == 0.0) continue;
    if (u(rng) < 0.75 * lambdas[i]) out[i] = detail::uniform_nonidentity(rng);
  }
  return out;
}

/// Same distribution conditioned on at least one non-identity label. Sites are
/// visited in order; until the first error, site i errs with probability
/// (1 - q_i) / (1 - prod_{j >= i} q_j), after which sites are unconditioned.
inline PauliString sample_pauli_trajectory_with_error(RngStream& rng, std::span<const double> lambdas) {
  const std::size_t n = lambdas.size();
  std::vector<double> tail_clean(n + 1, 1.0);
  for (std::size_t i = n; i-- > 0;) tail_clean[i] = tail_clean[i + 1] * (1 - 0.75 * lambdas[i]);
  detail::require(tail_clean[0] < 1.0, "sample_pauli_trajectory_with_error: all strengths are zero");
  std::uniform_real_distribution<double> u(0.0, 1.0);
  PauliString out(n, Pauli::I);
  bool hit = false;
  for (std::size_t i = 0; i < n; ++i) {
    const double p_err = 0.75 * lambdas[i];
    if (p_err == 0.0) continue;
    const double p = hit ? p_err : p_err / (1 - tail_clean[i]);
    if (u(rng) < p) {
      out[i] = detail::uniform_nonidentity(rng);
      hit = true;
    }
  }
  return out;
}

inline bool is_identity(const PauliString& p) {
  for (Pauli x : p)
    if (x != Pauli::I) return false;
  return true;
}

/// Applies the tensor product of the labelled Paulis in one pass:
/// P|m> = i^{#Y} (-1)^{|m & zmask|} |m ^ xmask>.
inline void apply_pauli_string(PureState& s, const PauliString& labels) {
  detail::require(static_cast<int>(labels.size()) == s.n_qubits, "apply_pauli_string: need one label per qubit");
  std::size_t xmask = 0, zmask = 0;
  int n_y = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const std::size_t b = std::size_t{1} << i;
    if (labels[i] == Pauli::X || labels[i] == Pauli::Y) xmask |= b;
    if (labels[i] == Pauli::Z || labels[i] == Pauli::Y) zmask |= b;
    if (labels[i] == Pauli::Y) ++n_y;
  }
  if (xmask == 0 && zmask == 0) return;
  static constexpr Complex kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  const Complex global = kIPow[n_y % 4];
  Vector out(s.amplitudes.size());
  for (std::size_t m = 0; m < s.dim(); ++m) {
    const Complex v = s.amplitudes(static_cast<Eigen::Index>(m)) * global;
    out(static_cast<Eigen::Index>(m ^ xmask)) = (std::popcount(m & zmask) & 1) ? -v : v;
  }
  s.amplitudes = std::move(out);
}

}  // namespace encdec
