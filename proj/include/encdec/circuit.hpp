#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include <Eigen/QR>

#include "encdec/common.hpp"
#include "encdec/rng.hpp"
#include "encdec/state.hpp"

namespace encdec {

/// Haar-random element of U(4): QR of a complex Ginibre matrix with the phases
/// of R's diagonal moved into Q.
inline Gate sample_haar_2q_gate(RngStream& rng) {
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  Gate z;
  for (int c = 0; c < 4; ++c)
    for (int r = 0; r < 4; ++r) {
      const double re = normal(rng);
      const double im = normal(rng);
      z(r, c) = Complex(re, im);
    }
  Eigen::HouseholderQR<Gate> qr(z);
  Gate q = qr.householderQ();
  const Gate r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int c = 0; c < 4; ++c) {
    const double mag = std::abs(r(c, c));
    const Complex phase = mag > 0 ? r(c, c) / mag : Complex(1.0);
    q.col(c) *= phase;
  }
  return q;
}

enum class Direction { forward, inverse };

using QubitPair = std::pair<int, int>;

/// Bond placements of one brick-wall layer: parity 0 pairs (0,1),(2,3),...;
/// parity 1 pairs (1,2),...,(N-1,0).
inline std::vector<QubitPair> layer_placements(int n_qubits, int parity) {
  detail::require(n_qubits >= 2 && n_qubits % 2 == 0, "layer_placements: N must be even");
  std::vector<QubitPair> out;
  for (int i = parity % 2; i < n_qubits; i += 2) out.emplace_back(i, (i + 1) % n_qubits);
  return out;
}

struct GateLayer {
  int parity = 0;
  std::vector<QubitPair> placements;
  std::vector<Gate> gates;
};

class BrickwallCircuit {
 public:
  BrickwallCircuit(SystemLayout layout, int depth, std::uint64_t seed, std::vector<GateLayer> layers)
      : layout_(std::move(layout)), depth_(depth), seed_(seed), layers_(std::move(layers)) {
    detail::require(static_cast<int>(layers_.size()) == depth_, "BrickwallCircuit: layer count != depth");
  }

  /// Circuit with no layers (acts as the identity).
  static BrickwallCircuit empty(SystemLayout layout) { return BrickwallCircuit(std::move(layout), 0, 0, {}); }

  const SystemLayout& layout() const { return layout_; }
  int depth() const { return depth_; }
  std::uint64_t seed() const { return seed_; }
  const std::vector<GateLayer>& layers() const { return layers_; }

  std::size_t gate_count() const {
    std::size_t n = 0;
    for (const auto& l : layers_) n += l.gates.size();
    return n;
  }

 private:
  SystemLayout layout_;
  int depth_;
  std::uint64_t seed_;
  std::vector<GateLayer> layers_;
};

/// Default encoder depth T = 2N.
inline int default_depth(const SystemLayout& layout) { return 2 * layout.n_qubits(); }

/// Deterministic brick-wall encoder; layer 0 is even-aligned.
inline BrickwallCircuit build_encoder(const SystemLayout& layout, int depth, std::uint64_t seed) {
  detail::require(depth >= 1, "build_encoder: depth must be >= 1");
  RngStream rng(seed);
  std::vector<GateLayer> layers;
  layers.reserve(static_cast<std::size_t>(depth));
  for (int t = 0; t < depth; ++t) {
    GateLayer layer;
    layer.parity = t % 2;
    layer.placements = layer_placements(layout.n_qubits(), layer.parity);
    layer.gates.reserve(layer.placements.size());
    for (std::size_t g = 0; g < layer.placements.size(); ++g) layer.gates.push_back(sample_haar_2q_gate(rng));
    layers.push_back(std::move(layer));
  }
  return BrickwallCircuit(layout, depth, seed, std::move(layers));
}

/// One layer, or its adjoint. Gates within a layer act on disjoint pairs, so
/// order inside the layer does not matter.
template <class State>
void apply_layer(State& state, const GateLayer& layer, Direction dir) {
  for (std::size_t g = 0; g < layer.gates.size(); ++g) {
    const auto [qi, qj] = layer.placements[g];
    if (dir == Direction::forward)
      detail::apply_gate_unchecked(state, layer.gates[g], qi, qj);
    else
      detail::apply_gate_unchecked(state, Gate(layer.gates[g].adjoint()), qi, qj);
  }
}

/// forward applies U; inverse applies U^dag (adjointed layers in reverse order).
template <class State>
void apply_circuit(State& state, const BrickwallCircuit& circuit, Direction dir) {
  detail::require(state.n_qubits == circuit.layout().n_qubits(), "apply_circuit: layout mismatch");
  const auto& layers = circuit.layers();
  if (dir == Direction::forward) {
    for (const auto& layer : layers) apply_layer(state, layer, dir);
  } else {
    for (auto it = layers.rbegin(); it != layers.rend(); ++it) apply_layer(state, *it, dir);
  }
}

/// Columns U|x, 0_ancilla> for x < 2^k: the encoder restricted to the code
/// space. Projected decoding of a state phi is then W^dag phi.
inline Matrix encoder_isometry(const BrickwallCircuit& circuit) {
  const SystemLayout& layout = circuit.layout();
  const auto d = static_cast<Eigen::Index>(layout.dim());
  const auto dk = static_cast<Eigen::Index>(layout.logical_dim());
  Matrix w(d, dk);
  for (Eigen::Index x = 0; x < dk; ++x) {
    PureState s = PureState::basis(layout.n_qubits(), static_cast<std::size_t>(x));
    apply_circuit(s, circuit, Direction::forward);
    w.col(x) = s.amplitudes;
  }
  return w;
}

//------------------------------------------------------------------------------
// Noisy-device schedule: T = N encoder layers, each followed by single-qubit
// depolarizing noise with lambda_i in {0, eps}, a coherent layer, then the
// adjointed layers in reverse order, each again followed by noise.
//------------------------------------------------------------------------------

struct NoisySchedule {
  BrickwallCircuit circuit;
  double epsilon = 0.0;
  double alpha = 0.0;
  std::vector<std::vector<double>> encoder_noise;  // [layer][qubit]
  std::vector<std::vector<double>> decoder_noise;  // [layer in application order][qubit]
};

inline std::vector<std::vector<double>> sample_noise_masks(int layers, int n_qubits, double epsilon,
                                                           RngStream& rng) {
  std::bernoulli_distribution hit(0.25);
  std::vector<std::vector<double>> out(static_cast<std::size_t>(layers),
                                       std::vector<double>(static_cast<std::size_t>(n_qubits), 0.0));
  for (auto& layer : out)
    for (double& l : layer) l = hit(rng) ? epsilon : 0.0;
  return out;
}

inline NoisySchedule build_noisy_schedule(const SystemLayout& layout, double epsilon, double alpha,
                                          std::uint64_t gate_seed, std::uint64_t mask_seed) {
  detail::require(epsilon >= 0.0 && epsilon <= 1.0, "build_noisy_schedule: epsilon out of [0,1]");
  const int depth = layout.n_qubits();
  NoisySchedule s{build_encoder(layout, depth, gate_seed), epsilon, alpha, {}, {}};
  RngStream rng(mask_seed);
  s.encoder_noise = sample_noise_masks(depth, layout.n_qubits(), epsilon, rng);
  s.decoder_noise = sample_noise_masks(depth, layout.n_qubits(), epsilon, rng);
  return s;
}

}  // namespace encdec
