#pragma once

#include <vector>

#include "encdec/circuit.hpp"
#include "encdec/harness/config.hpp"
#include "encdec/harness/pipeline.hpp"
#include "encdec/harness/results.hpp"
#include "encdec/harness/worker_pool.hpp"
#include "encdec/noise.hpp"
#include "encdec/observables.hpp"
#include "encdec/stats.hpp"

namespace encdec::harness {

// Noisy encoder and decoder: every gate layer (T = N of them each way) is
// followed by single-qubit depolarizing noise of strength eps on the sites of
// that layer's mask, with a coherent layer of angle alpha in between.

namespace detail {

/// (layer, qubit) locations with nonzero noise, encoder layers first, then
/// decoder layers in application order.
struct NoiseSite {
  bool decoder;
  int layer;
  int qubit;
};

inline std::vector<NoiseSite> active_sites(const NoisySchedule& s) {
  std::vector<NoiseSite> out;
  for (int half = 0; half < 2; ++half) {
    const auto& masks = half == 0 ? s.encoder_noise : s.decoder_noise;
    for (std::size_t l = 0; l < masks.size(); ++l)
      for (std::size_t q = 0; q < masks[l].size(); ++q)
        if (masks[l][q] > 0) out.push_back({half == 1, static_cast<int>(l), static_cast<int>(q)});
  }
  return out;
}

/// Pure-state evolution with the given Pauli labels at the active sites.
inline PureState evolve_branch(const NoisySchedule& s, const PureState& initial, const std::vector<NoiseSite>& sites,
                               const PauliString& labels) {
  const int n = initial.n_qubits;
  const auto& layers = s.circuit.layers();
  const int depth = static_cast<int>(layers.size());
  std::vector<PauliString> enc(static_cast<std::size_t>(depth), PauliString(static_cast<std::size_t>(n), Pauli::I));
  std::vector<PauliString> dec = enc;
  std::vector<bool> enc_hit(static_cast<std::size_t>(depth), false), dec_hit(static_cast<std::size_t>(depth), false);
  for (std::size_t i = 0; i < sites.size(); ++i) {
    if (labels[i] == Pauli::I) continue;
    const auto l = static_cast<std::size_t>(sites[i].layer);
    auto& target = sites[i].decoder ? dec[l] : enc[l];
    target[static_cast<std::size_t>(sites[i].qubit)] = labels[i];
    (sites[i].decoder ? dec_hit : enc_hit)[l] = true;
  }
  PureState psi = initial;
  for (int l = 0; l < depth; ++l) {
    apply_layer(psi, layers[static_cast<std::size_t>(l)], Direction::forward);
    if (enc_hit[static_cast<std::size_t>(l)]) apply_pauli_string(psi, enc[static_cast<std::size_t>(l)]);
  }
  apply_coherent_layer(psi, std::vector<double>(static_cast<std::size_t>(n), s.alpha));
  for (int l = 0; l < depth; ++l) {
    apply_layer(psi, layers[static_cast<std::size_t>(depth - 1 - l)], Direction::inverse);
    if (dec_hit[static_cast<std::size_t>(l)]) apply_pauli_string(psi, dec[static_cast<std::size_t>(l)]);
  }
  return psi;
}

}  // namespace detail

struct NoisyEstimate {
  double m2 = 0.0;
  double p2 = 0.0;
  double fidelity = 0.0;
};

/// Stratified trajectory estimate of (m2, p2) for one schedule: the no-error
/// branch is evaluated exactly and weighted by prod(1 - 3 eps/4) over active
/// sites; `trajectories` branches are drawn conditioned on >= 1 error.
inline NoisyEstimate noisy_trajectory_estimate(const NoisySchedule& s, const PureState& logical, std::size_t trajectories,
                                               RngStream& rng) {
  const int n = s.circuit.layout().n_qubits(), k = s.circuit.layout().n_logical();
  const PureState initial = embed_logical(logical, n);
  const auto sites = detail::active_sites(s);
  const std::vector<double> lambdas(sites.size(), s.epsilon);
  const double clean = no_error_weight(lambdas);
  auto branch_values = [&](const PauliString& labels) {
    const PureState out = detail::evolve_branch(s, initial, sites, labels);
    const Vector block = out.amplitudes.head(static_cast<Eigen::Index>(dim_of(k)));
    return fidelity_unnormalized(block, logical.amplitudes);
  };
  const FidelitySplit c = branch_values(PauliString(sites.size(), Pauli::I));
  double m2 = clean * c.m2, p2 = clean * c.p2;
  if (clean < 1.0 && trajectories > 0) {
    stats::CompensatedSum am, ap;
    for (std::size_t t = 0; t < trajectories; ++t) {
      const FidelitySplit b = branch_values(sample_pauli_trajectory_with_error(rng, lambdas));
      am.add(b.m2);
      ap.add(b.p2);
    }
    m2 += (1 - clean) * am.value() / static_cast<double>(trajectories);
    p2 += (1 - clean) * ap.value() / static_cast<double>(trajectories);
  }
  return {m2, p2, p2 > 0 ? m2 / p2 : 0.0};
}

/// Exact density-matrix evolution of the same schedule.
inline NoisyEstimate noisy_density_exact(const NoisySchedule& s, const PureState& logical) {
  const int n = s.circuit.layout().n_qubits(), k = s.circuit.layout().n_logical();
  encdec::detail::require(n <= 10, "noisy_density_exact: N <= 10 required");
  MixedState rho = MixedState::from_pure(embed_logical(logical, n));
  const auto& layers = s.circuit.layers();
  const std::size_t depth = layers.size();
  for (std::size_t l = 0; l < depth; ++l) {
    apply_layer(rho, layers[l], Direction::forward);
    apply_depolarizing_channel(rho, s.encoder_noise[l]);
  }
  apply_coherent_layer(rho, std::vector<double>(static_cast<std::size_t>(n), s.alpha));
  for (std::size_t l = 0; l < depth; ++l) {
    apply_layer(rho, layers[depth - 1 - l], Direction::inverse);
    apply_depolarizing_channel(rho, s.decoder_noise[l]);
  }
  const auto dk = static_cast<Eigen::Index>(dim_of(k));
  const FidelitySplit f = fidelity_unnormalized(Matrix(rho.matrix.topLeftCorner(dk, dk)), logical.amplitudes);
  return {f.m2, f.p2, f.fidelity};
}

/// Schedule of one realization: gates from the same seed as the clean sweep,
/// masks from the realization's disorder stream.
inline NoisySchedule realization_schedule(const ExperimentConfig& cfg, int n, std::size_t realization, double alpha) {
  const SystemLayout layout(n, cfg.logical_qubits(n));
  const int depth = cfg.depth(n);
  NoisySchedule s{build_encoder(layout, depth, gate_seed(cfg.seed, realization, n)), cfg.epsilon, alpha, {}, {}};
  RngStream rng(derive_seed(cfg.seed, realization, StreamTag::disorder, size_sub(n)));
  s.encoder_noise = sample_noise_masks(depth, n, cfg.epsilon, rng);
  s.decoder_noise = sample_noise_masks(depth, n, cfg.epsilon, rng);
  return s;
}

/// Quenched sweep over alpha for the noisy device.
inline ResultTable run_noisy_device(const ExperimentConfig& cfg) {
  validate(cfg);
  if (cfg.kind != ExperimentKind::noisy_device) throw ConfigError("run_noisy_device: experiment must be noisy_device");
  ResultTable table;
  for (int n : cfg.sizes) {
    const int k = cfg.logical_qubits(n);
    std::vector<std::vector<PointResult>> results(cfg.realizations);
    parallel_for(cfg.realizations, cfg.workers, [&](std::size_t i) {
      RngStream init_rng = make_stream(cfg.seed, i, StreamTag::initial_state, size_sub(n));
      const PureState logical = initial_logical_state(cfg.initial_state, k, init_rng);
      NoisySchedule s = realization_schedule(cfg, n, i, 0.0);
      std::vector<PointResult> row(cfg.grid.size());
      for (std::size_t g = 0; g < cfg.grid.size(); ++g) {
        s.alpha = cfg.grid[g];
        RngStream rng = make_stream(cfg.seed, i, StreamTag::trajectory, point_sub(n, g, 0));
        const NoisyEstimate e = noisy_trajectory_estimate(s, logical, cfg.trajectories, rng);
        row[g].evaluations = 1;
        row[g].theory = theory::annealed_fidelity_coherent(n, k, cfg.grid[g]);
        if (e.p2 < kDegeneratePostProb) {
          row[g].degenerate = 1;
          continue;
        }
        RunRecord rec;
        rec.realization = i;
        rec.seed = s.circuit.seed();
        rec.m2 = e.m2;
        rec.p2 = e.p2;
        rec.fidelity = e.fidelity;
        rec.post_prob = e.p2;
        row[g].record = rec;
      }
      results[i] = std::move(row);
    });
    append_size(cfg, n, results, table);
  }
  check_degenerate(table.degenerate, table.evaluations);
  return table;
}

}  // namespace encdec::harness
