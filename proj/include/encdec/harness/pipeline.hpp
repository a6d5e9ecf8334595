#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <random>
#include <vector>

#include "encdec/circuit.hpp"
#include "encdec/harness/config.hpp"
#include "encdec/harness/results.hpp"
#include "encdec/harness/worker_pool.hpp"
#include "encdec/noise.hpp"
#include "encdec/observables.hpp"
#include "encdec/pauli_transfer.hpp"
#include "encdec/rng.hpp"
#include "encdec/stats.hpp"
#include "encdec/theory/annealed.hpp"
#include "encdec/theory/slopes.hpp"

namespace encdec::harness {

//------------------------------------------------------------------------------
// Initial logical states
//------------------------------------------------------------------------------

inline PureState initial_logical_state(InitialState kind, int k, RngStream& rng) {
  switch (kind) {
    case InitialState::all_zero: return PureState::zero(k);
    case InitialState::ghz: {
      PureState s = PureState::zero(k);
      s.amplitudes(0) = s.amplitudes(static_cast<Eigen::Index>(dim_of(k) - 1)) = 1 / std::numbers::sqrt2;
      return s;
    }
    case InitialState::product_random: {
      // Product of Haar-random single-qubit states.
      std::normal_distribution<double> g;
      Vector out = Vector::Ones(1);
      for (int i = 0; i < k; ++i) {
        Vector q(2);
        q << Complex(g(rng), g(rng)), Complex(g(rng), g(rng));
        q.normalize();
        Vector next(out.size() * 2);
        // qubit i is bit i: new index = old + 2^i * b
        next.head(out.size()) = out * q(0);
        next.tail(out.size()) = out * q(1);
        out = std::move(next);
      }
      return PureState::from_amplitudes(k, std::move(out));
    }
  }
  throw InvalidArgument("initial_logical_state: unknown kind");
}

/// |psi_X> (x) |0_ancilla>.
inline PureState embed_logical(const PureState& logical, int n_qubits) {
  PureState s{n_qubits, Vector::Zero(static_cast<Eigen::Index>(dim_of(n_qubits)))};
  s.amplitudes.head(logical.amplitudes.size()) = logical.amplitudes;
  return s;
}

//------------------------------------------------------------------------------
// Seeds
//------------------------------------------------------------------------------

/// Stream sub-indices keep sizes, grid points and disorder draws independent.
inline std::uint64_t size_sub(int n) { return static_cast<std::uint64_t>(n); }
inline std::uint64_t draw_sub(int n, std::size_t draw) { return (static_cast<std::uint64_t>(n) << 32) | draw; }
inline std::uint64_t point_sub(int n, std::size_t point, std::size_t draw) {
  return (static_cast<std::uint64_t>(n) << 48) ^ (static_cast<std::uint64_t>(point) << 24) ^ draw;
}

inline std::uint64_t gate_seed(std::uint64_t master, std::size_t realization, int n) {
  return derive_seed(master, realization, StreamTag::gates, size_sub(n));
}

//------------------------------------------------------------------------------
// One realization
//------------------------------------------------------------------------------

struct Evaluation {
  bool degenerate = false;
  double m2 = 0.0, p2 = 0.0, fidelity = 0.0;
  std::vector<EntropyValue> entropies;
};

/// A realization's values at one grid point, averaged over its disorder draws.
struct PointResult {
  std::optional<RunRecord> record;  // empty when every draw was degenerate
  double theory = kMissing;         // annealed value for the realized strengths
  std::size_t degenerate = 0;
  std::size_t evaluations = 0;
};

namespace detail {

inline ErrorModel model_at(ErrorKind kind, double s) {
  switch (kind) {
    case ErrorKind::coherent: return ErrorModel::coherent(s);
    case ErrorKind::depolarizing: return ErrorModel::depolarizing(s);
    case ErrorKind::coherent_disordered: return ErrorModel::coherent_disordered(s);
    case ErrorKind::depolarizing_disordered: return ErrorModel::depolarizing_disordered(s);
    case ErrorKind::device_noise: return ErrorModel::device_noise(s);
  }
  throw InvalidArgument("model_at: unknown kind");
}

inline double annealed_theory(ErrorKind kind, int n, int k, std::span<const double> strengths) {
  if (kind == ErrorKind::coherent || kind == ErrorKind::coherent_disordered)
    return theory::annealed_fidelity_coherent(n, k, strengths);
  return theory::annealed_fidelity_depolarizing(n, k, strengths);
}

inline int entropy_subsystem(EntropyKind kind, const SystemLayout& layout) {
  switch (kind) {
    case EntropyKind::entanglement: return static_cast<int>(layout.x1().size());
    case EntropyKind::thermodynamic:
    case EntropyKind::participation_logical: return layout.n_logical();
    case EntropyKind::participation_codespace: return layout.n_qubits();
  }
  return 0;
}

/// Entropies of a decoded logical state and the code-space state.
template <class Logical, class Codespace>
std::vector<EntropyValue> entropies_of(const ExperimentConfig& cfg, const SystemLayout& layout, const Logical& logical,
                                       const Codespace& codespace) {
  std::vector<EntropyValue> out;
  for (EntropyKind kind : cfg.entropies)
    for (double q : cfg.q_list) {
      double v = 0.0;
      switch (kind) {
        case EntropyKind::entanglement: v = renyi_entropy(logical, q, layout.x1()); break;
        case EntropyKind::thermodynamic:
          if constexpr (std::is_same_v<Logical, PureState>)
            v = renyi_entropy(MixedState::from_pure(logical), q);
          else
            v = renyi_entropy(logical, q);
          break;
        case EntropyKind::participation_logical: v = participation_entropy(logical, q); break;
        case EntropyKind::participation_codespace: v = participation_entropy(codespace, q); break;
      }
      out.push_back({kind, q, entropy_subsystem(kind, layout), v});
    }
  return out;
}

/// Mean of the non-degenerate evaluations; F is the mean of per-draw ratios.
inline std::optional<RunRecord> average_draws(const std::vector<Evaluation>& evals) {
  std::vector<double> m2, p2, f;
  std::vector<std::vector<double>> ent;
  const Evaluation* first = nullptr;
  for (const auto& e : evals) {
    if (e.degenerate) continue;
    if (!first) {
      first = &e;
      ent.resize(e.entropies.size());
    }
    m2.push_back(e.m2);
    p2.push_back(e.p2);
    f.push_back(e.fidelity);
    for (std::size_t i = 0; i < e.entropies.size(); ++i) ent[i].push_back(e.entropies[i].value);
  }
  if (!first) return std::nullopt;
  RunRecord r;
  r.m2 = stats::mean(m2);
  r.p2 = stats::mean(p2);
  r.fidelity = stats::mean(f);
  r.post_prob = r.p2;
  for (std::size_t i = 0; i < ent.size(); ++i) {
    EntropyValue v = first->entropies[i];
    v.value = stats::mean(ent[i]);
    r.entropies.push_back(v);
  }
  return r;
}

}  // namespace detail

/// Per-site strengths of draw j at grid value s. Disorder uses the same unit
/// variates for every s (common random numbers across the grid).
inline std::vector<double> realized_strengths(const ExperimentConfig& cfg, int n, std::size_t realization,
                                              std::size_t draw, double s) {
  ErrorModel model = detail::model_at(cfg.model, s);
  if (!model.is_disordered()) return model.strengths(n);
  RngStream rng = make_stream(cfg.seed, realization, StreamTag::disorder, draw_sub(n, draw));
  return instantiate_disorder(model, n, rng).site_strengths;
}

/// Runs every grid point for one unitary realization at size n.
inline std::vector<PointResult> run_realization(const ExperimentConfig& cfg, int n, std::size_t realization) {
  const int k = cfg.logical_qubits(n);
  const SystemLayout layout = SystemLayout::with_cut(n, k, cfg.x1_size(n));
  const std::uint64_t seed = gate_seed(cfg.seed, realization, n);
  const BrickwallCircuit circuit = build_encoder(layout, cfg.depth(n), seed);
  RngStream init_rng = make_stream(cfg.seed, realization, StreamTag::initial_state, size_sub(n));
  const PureState logical = initial_logical_state(cfg.initial_state, k, init_rng);
  PureState encoded = embed_logical(logical, n);
  apply_circuit(encoded, circuit, Direction::forward);

  const bool coherent = cfg.model == ErrorKind::coherent || cfg.model == ErrorKind::coherent_disordered;
  std::optional<Matrix> isometry;
  if (cfg.backend != Backend::pure) isometry = encoder_isometry(circuit);
  std::optional<DepolarizedFidelity> transfer;
  if (cfg.backend == Backend::pauli_transfer) transfer = depolarized_fidelity_polynomials(n, encoded.amplitudes, *isometry);

  std::vector<PointResult> out(cfg.grid.size());
  for (std::size_t g = 0; g < cfg.grid.size(); ++g) {
    std::vector<Evaluation> evals;
    stats::CompensatedSum theory_acc;
    for (std::size_t draw = 0; draw < cfg.disorder_draws; ++draw) {
      const std::vector<double> strengths = realized_strengths(cfg, n, realization, draw, cfg.grid[g]);
      theory_acc.add(detail::annealed_theory(cfg.model, n, k, strengths));
      Evaluation e;
      switch (cfg.backend) {
        case Backend::pure: {
          PureState phi = encoded;
          apply_coherent_layer(phi, strengths);
          PureState decoded = phi;
          apply_circuit(decoded, circuit, Direction::inverse);
          try {
            const auto proj = project_ancillas(decoded, k);
            const FidelitySplit f = fidelity(proj, logical);
            e = {false, f.m2, f.p2, f.fidelity, detail::entropies_of(cfg, layout, proj.state, phi)};
          } catch (const DegeneratePostSelection&) {
            e.degenerate = true;
          }
          break;
        }
        case Backend::density: {
          MixedState rho = MixedState::from_pure(encoded);
          if (coherent)
            apply_coherent_layer(rho, strengths);
          else
            apply_depolarizing_channel(rho, strengths);
          const Matrix block = isometry->adjoint() * rho.matrix * *isometry;
          const double p2 = block.trace().real();
          if (p2 < kDegeneratePostProb) {
            e.degenerate = true;
            break;
          }
          const MixedState decoded{k, block / p2};
          const FidelitySplit f = fidelity(Projected<MixedState>{decoded, p2}, logical);
          e = {false, f.m2, f.p2, f.fidelity, detail::entropies_of(cfg, layout, decoded, rho)};
          break;
        }
        case Backend::trajectory: {
          // Stratified: the no-error branch is exact (m2 = p2 = 1); trajectories
          // are drawn conditioned on at least one Pauli error.
          const double clean = no_error_weight(strengths);
          double m2 = clean, p2 = clean;
          if (clean < 1.0) {
            RngStream rng = make_stream(cfg.seed, realization, StreamTag::trajectory, point_sub(n, g, draw));
            stats::CompensatedSum am, ap;
            for (std::size_t t = 0; t < cfg.trajectories; ++t) {
              PureState branch = encoded;
              apply_pauli_string(branch, sample_pauli_trajectory_with_error(rng, strengths));
              am.add(std::norm(encoded.amplitudes.dot(branch.amplitudes)));
              ap.add((isometry->adjoint() * branch.amplitudes).squaredNorm());
            }
            const double w = (1 - clean) / static_cast<double>(cfg.trajectories);
            m2 += w * am.value();
            p2 += w * ap.value();
          }
          if (p2 < kDegeneratePostProb)
            e.degenerate = true;
          else
            e = {false, m2, p2, m2 / p2, {}};
          break;
        }
        case Backend::pauli_transfer: {
          const double m2 = transfer->m2(strengths), p2 = transfer->p2(strengths);
          if (p2 < kDegeneratePostProb)
            e.degenerate = true;
          else
            e = {false, m2, p2, m2 / p2, {}};
          break;
        }
      }
      out[g].degenerate += e.degenerate ? 1 : 0;
      ++out[g].evaluations;
      evals.push_back(std::move(e));
    }
    out[g].theory = theory_acc.value() / static_cast<double>(cfg.disorder_draws);
    out[g].record = detail::average_draws(evals);
    if (out[g].record) {
      out[g].record->realization = realization;
      out[g].record->seed = seed;
    }
  }
  return out;
}

//------------------------------------------------------------------------------
// Aggregation
//------------------------------------------------------------------------------

/// Thermodynamic-limit prediction for an entropy aggregate, or missing.
inline double entropy_theory(const ExperimentConfig& cfg, EntropyKind kind, double q, int n, int k, int subsystem,
                             double s) {
  if (std::isinf(q) || q <= 1) return kMissing;
  const double r = static_cast<double>(k) / n;
  try {
    if (cfg.model == ErrorKind::coherent) {
      if (s >= std::numbers::pi) return kMissing;
      switch (kind) {
        case EntropyKind::entanglement:
          return subsystem * theory::slope_entanglement_logical(q, r, static_cast<double>(subsystem) / n, s);
        case EntropyKind::participation_logical: return k * theory::dimension_participation_logical(q, r, s);
        case EntropyKind::participation_codespace: return n * theory::codespace_slopes(q, r, s).participation;
        case EntropyKind::thermodynamic: return 0.0;
      }
    }
    if (cfg.model == ErrorKind::depolarizing && kind == EntropyKind::thermodynamic)
      return k * theory::slope_thermo_logical(q, r, s);
  } catch (const InvalidArgument&) {
  }
  return kMissing;
}

inline void check_degenerate(std::size_t degenerate, std::size_t evaluations) {
  if (evaluations > 0 && static_cast<double>(degenerate) > kDegenerateAbortFraction * static_cast<double>(evaluations))
    throw DegenerateAbort(degenerate, evaluations);
}

/// Raw rows and aggregates for one size from the per-realization results,
/// indexed [realization][grid point].
inline void append_size(const ExperimentConfig& cfg, int n, const std::vector<std::vector<PointResult>>& results,
                        ResultTable& table) {
  const int k = cfg.logical_qubits(n);
  const double r = static_cast<double>(k) / n;
  const std::string kind = to_string(cfg.kind), backend = to_string(cfg.backend), model = to_string(cfg.model);
  const bool disordered = cfg.model == ErrorKind::coherent_disordered || cfg.model == ErrorKind::depolarizing_disordered;
  for (std::size_t g = 0; g < cfg.grid.size(); ++g) {
    const double s = cfg.grid[g];
    std::vector<double> m2, p2, f, theory;
    std::vector<std::vector<double>> ent;
    const RunRecord* any = nullptr;
    for (const auto& per_real : results) {
      const PointResult& pr = per_real[g];
      table.evaluations += pr.evaluations;
      table.degenerate += pr.degenerate;
      theory.push_back(pr.theory);
      if (!pr.record) continue;
      const RunRecord& rec = *pr.record;
      if (!any) {
        any = &rec;
        ent.resize(rec.entropies.size());
      }
      RawRow row{cfg.id, kind, backend, n, k, r, model, s, disordered ? s : kMissing,
                 cfg.model == ErrorKind::device_noise ? cfg.epsilon : kMissing, kMissing, k, rec.realization, rec.seed,
                 rec.m2, rec.p2, rec.fidelity, kFidelityKind, rec.fidelity, rec.post_prob};
      table.raw.push_back(row);
      for (std::size_t i = 0; i < rec.entropies.size(); ++i) {
        const auto& ev = rec.entropies[i];
        row.q = ev.q;
        row.subsystem = ev.subsystem;
        row.value_kind = to_string(ev.kind);
        row.value = ev.value;
        table.raw.push_back(row);
        ent[i].push_back(ev.value);
      }
      m2.push_back(rec.m2);
      p2.push_back(rec.p2);
      f.push_back(rec.fidelity);
    }
    if (!any) continue;
    const auto fs = stats::mean_sem(f);
    table.aggregated.push_back({cfg.id, kFidelityKind, n, k, r, model, s, kMissing, k, fs.mean, fs.sem, fs.n,
                                stats::mean(m2) / stats::mean(p2), stats::mean(theory)});
    for (std::size_t i = 0; i < ent.size(); ++i) {
      const auto& ev = any->entropies[i];
      const auto es = stats::mean_sem(ent[i]);
      table.aggregated.push_back({cfg.id, to_string(ev.kind), n, k, r, model, s, ev.q, ev.subsystem, es.mean, es.sem,
                                  es.n, kMissing, entropy_theory(cfg, ev.kind, ev.q, n, k, ev.subsystem, s)});
    }
  }
}

/// Quenched Monte Carlo sweep over sizes and the strength grid.
inline ResultTable run_quenched_sweep(const ExperimentConfig& cfg) {
  validate(cfg);
  if (cfg.kind == ExperimentKind::noisy_device || cfg.kind == ExperimentKind::theory_export ||
      cfg.kind == ExperimentKind::collapse)
    throw ConfigError("run_quenched_sweep: experiment kind " + to_string(cfg.kind) + " is not a sweep");
  ResultTable table;
  for (int n : cfg.sizes) {
    std::vector<std::vector<PointResult>> results(cfg.realizations);
    parallel_for(cfg.realizations, cfg.workers, [&](std::size_t i) { results[i] = run_realization(cfg, n, i); });
    append_size(cfg, n, results, table);
  }
  check_degenerate(table.degenerate, table.evaluations);
  return table;
}

}  // namespace encdec::harness
