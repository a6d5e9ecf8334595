#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "encdec/harness/config.hpp"
#include "encdec/harness/results.hpp"
#include "encdec/theory/annealed.hpp"
#include "encdec/theory/critical.hpp"
#include "encdec/theory/disorder.hpp"
#include "encdec/theory/scaling.hpp"
#include "encdec/theory/slopes.hpp"

namespace encdec::harness {

/// One closed-form value. N and k are missing for thermodynamic-limit rows.
struct TheoryRow {
  std::string kind;
  double n = kMissing;
  double k = kMissing;
  double r = kMissing;
  double q = kMissing;
  double strength = kMissing;
  double value = kMissing;
};

namespace detail {

inline double rate_of(const ExperimentConfig& cfg, int n) {
  return static_cast<double>(cfg.logical_qubits(n)) / n;
}

template <class F>
void push_if_defined(std::vector<TheoryRow>& out, TheoryRow row, F&& value) {
  try {
    row.value = value();
  } catch (const InvalidArgument&) {
    return;
  }
  if (std::isfinite(row.value)) out.push_back(row);
}

}  // namespace detail

/// Closed-form curves for the configured model: finite-N annealed fidelity,
/// entropy slopes per q, critical points and scaling functions.
inline std::vector<TheoryRow> theory_rows(const ExperimentConfig& cfg) {
  std::vector<TheoryRow> out;
  const double r_limit = cfg.rate.value_or(cfg.sizes.empty() ? 0.5 : detail::rate_of(cfg, cfg.sizes.front()));
  const bool coherent_like = cfg.model == ErrorKind::coherent || cfg.model == ErrorKind::coherent_disordered ||
                             cfg.model == ErrorKind::device_noise;

  for (int n : cfg.sizes) {
    const int k = cfg.logical_qubits(n);
    const double r = detail::rate_of(cfg, n);
    for (double s : cfg.grid) {
      TheoryRow row{"fidelity_annealed", double(n), double(k), r, kMissing, s, kMissing};
      switch (cfg.model) {
        case ErrorKind::coherent:
        case ErrorKind::device_noise:
          detail::push_if_defined(out, row, [&] { return theory::annealed_fidelity_coherent(n, k, s); });
          break;
        case ErrorKind::depolarizing:
          detail::push_if_defined(out, row, [&] { return theory::annealed_fidelity_depolarizing(n, k, s); });
          row.kind = "scaling_logistic";
          detail::push_if_defined(out, row, [&] { return theory::ScalingFunction::logistic_nu1_for_rate(r)(n, s); });
          break;
        case ErrorKind::depolarizing_disordered: {
          row.kind = "scaling_erf";
          const auto f = std::abs(r - 0.5) < 1e-12 ? theory::ScalingFunction::erf_nu2_default()
                                                   : theory::ScalingFunction::erf_nu2_computed(r);
          detail::push_if_defined(out, row, [&] { return f(n, s); });
          break;
        }
        case ErrorKind::coherent_disordered: break;
      }
    }
  }

  for (double s : cfg.grid) {
    if (cfg.model == ErrorKind::coherent_disordered)
      detail::push_if_defined(out, {"mean_rate", kMissing, kMissing, kMissing, kMissing, s, kMissing},
                              [&] { return theory::mean_rate_coherent(s); });
    if (cfg.model == ErrorKind::depolarizing_disordered)
      detail::push_if_defined(out, {"mean_rate", kMissing, kMissing, kMissing, kMissing, s, kMissing},
                              [&] { return theory::mean_rate_depolarizing(s); });
    for (double q : cfg.q_list) {
      TheoryRow row{"", kMissing, kMissing, r_limit, q, s, kMissing};
      if (cfg.model == ErrorKind::coherent) {
        row.kind = "slope_entanglement";
        detail::push_if_defined(out, row, [&] {
          return theory::slope_entanglement_logical(q, r_limit, cfg.subsystem_fraction, s);
        });
        row.kind = "slope_participation_logical";
        detail::push_if_defined(out, row, [&] { return theory::dimension_participation_logical(q, r_limit, s); });
        row.kind = "slope_participation_codespace";
        detail::push_if_defined(out, row, [&] { return theory::codespace_slopes(q, r_limit, s).participation; });
      } else if (cfg.model == ErrorKind::depolarizing) {
        row.kind = "slope_thermodynamic";
        detail::push_if_defined(out, row, [&] { return theory::slope_thermo_logical(q, r_limit, s); });
      }
    }
  }

  TheoryRow crit{"", kMissing, kMissing, r_limit, kMissing, kMissing, kMissing};
  switch (cfg.model) {
    case ErrorKind::coherent:
    case ErrorKind::device_noise:
      crit.kind = "critical_alpha";
      detail::push_if_defined(out, crit, [&] { return theory::critical_alpha_value(r_limit); });
      break;
    case ErrorKind::depolarizing:
      crit.kind = "critical_lambda";
      detail::push_if_defined(out, crit, [&] { return theory::critical_lambda_value(r_limit); });
      break;
    case ErrorKind::coherent_disordered:
    case ErrorKind::depolarizing_disordered:
      crit.kind = coherent_like ? "critical_width_coherent" : "critical_width_depolarizing";
      detail::push_if_defined(out, crit,
                              [&] { return theory::solve_disordered_critical(cfg.model, r_limit).value; });
      break;
  }
  return out;
}

}  // namespace encdec::harness
