#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "encdec/harness/config.hpp"
#include "encdec/harness/pipeline.hpp"
#include "encdec/harness/results.hpp"
#include "encdec/observables.hpp"
#include "encdec/stats.hpp"

namespace encdec::harness {

/// Quenched vs annealed comparison at one (N, strength). The annealed value is
/// the ratio of sample means mean(m2)/mean(p2) over the same realizations, so
/// the difference is not swamped by the sampling noise of either average.
struct SelfAveragingPoint {
  int n = 0;
  double strength = 0.0;
  std::size_t n_real = 0;
  double quenched = 0.0;      // mean of m2/p2
  double quenched_sem = 0.0;
  double annealed = 0.0;      // mean(m2)/mean(p2)
  double theory = kMissing;   // closed-form annealed value
  double difference = 0.0;    // |quenched - annealed|
  FluctuationRatios fluctuations;
};

/// ln y = a - rate * N fitted over sizes.
struct DecayFit {
  std::string quantity;  // "difference", "fluct_m2", "fluct_p2"
  double strength = 0.0;
  double rate = kMissing;
  double r2 = kMissing;
  std::size_t points = 0;
  std::string status;  // "ok" or "degenerate"
};

struct SelfAveragingResult {
  ResultTable table;
  std::vector<SelfAveragingPoint> points;
  std::vector<DecayFit> fits;
};

/// Fidelity samples of one (N, strength) from raw rows.
struct FidelitySamples {
  std::vector<double> m2, p2, fidelity;
};

inline FidelitySamples fidelity_samples(const ResultTable& table, int n, double strength) {
  FidelitySamples s;
  for (const auto& row : table.raw)
    if (row.n == n && row.strength == strength && row.value_kind == kFidelityKind) {
      s.m2.push_back(row.m2);
      s.p2.push_back(row.p2);
      s.fidelity.push_back(row.fidelity);
    }
  return s;
}

/// Values at or below this are roundoff from an exactly trivial point.
inline constexpr double kFluctuationFloor = 1e-12;

inline DecayFit fit_decay(const std::string& quantity, double strength, const std::vector<int>& sizes,
                          const std::vector<double>& values) {
  DecayFit f{quantity, strength, kMissing, kMissing, values.size(), "degenerate"};
  std::vector<double> x, y;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] > kFluctuationFloor) || !std::isfinite(values[i])) return f;
    x.push_back(sizes[i]);
    y.push_back(std::log(values[i]));
  }
  if (x.size() < 2) return f;
  const stats::LinearFit lf = stats::linear_fit(x, y);
  f.rate = -lf.slope;
  f.r2 = lf.r2;
  f.status = "ok";
  return f;
}

/// Quenched-annealed differences and fluctuation ratios from a finished sweep.
inline SelfAveragingResult self_averaging_from_table(const ExperimentConfig& cfg, ResultTable table) {
  SelfAveragingResult out;
  for (double s : cfg.grid) {
    std::vector<double> diff, fm2, fp2;
    std::vector<int> sizes;
    for (int n : cfg.sizes) {
      const FidelitySamples fs = fidelity_samples(table, n, s);
      if (fs.fidelity.size() < kMinFluctuationSample)
        throw ConfigError("self-averaging study needs >= 30 realizations per point");
      SelfAveragingPoint p;
      p.n = n;
      p.strength = s;
      p.n_real = fs.fidelity.size();
      const auto q = stats::mean_sem(fs.fidelity);
      p.quenched = q.mean;
      p.quenched_sem = q.sem;
      p.annealed = stats::mean(fs.m2) / stats::mean(fs.p2);
      p.difference = std::abs(p.quenched - p.annealed);
      p.fluctuations = fluctuation_ratios(fs.m2, fs.p2);
      for (const auto& a : table.aggregated)
        if (a.n == n && a.strength == s && a.kind == kFidelityKind) p.theory = a.theory_value;
      out.points.push_back(p);
      sizes.push_back(n);
      diff.push_back(p.difference);
      fm2.push_back(p.fluctuations.numerator.mean);
      fp2.push_back(p.fluctuations.denominator.mean);
    }
    out.fits.push_back(fit_decay("difference", s, sizes, diff));
    out.fits.push_back(fit_decay("fluct_m2", s, sizes, fm2));
    out.fits.push_back(fit_decay("fluct_p2", s, sizes, fp2));
  }
  out.table = std::move(table);
  return out;
}

inline SelfAveragingResult run_selfaveraging_study(const ExperimentConfig& cfg) {
  validate(cfg);
  if (cfg.sizes.size() < 4) throw ConfigError("self-averaging study needs >= 4 sizes");
  return self_averaging_from_table(cfg, run_quenched_sweep(cfg));
}

}  // namespace encdec::harness
