#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "encdec/common.hpp"

namespace encdec::harness {

inline constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

/// Thrown when more than 1% of the evaluations hit a degenerate post-selection.
struct DegenerateAbort : Error {
  DegenerateAbort(std::size_t degenerate, std::size_t total)
      : Error("degenerate post-selection in " + std::to_string(degenerate) + " of " + std::to_string(total) +
              " evaluations (limit 1%)"),
        degenerate_count(degenerate),
        evaluations(total) {}
  std::size_t degenerate_count;
  std::size_t evaluations;
};

inline constexpr double kDegenerateAbortFraction = 0.01;

/// One per-realization value. Columns follow the raw CSV schema.
struct RawRow {
  std::string experiment_id;
  std::string kind;
  std::string backend;
  int n = 0;
  int k = 0;
  double r = 0.0;
  std::string model;
  double strength = kMissing;
  double disorder_w = kMissing;
  double epsilon = kMissing;
  double q = kMissing;
  int subsystem = 0;
  std::uint64_t realization = 0;
  std::uint64_t seed = 0;
  double m2 = kMissing;
  double p2 = kMissing;
  double fidelity = kMissing;
  std::string value_kind;
  double value = kMissing;
  double post_prob = kMissing;
};

/// Aggregate over realizations. `kind` holds the value kind (fidelity or an
/// entropy kind); the experiment is identified by experiment_id.
struct AggregateRow {
  std::string experiment_id;
  std::string kind;
  int n = 0;
  int k = 0;
  double r = 0.0;
  std::string model;
  double strength = kMissing;
  double q = kMissing;
  int subsystem = 0;
  double mean = kMissing;
  double sem = kMissing;
  std::uint64_t n_real = 0;
  double annealed_ratio = kMissing;
  double theory_value = kMissing;
};

struct ResultTable {
  std::vector<RawRow> raw;
  std::vector<AggregateRow> aggregated;
  std::size_t evaluations = 0;
  std::size_t degenerate = 0;
};

inline constexpr const char* kFidelityKind = "fidelity";

}  // namespace encdec::harness
