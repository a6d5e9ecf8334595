#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <vector>

#include "encdec/common.hpp"

namespace encdec::stats {

/// Neumaier-compensated accumulator. Sums of a few thousand O(1) terms agree
/// to ~1e-16 relative regardless of summation order.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

inline double sum(std::span<const double> xs) {
  CompensatedSum acc;
  for (double x : xs) acc.add(x);
  return acc.value();
}

inline double mean(std::span<const double> xs) {
  detail::require(!xs.empty(), "mean: empty sample");
  return sum(xs) / static_cast<double>(xs.size());
}

/// Unbiased sample variance (n - 1 denominator); 0 for a single value.
inline double variance(std::span<const double> xs) {
  detail::require(!xs.empty(), "variance: empty sample");
  if (xs.size() < 2) return 0.0;
  const double m = mean(xs);
  CompensatedSum acc;
  for (double x : xs) acc.add((x - m) * (x - m));
  return acc.value() / static_cast<double>(xs.size() - 1);
}

struct MeanSem {
  double mean = 0.0;
  double sem = 0.0;
  std::size_t n = 0;
};

inline MeanSem mean_sem(std::span<const double> xs) {
  MeanSem out;
  out.n = xs.size();
  out.mean = mean(xs);
  out.sem = std::sqrt(variance(xs) / static_cast<double>(xs.size()));
  return out;
}

/// Delete-one jackknife of a statistic computed from two paired samples.
/// Returns (full-sample estimate, jackknife standard error).
inline MeanSem jackknife(std::span<const double> a, std::span<const double> b,
                         const std::function<double(double, double)>& stat_of_means) {
  detail::require(a.size() == b.size() && a.size() >= 2, "jackknife: need >= 2 paired values");
  const auto n = static_cast<double>(a.size());
  const double sa = sum(a), sb = sum(b);
  std::vector<double> leave_one(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    leave_one[i] = stat_of_means((sa - a[i]) / (n - 1), (sb - b[i]) / (n - 1));
  const double jm = mean(leave_one);
  CompensatedSum acc;
  for (double v : leave_one) acc.add((v - jm) * (v - jm));
  return {stat_of_means(sa / n, sb / n), std::sqrt((n - 1) / n * acc.value()), a.size()};
}

/// Relative realization-to-realization fluctuation: population std / mean.
inline double relative_fluctuation(std::span<const double> xs) {
  const double m = mean(xs);
  CompensatedSum acc;
  for (double x : xs) acc.add((x - m) * (x - m));
  return std::sqrt(acc.value() / static_cast<double>(xs.size())) / m;
}

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  double slope_se = 0.0;
};

/// Ordinary least squares y = intercept + slope * x.
inline LinearFit linear_fit(std::span<const double> x, std::span<const double> y) {
  detail::require(x.size() == y.size() && x.size() >= 2, "linear_fit: need >= 2 points");
  const auto n = static_cast<double>(x.size());
  const double mx = mean(x), my = mean(y);
  CompensatedSum sxx, sxy, syy;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx.add((x[i] - mx) * (x[i] - mx));
    sxy.add((x[i] - mx) * (y[i] - my));
    syy.add((y[i] - my) * (y[i] - my));
  }
  detail::require(sxx.value() > 0, "linear_fit: degenerate abscissae");
  LinearFit f;
  f.slope = sxy.value() / sxx.value();
  f.intercept = my - f.slope * mx;
  const double ss_res = std::max(0.0, syy.value() - f.slope * sxy.value());
  f.r2 = syy.value() > 0 ? 1.0 - ss_res / syy.value() : 1.0;
  f.slope_se = x.size() > 2 ? std::sqrt(ss_res / (n - 2) / sxx.value()) : 0.0;
  return f;
}

}  // namespace encdec::stats
