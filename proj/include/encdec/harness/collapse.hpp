#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/QR>
#include <boost/math/tools/minima.hpp>
#include <gsl/gsl_bspline.h>
#include <gsl/gsl_multimin.h>
#include <gsl/gsl_vector.h>

#include "encdec/common.hpp"
#include "encdec/harness/results.hpp"
#include "encdec/rng.hpp"

namespace encdec::harness {

struct CurvePoint {
  int n = 0;
  double strength = 0.0;
  double value = 0.0;
  double sem = 0.0;
};

struct CollapseOptions {
  double nu_lo = 0.5, nu_hi = 3.0;
  double critical_lo = 0.0, critical_hi = 1.0;
  std::optional<double> fixed_nu;
  std::size_t bootstrap = 200;
  std::uint64_t seed = 1;
  int segments = 0;   // spline segments over the common window; 0 picks from points per curve
  int grid_steps = 21;
};

struct CollapseFit {
  double critical = kMissing;
  double nu = kMissing;
  double residual = kMissing;
  double critical_err = 0.0;  // bootstrap standard deviation
  double nu_err = 0.0;
  double critical_ci_lo = kMissing, critical_ci_hi = kMissing;  // 16th / 84th percentiles
  double nu_ci_lo = kMissing, nu_ci_hi = kMissing;
  std::size_t bootstrap_samples = 0;
  bool locally_optimal = false;  // residual <= residual at nu +- 0.5, same critical point
  std::vector<std::string> curves;  // "N=<n>" identifiers
};

inline constexpr double kCollapseInvalid = 1e30;

namespace detail {

struct GslBspline {
  gsl_bspline_workspace* w;
  gsl_vector* b;
  GslBspline(int segments, double lo, double hi)
      : w(gsl_bspline_alloc(4, static_cast<std::size_t>(segments) + 1)), b(gsl_vector_alloc(gsl_bspline_ncoeffs(w))) {
    gsl_bspline_knots_uniform(lo, hi, w);
  }
  ~GslBspline() {
    gsl_vector_free(b);
    gsl_bspline_free(w);
  }
  GslBspline(const GslBspline&) = delete;
  GslBspline& operator=(const GslBspline&) = delete;
  std::size_t size() const { return b->size; }
  const gsl_vector* eval(double x) {
    gsl_bspline_eval(x, b, w);
    return b;
  }
};

}  // namespace detail

/// Default master-curve flexibility: a third of the points per curve, in [4, 16].
inline int auto_segments(const std::vector<CurvePoint>& pts) {
  std::map<int, int> count;
  for (const auto& p : pts) ++count[p.n];
  if (count.empty()) return 4;
  const int per_curve = static_cast<int>(pts.size() / count.size());
  return std::clamp(per_curve / 3, 4, 16);
}

/// Mean weighted squared deviation of the points inside the common x-window
/// from a least-squares cubic B-spline master curve, x = (s - c) N^{1/nu}.
/// Weights are 1/sem^2 when every sem is positive, otherwise 1.
inline double collapse_residual(const std::vector<CurvePoint>& pts, double critical, double nu, int segments = 0) {
  if (!(nu > 0)) return kCollapseInvalid;
  if (segments <= 0) segments = auto_segments(pts);
  std::map<int, std::pair<double, double>> range;
  std::vector<double> xs(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    xs[i] = (pts[i].strength - critical) * std::pow(static_cast<double>(pts[i].n), 1 / nu);
    auto [it, fresh] = range.try_emplace(pts[i].n, xs[i], xs[i]);
    if (!fresh) {
      it->second.first = std::min(it->second.first, xs[i]);
      it->second.second = std::max(it->second.second, xs[i]);
    }
  }
  double lo = -std::numeric_limits<double>::infinity(), hi = std::numeric_limits<double>::infinity();
  for (const auto& [n, r] : range) {
    lo = std::max(lo, r.first);
    hi = std::min(hi, r.second);
  }
  if (!(hi > lo)) return kCollapseInvalid;
  bool weighted = true;
  for (const auto& p : pts) weighted = weighted && p.sem > 0;
  std::vector<std::size_t> inside;
  std::map<int, int> per_size;
  for (std::size_t i = 0; i < pts.size(); ++i)
    if (xs[i] >= lo && xs[i] <= hi) {
      inside.push_back(i);
      ++per_size[pts[i].n];
    }
  detail::GslBspline spline(segments, lo, hi);
  const std::size_t nc = spline.size();
  if (inside.size() < nc + 2 || per_size.size() < range.size()) return kCollapseInvalid;
  for (const auto& [n, c] : per_size)
    if (c < 2) return kCollapseInvalid;
  Eigen::MatrixXd a(static_cast<Eigen::Index>(inside.size()), static_cast<Eigen::Index>(nc));
  Eigen::VectorXd y(static_cast<Eigen::Index>(inside.size()));
  for (std::size_t r = 0; r < inside.size(); ++r) {
    const auto& p = pts[inside[r]];
    const gsl_vector* b = spline.eval(xs[inside[r]]);
    const double sw = weighted ? 1 / p.sem : 1.0;
    for (std::size_t c = 0; c < nc; ++c) a(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = sw * gsl_vector_get(b, c);
    y(static_cast<Eigen::Index>(r)) = sw * p.value;
  }
  const Eigen::VectorXd coef = a.colPivHouseholderQr().solve(y);
  return (a * coef - y).squaredNorm() / static_cast<double>(inside.size());
}

namespace detail {

struct CollapseObjective {
  const std::vector<CurvePoint>* pts;
  CollapseOptions opt;
  double operator()(double c, double nu) const {
    if (c < opt.critical_lo || c > opt.critical_hi || nu < opt.nu_lo || nu > opt.nu_hi) return kCollapseInvalid;
    return collapse_residual(*pts, c, nu, opt.segments);
  }
};

inline double gsl_objective(const gsl_vector* v, void* params) {
  const auto* obj = static_cast<const CollapseObjective*>(params);
  return (*obj)(gsl_vector_get(v, 0), gsl_vector_get(v, 1));
}

/// Nelder-Mead (GSL nmsimplex2) from a starting point.
inline std::pair<double, double> nelder_mead(const CollapseObjective& obj, double c0, double nu0) {
  gsl_multimin_function f{&gsl_objective, 2, const_cast<CollapseObjective*>(&obj)};
  gsl_vector* x = gsl_vector_alloc(2);
  gsl_vector* step = gsl_vector_alloc(2);
  gsl_vector_set(x, 0, c0);
  gsl_vector_set(x, 1, nu0);
  gsl_vector_set(step, 0, 0.05 * (obj.opt.critical_hi - obj.opt.critical_lo));
  gsl_vector_set(step, 1, 0.05 * (obj.opt.nu_hi - obj.opt.nu_lo));
  gsl_multimin_fminimizer* m = gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, 2);
  gsl_multimin_fminimizer_set(m, &f, x, step);
  for (int it = 0; it < 500; ++it) {
    if (gsl_multimin_fminimizer_iterate(m)) break;
    if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(m), 1e-7) == GSL_SUCCESS) break;
  }
  const std::pair<double, double> best{gsl_vector_get(m->x, 0), gsl_vector_get(m->x, 1)};
  gsl_multimin_fminimizer_free(m);
  gsl_vector_free(step);
  gsl_vector_free(x);
  return best;
}

/// Grid search, then local refinement (Nelder-Mead, or Brent when nu is fixed).
inline std::pair<double, double> minimize_collapse(const CollapseObjective& obj, std::optional<std::pair<double, double>> start) {
  const auto& o = obj.opt;
  if (o.fixed_nu) {
    const double nu = *o.fixed_nu;
    double c0 = start ? start->first : 0.5 * (o.critical_lo + o.critical_hi);
    double lo = o.critical_lo, hi = o.critical_hi;
    if (!start) {
      double best = kCollapseInvalid * 10;
      for (int i = 0; i <= 4 * o.grid_steps; ++i) {
        const double c = o.critical_lo + (o.critical_hi - o.critical_lo) * i / (4.0 * o.grid_steps);
        const double v = obj(c, nu);
        if (v < best) best = v, c0 = c;
      }
    }
    const double h = (o.critical_hi - o.critical_lo) / (4.0 * o.grid_steps);
    lo = std::max(o.critical_lo, c0 - 2 * h);
    hi = std::min(o.critical_hi, c0 + 2 * h);
    const auto r = boost::math::tools::brent_find_minima([&](double c) { return obj(c, nu); }, lo, hi, 40);
    return {obj(r.first, nu) <= obj(c0, nu) ? r.first : c0, nu};
  }
  double c0 = 0, nu0 = 0;
  if (start) {
    std::tie(c0, nu0) = *start;
  } else {
    double best = kCollapseInvalid * 10;
    for (int i = 0; i <= o.grid_steps; ++i)
      for (int j = 0; j <= o.grid_steps; ++j) {
        const double c = o.critical_lo + (o.critical_hi - o.critical_lo) * i / o.grid_steps;
        const double nu = o.nu_lo + (o.nu_hi - o.nu_lo) * j / o.grid_steps;
        const double v = obj(c, nu);
        if (v < best) best = v, c0 = c, nu0 = nu;
      }
  }
  const auto nm = nelder_mead(obj, c0, nu0);
  return obj(nm.first, nm.second) <= obj(c0, nu0) ? nm : std::pair{c0, nu0};
}

inline double percentile(std::vector<double> v, double p) {
  std::sort(v.begin(), v.end());
  const double pos = p * static_cast<double>(v.size() - 1);
  const auto i = static_cast<std::size_t>(pos);
  const double f = pos - static_cast<double>(i);
  return i + 1 < v.size() ? v[i] * (1 - f) + v[i + 1] * f : v[i];
}

}  // namespace detail

/// Checks the input: >= 3 sizes and overlapping strength windows.
inline void check_collapse_input(const std::vector<CurvePoint>& pts) {
  std::map<int, std::pair<double, double>> range;
  for (const auto& p : pts) {
    auto [it, fresh] = range.try_emplace(p.n, p.strength, p.strength);
    if (!fresh) {
      it->second.first = std::min(it->second.first, p.strength);
      it->second.second = std::max(it->second.second, p.strength);
    }
  }
  if (range.size() < 3) throw InvalidArgument("run_data_collapse: need curves for >= 3 distinct N");
  double lo = -std::numeric_limits<double>::infinity(), hi = std::numeric_limits<double>::infinity();
  for (const auto& [n, r] : range) {
    lo = std::max(lo, r.first);
    hi = std::min(hi, r.second);
  }
  if (!(hi > lo)) throw InvalidArgument("run_data_collapse: strength windows do not overlap");
}

/// Fits the critical point and exponent nu. Bootstrap resamples each point as
/// value + sem * Normal(0, 1) (skipped when no point carries an error bar).
inline CollapseFit run_data_collapse(const std::vector<CurvePoint>& pts, const CollapseOptions& opt) {
  check_collapse_input(pts);
  encdec::detail::require(opt.nu_lo > 0 && opt.nu_hi > opt.nu_lo, "run_data_collapse: bad nu range");
  encdec::detail::require(opt.critical_hi > opt.critical_lo, "run_data_collapse: bad critical range");
  const detail::CollapseObjective obj{&pts, opt};
  const auto [c, nu] = detail::minimize_collapse(obj, std::nullopt);
  CollapseFit fit;
  fit.critical = c;
  fit.nu = nu;
  fit.residual = obj(c, nu);
  if (fit.residual >= kCollapseInvalid) throw Error("run_data_collapse: no admissible collapse in the search ranges");
  fit.locally_optimal = fit.residual <= collapse_residual(pts, c, nu + 0.5, opt.segments) &&
                        (nu <= 0.5 || fit.residual <= collapse_residual(pts, c, nu - 0.5, opt.segments));
  std::map<int, bool> sizes;
  for (const auto& p : pts) sizes[p.n] = true;
  for (const auto& [n, _] : sizes) fit.curves.push_back("N=" + std::to_string(n));

  bool has_err = false;
  for (const auto& p : pts) has_err = has_err || p.sem > 0;
  fit.critical_ci_lo = fit.critical_ci_hi = c;
  fit.nu_ci_lo = fit.nu_ci_hi = nu;
  if (!has_err || opt.bootstrap == 0) return fit;
  RngStream rng(opt.seed);
  std::normal_distribution<double> g;
  std::vector<double> cs, nus;
  for (std::size_t b = 0; b < opt.bootstrap; ++b) {
    std::vector<CurvePoint> resampled = pts;
    for (auto& p : resampled) p.value += p.sem * g(rng);
    const detail::CollapseObjective bobj{&resampled, opt};
    const auto [bc, bnu] = detail::minimize_collapse(bobj, std::pair{c, nu});
    if (bobj(bc, bnu) >= kCollapseInvalid) continue;
    cs.push_back(bc);
    nus.push_back(bnu);
  }
  fit.bootstrap_samples = cs.size();
  if (cs.size() >= 2) {
    auto sd = [](const std::vector<double>& v) {
      double m = 0, s = 0;
      for (double x : v) m += x;
      m /= static_cast<double>(v.size());
      for (double x : v) s += (x - m) * (x - m);
      return std::sqrt(s / static_cast<double>(v.size() - 1));
    };
    fit.critical_err = sd(cs);
    fit.nu_err = sd(nus);
    fit.critical_ci_lo = detail::percentile(cs, 0.16);
    fit.critical_ci_hi = detail::percentile(cs, 0.84);
    fit.nu_ci_lo = detail::percentile(nus, 0.16);
    fit.nu_ci_hi = detail::percentile(nus, 0.84);
  }
  return fit;
}

/// Fidelity curves from an aggregated table.
inline std::vector<CurvePoint> fidelity_curves(const std::vector<AggregateRow>& rows) {
  std::vector<CurvePoint> out;
  for (const auto& r : rows)
    if (r.kind == kFidelityKind) out.push_back({r.n, r.strength, r.mean, std::isnan(r.sem) ? 0.0 : r.sem});
  return out;
}

}  // namespace encdec::harness
