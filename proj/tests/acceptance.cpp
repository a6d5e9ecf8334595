// Acceptance run: one PASS/FAIL line per criterion. Aggregated tables are
// written under $ENCDEC_ACCEPTANCE_OUT (default ./acceptance_out).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "encdec/encdec.hpp"

namespace fs = std::filesystem;
using namespace encdec;
using namespace encdec::harness;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Report {
 public:
  void check(bool ok, const std::string& what) {
    pass_ = pass_ && ok;
    if (!detail_.empty()) detail_ += "; ";
    detail_ += (ok ? "" : "!") + what;
  }
  void note(const std::string& what) {
    if (!detail_.empty()) detail_ += "; ";
    detail_ += "[" + what + "]";
  }
  Outcome outcome() const { return {pass_, detail_}; }

 private:
  bool pass_ = true;
  std::string detail_;
};

std::string num(double v, int digits = 4) {
  std::ostringstream s;
  s.precision(digits);
  s << v;
  return s.str();
}

fs::path out_root() {
  const char* env = std::getenv("ENCDEC_ACCEPTANCE_OUT");
  return env ? fs::path(env) : fs::path("acceptance_out");
}

void save(const ResultTable& t, const ExperimentConfig& c) {
  emit_results(t, out_root() / c.id, OutputFormat::csv, c, {0.0, resolve_workers(c.workers)});
}

ExperimentConfig config(const std::string& id, ErrorKind model, std::vector<int> sizes, std::vector<double> grid,
                        std::size_t realizations, Backend backend) {
  ExperimentConfig c;
  c.id = id;
  c.model = model;
  c.sizes = std::move(sizes);
  c.grid = std::move(grid);
  c.realizations = realizations;
  c.backend = backend;
  c.seed = 20240611;
  return c;
}

const AggregateRow& find(const ResultTable& t, int n, double s, const std::string& kind = kFidelityKind,
                         double q = kMissing) {
  for (const auto& a : t.aggregated)
    if (a.n == n && a.strength == s && a.kind == kind && (std::isnan(q) || a.q == q)) return a;
  throw Error("aggregate row missing for N=" + std::to_string(n));
}

/// Every fidelity aggregate within z SEM of its theory value; returns the worst |dev|/sem.
double worst_z(const ResultTable& t, int& failures) {
  double worst = 0.0;
  failures = 0;
  for (const auto& a : t.aggregated) {
    if (a.kind != kFidelityKind) continue;
    const double dev = std::abs(a.mean - a.theory_value);
    if (dev > 3 * a.sem + 1e-12) ++failures;
    if (a.sem > 0) worst = std::max(worst, dev / a.sem);
  }
  return worst;
}

//------------------------------------------------------------------------------

Outcome exact_oracle() {
  std::mt19937_64 rng(2718);
  std::uniform_real_distribution<double> ua(0, std::numbers::pi / 2), ul(0, 1);
  double worst = 0.0;
  int cases = 0;
  for (int n = 1; n <= 8; ++n)
    for (int k = 1; k <= n; ++k)
      for (int s = 0; s < 20; ++s) {
        ErrorModel coh = ErrorModel::coherent_disordered(1.0), dep = ErrorModel::depolarizing_disordered(1.0);
        for (int i = 0; i < n; ++i) {
          coh.site_strengths.push_back(ua(rng));
          dep.site_strengths.push_back(ul(rng));
        }
        worst = std::max(worst, std::abs(theory::weingarten_fidelity_oracle(n, k, coh) -
                                         theory::annealed_fidelity_coherent(n, k, coh.site_strengths)));
        worst = std::max(worst, std::abs(theory::weingarten_fidelity_oracle(n, k, dep) -
                                         theory::annealed_fidelity_depolarizing(n, k, dep.site_strengths)));
        cases += 2;
      }
  Report r;
  r.check(worst < 1e-12, std::to_string(cases) + " cases, max |diff| = " + num(worst, 3));
  return r.outcome();
}

Outcome coherent_transition() {
  auto c = config("coherent_sweep", ErrorKind::coherent, {8, 10, 12}, parse_grid("0:1.5707963267948966:15"), 1000,
                  Backend::pure);
  const ResultTable t = run_quenched_sweep(c);
  save(t, c);
  int failures = 0;
  const double z = worst_z(t, failures);
  Report r;
  r.check(failures == 0, std::to_string(failures) + "/45 points outside 3 SEM (worst " + num(z, 3) + " SEM)");
  double crossing = kMissing;
  for (std::size_t g = 1; g < c.grid.size(); ++g) {
    const double a = find(t, 12, c.grid[g - 1]).mean, b = find(t, 12, c.grid[g]).mean;
    if (a >= 0.5 && b < 0.5) {
      crossing = c.grid[g - 1] + (a - 0.5) / (a - b) * (c.grid[g] - c.grid[g - 1]);
      break;
    }
  }
  const double ac = theory::critical_alpha_value(0.5);
  r.check(std::abs(crossing - ac) <= 0.05, "N=12 crossing " + num(crossing, 5) + " vs alpha_c " + num(ac, 6));
  return r.outcome();
}

Outcome depolarizing_transition() {
  auto c = config("depolarizing_sweep", ErrorKind::depolarizing, {4, 6, 8}, parse_grid("0:1:11"), 300,
                  Backend::density);
  c.entropies = {EntropyKind::thermodynamic};
  const ResultTable t = run_quenched_sweep(c);
  save(t, c);
  int failures = 0;
  const double z = worst_z(t, failures);
  Report r;
  r.check(failures == 0, std::to_string(failures) + "/33 points outside 3 SEM (worst " + num(z, 3) + " SEM)");
  for (int n : c.sizes) {
    const int k = n / 2;
    const double f = find(t, n, 1.0).mean, s2 = find(t, n, 1.0, "thermodynamic", 2.0).mean;
    r.check(std::abs(f - std::exp2(-k)) < 1e-9 && std::abs(s2 - k) <= 0.05,
            "N=" + std::to_string(n) + " lambda=1: F=" + num(f, 6) + " S2=" + num(s2, 6));
  }
  return r.outcome();
}

// Shared N = 12 and N = 16 coherent run for the entanglement and participation windows.
const ResultTable& window_run() {
  static const ResultTable t = [] {
    auto c = config("entropy_window", ErrorKind::coherent, {12, 16}, {1.15, 1.20, 1.25}, 300, Backend::pure);
    c.entropies = {EntropyKind::entanglement, EntropyKind::participation_logical};
    c.q_list = {2.0, 3.0};
    ResultTable res = run_quenched_sweep(c);
    save(res, c);
    return res;
  }();
  return t;
}

Outcome entanglement_window() {
  const ResultTable& t = window_run();
  Report r;
  double dev12 = 0, dev16 = 0;
  for (double a : {1.15, 1.20, 1.25}) {
    const double slope = theory::slope_entanglement_logical(2.0, 0.5, 0.25, a);
    const auto& e16 = find(t, 16, a, "entanglement", 2.0);
    const auto& e12 = find(t, 12, a, "entanglement", 2.0);
    const double m16 = e16.mean / e16.subsystem, m12 = e12.mean / e12.subsystem;
    const double rel16 = std::abs(m16 / slope - 1), rel12 = std::abs(m12 / slope - 1);
    dev12 += rel12 / 3;
    dev16 += rel16 / 3;
    r.check(rel16 <= 0.15, "alpha=" + num(a, 3) + ": S2/|X1|=" + num(m16) + " vs " + num(slope) + " (" +
                               num(100 * rel16, 3) + "%)");
  }
  r.check(dev16 < dev12, "mean deviation N=12 " + num(100 * dev12, 3) + "% -> N=16 " + num(100 * dev16, 3) + "%");
  // Diagnostic only: increment per added subsystem qubit between the two sizes.
  std::string inc = "dS2/d|X1| (12->16):";
  for (double a : {1.15, 1.20, 1.25}) {
    const auto& e16 = find(t, 16, a, "entanglement", 2.0);
    const auto& e12 = find(t, 12, a, "entanglement", 2.0);
    inc += " " + num((e16.mean - e12.mean) / (e16.subsystem - e12.subsystem));
  }
  r.note(inc);
  return r.outcome();
}

Outcome participation_window() {
  const ResultTable& t = window_run();
  Report r;
  const double d2 = theory::dimension_participation_logical(2.0, 0.5, 1.2);
  r.check(std::abs(d2 - 0.2158) < 1e-3, "D_2(1.2)=" + num(d2, 5) + " vs 0.2158");
  std::vector<const AggregateRow*> rows;
  for (double q : {2.0, 3.0}) {
    const auto& a = find(t, 16, 1.2, "participation_logical", q);
    rows.push_back(&a);
    const double dq = theory::dimension_participation_logical(q, 0.5, 1.2);
    const double rel = std::abs(a.mean / a.subsystem / dq - 1);
    r.check(rel <= 0.15, "q=" + num(q, 2) + ": S/k=" + num(a.mean / a.subsystem) + " vs D_q=" + num(dq) + " (" +
                             num(100 * rel, 3) + "%)");
  }
  const double gap = std::abs(rows[0]->mean - rows[1]->mean) / rows[0]->subsystem;
  const double sem = std::hypot(rows[0]->sem, rows[1]->sem) / rows[0]->subsystem;
  r.check(gap > 3 * sem, "D_2-D_3 gap " + num(gap) + " = " + num(gap / sem, 3) + " combined SEM");
  // Diagnostic only: increment per added logical qubit between the two sizes.
  std::string inc = "dS/dk (12->16):";
  for (double q : {2.0, 3.0}) {
    const auto& a16 = find(t, 16, 1.2, "participation_logical", q);
    const auto& a12 = find(t, 12, 1.2, "participation_logical", q);
    inc += " q=" + num(q, 2) + " " + num((a16.mean - a12.mean) / 2);
  }
  r.note(inc);
  return r.outcome();
}

Outcome self_averaging() {
  Report r;
  auto c = config("selfavg_coherent", ErrorKind::coherent, {6, 8, 10, 12}, {1.2}, 4000, Backend::pure);
  c.kind = ExperimentKind::selfavg;
  const SelfAveragingResult res = run_selfaveraging_study(c);
  save(res.table, c);
  harness::detail::write_text(out_root() / c.id / "selfavg_fits.csv", selfavg_fits_csv(res.fits));
  harness::detail::write_text(out_root() / c.id / "selfavg_points.csv", selfavg_points_csv(res.points));
  for (const auto& f : res.fits)
    r.check(f.status == "ok" && f.rate > 0 && f.r2 > 0.9,
            f.quantity + " rate=" + num(f.rate) + " R2=" + num(f.r2));

  const auto d = config("selfavg_depolarizing", ErrorKind::depolarizing, {4, 6, 8}, {0.2, 0.5}, 300, Backend::density);
  const ResultTable dt = run_quenched_sweep(d);
  save(dt, d);
  for (double s : d.grid) {
    std::vector<double> scaled;
    for (int n : d.sizes) {
      const auto fs = fidelity_samples(dt, n, s);
      const double diff = std::abs(stats::mean(fs.fidelity) - stats::mean(fs.m2) / stats::mean(fs.p2));
      scaled.push_back(diff * std::exp2(n));
    }
    const double peak = *std::max_element(scaled.begin(), scaled.end());
    r.check(peak <= 2 * scaled.front(), "lambda=" + num(s, 2) + " |diff|*2^N = " + num(scaled[0], 3) + "," +
                                            num(scaled[1], 3) + "," + num(scaled[2], 3));
  }
  return r.outcome();
}

Outcome critical_exponents() {
  Report r;
  const double lc = theory::critical_lambda_value(0.5);
  const auto logistic = theory::ScalingFunction::logistic_nu1_for_rate(0.5);
  const auto erf = theory::ScalingFunction::erf_nu2(0.8864, 0.3272, 0.7332);
  auto curves = [](const theory::ScalingFunction& f, double lo, double hi) {
    std::vector<CurvePoint> pts;
    for (int n : {64, 128, 256})
      for (int i = 0; i <= 40; ++i) {
        const double s = lo + (hi - lo) * i / 40;
        pts.push_back({n, s, f(n, s), 0.0});
      }
    return pts;
  };
  CollapseOptions o1;
  o1.critical_lo = 0.2;
  o1.critical_hi = 0.5;
  const CollapseFit f1 = run_data_collapse(curves(logistic, lc - 0.06, lc + 0.06), o1);
  r.check(std::abs(f1.nu - 1) <= 0.1 && std::abs(f1.critical - lc) <= 0.005,
          "logistic nu=" + num(f1.nu) + " c=" + num(f1.critical, 5));
  CollapseOptions o2;
  o2.critical_lo = 0.5;
  o2.critical_hi = 0.95;
  const CollapseFit f2 = run_data_collapse(curves(erf, 0.45, 1.0), o2);
  r.check(std::abs(f2.nu - 2) <= 0.2 && std::abs(f2.critical - 0.7332) <= 0.003,
          "erf nu=" + num(f2.nu) + " c=" + num(f2.critical, 5));
  const double wl = theory::solve_disordered_critical(ErrorKind::depolarizing_disordered, 0.5).value;
  const double wa = theory::solve_disordered_critical(ErrorKind::coherent_disordered, 0.5).value;
  r.check(std::abs(wl - 0.7332) <= 5e-4, "W_lambda,c=" + num(wl, 6));
  r.check(std::abs(wa - 1.055) <= 5e-3, "W_alpha,c=" + num(wa, 6));
  return r.outcome();
}

Outcome disordered_monte_carlo() {
  auto c = config("disordered_depolarizing", ErrorKind::depolarizing_disordered, {8, 10, 12},
                  parse_grid("0.3:1:15"), 100, Backend::pauli_transfer);
  c.disorder_draws = 100;
  const ResultTable t = run_quenched_sweep(c);
  save(t, c);
  int failures = 0;
  const double z = worst_z(t, failures);
  Report r;
  r.check(failures == 0, std::to_string(failures) + "/45 points outside 3 SEM (worst " + num(z, 3) + " SEM)");
  const auto pts = fidelity_curves(t.aggregated);
  CollapseOptions o;
  o.critical_lo = 0.3;
  o.critical_hi = 1.0;
  o.fixed_nu = 2.0;
  o.bootstrap = 0;
  const CollapseFit fit = run_data_collapse(pts, o);
  const double res2 = collapse_residual(pts, fit.critical, 2.0), res1 = collapse_residual(pts, fit.critical, 1.0);
  r.check(res2 < res1, "W_c=" + num(fit.critical, 5) + " residual nu=2 " + num(res2, 3) + " < nu=1 " + num(res1, 3));
  return r.outcome();
}

Outcome noisy_device() {
  auto c = config("noisy_device", ErrorKind::device_noise, {6, 8, 10}, {0.6, 1.4}, 1000, Backend::trajectory);
  c.kind = ExperimentKind::noisy_device;
  c.epsilon = 0.001;
  c.trajectories = 10;
  const ResultTable t = run_noisy_device(c);
  save(t, c);
  Report r;
  const double a6 = find(t, 6, 0.6).mean, a8 = find(t, 8, 0.6).mean, a10 = find(t, 10, 0.6).mean;
  const double b6 = find(t, 6, 1.4).mean, b8 = find(t, 8, 1.4).mean, b10 = find(t, 10, 1.4).mean;
  r.check(a6 < a8 && a8 < a10, "F(0.6)=" + num(a6) + "," + num(a8) + "," + num(a10));
  r.check(b6 > b8 && b8 > b10, "F(1.4)=" + num(b6) + "," + num(b8) + "," + num(b10));

  // Paired trajectory-vs-density comparison on identical schedules.
  for (double alpha : c.grid) {
    std::vector<double> diff;
    for (std::size_t i = 0; i < 300; ++i) {
      const NoisySchedule s = realization_schedule(c, 6, i, alpha);
      RngStream init = make_stream(c.seed, i, StreamTag::initial_state, size_sub(6));
      const PureState logical = initial_logical_state(c.initial_state, 3, init);
      RngStream rng = make_stream(c.seed, i, StreamTag::trajectory, point_sub(6, 0, 1));
      diff.push_back(noisy_trajectory_estimate(s, logical, c.trajectories, rng).fidelity -
                     noisy_density_exact(s, logical).fidelity);
    }
    const auto ms = stats::mean_sem(diff);
    r.check(std::abs(ms.mean) <= 3 * ms.sem + 1e-12,
            "N=6 alpha=" + num(alpha, 2) + " traj-density " + num(ms.mean, 3) + " +- " + num(ms.sem, 3));
  }
  return r.outcome();
}

Outcome initial_state_invariance() {
  Report r;
  auto c = config("initial_state_zero", ErrorKind::coherent, {10}, {0.8, 1.2}, 1000, Backend::pure);
  const ResultTable zero = run_quenched_sweep(c);
  c.id = "initial_state_ghz";
  c.initial_state = InitialState::ghz;
  const ResultTable ghz = run_quenched_sweep(c);
  for (double a : c.grid) {
    const auto &z = find(zero, 10, a), &g = find(ghz, 10, a);
    const double comb = std::hypot(z.sem, g.sem);
    r.check(std::abs(z.mean - g.mean) <= 2 * comb, "alpha=" + num(a, 2) + " zero " + num(z.mean) + " ghz " +
                                                       num(g.mean) + " (" + num(std::abs(z.mean - g.mean) / comb, 3) +
                                                       " SEM)");
  }
  auto p = config("ghz_plateau", ErrorKind::coherent, {12}, {0.4}, 200, Backend::pure);
  p.initial_state = InitialState::ghz;
  p.entropies = {EntropyKind::participation_logical, EntropyKind::entanglement};
  const ResultTable pt = run_quenched_sweep(p);
  save(pt, p);
  const double sp = find(pt, 12, 0.4, "participation_logical", 2.0).mean;
  const double se = find(pt, 12, 0.4, "entanglement", 2.0).mean;
  r.check(std::abs(sp - 1) <= 0.1, "GHZ S2part=" + num(sp));
  r.check(std::abs(se - 1) <= 0.1, "GHZ S2ent=" + num(se));
  return r.outcome();
}

Outcome invariant_suite() {
  Report r;
  std::mt19937_64 rng(99);
  std::normal_distribution<double> g;
  auto random_state = [&](int n) {
    Vector v(static_cast<Eigen::Index>(dim_of(n)));
    for (auto& x : v) x = Complex(g(rng), g(rng));
    return PureState::from_amplitudes(n, v.normalized());
  };

  // Norm, trace and Hermiticity under circuits and channels.
  double norm_err = 0, trace_err = 0, herm_err = 0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const BrickwallCircuit circ = build_encoder(SystemLayout(8, 4), 16, seed);
    PureState psi = random_state(8);
    apply_circuit(psi, circ, Direction::forward);
    norm_err = std::max(norm_err, std::abs(psi.amplitudes.norm() - 1));
    const BrickwallCircuit small = build_encoder(SystemLayout(4, 2), 8, seed);
    MixedState rho = MixedState::from_pure(random_state(4));
    apply_circuit(rho, small, Direction::forward);
    apply_depolarizing_channel(rho, std::vector<double>{0.1, 0.5, 0.9, 1.0});
    apply_coherent_layer(rho, std::vector<double>{0.3, 0.2, 1.1, 0.0});
    trace_err = std::max(trace_err, std::abs(rho.matrix.trace() - Complex(1.0)));
    herm_err = std::max(herm_err, (rho.matrix - rho.matrix.adjoint()).cwiseAbs().maxCoeff());
  }
  r.check(norm_err < 1e-12 && trace_err < 1e-12 && herm_err < 1e-12,
          "norm " + num(norm_err, 2) + " trace " + num(trace_err, 2) + " herm " + num(herm_err, 2));

  // Kraus completeness.
  double kraus = 0;
  for (double s : {0.0, 0.3, 0.77, 1.0}) {
    kraus = std::max(kraus, kraus_set(ErrorModel::coherent(s), 3).completeness_defect());
    kraus = std::max(kraus, kraus_set(ErrorModel::depolarizing(s), 3).completeness_defect());
  }
  r.check(kraus < 1e-14, "Kraus defect " + num(kraus, 2));

  // Entropy monotonicity in q.
  bool monotone = true;
  for (int i = 0; i < 20; ++i) {
    const PureState s = random_state(6);
    double prev = std::numeric_limits<double>::infinity(), prev_p = prev;
    for (double q : {1.5, 2.0, 3.0, 5.0, std::numeric_limits<double>::infinity()}) {
      const double e = renyi_entropy(s, q, {0, 1, 2}), p = participation_entropy(s, q);
      monotone = monotone && e <= prev + 1e-12 && p <= prev_p + 1e-12;
      prev = e;
      prev_p = p;
    }
  }
  r.check(monotone, "entropies non-increasing in q");

  // Breakpoint continuity: each clamped slope reaches 1 at its breakpoint.
  double jump = 0;
  for (double q : {2.0, 3.0})
    for (double rate : {0.25, 0.5}) {
      const double h = 1e-7;
      const double be = theory::breakpoint_entanglement_logical(q, rate, rate / 2);
      jump = std::max(jump, std::abs(theory::slope_entanglement_logical(q, rate, rate / 2, be - h) - 1));
      const double bt = theory::breakpoint_thermo_logical(q, rate);
      jump = std::max(jump, std::abs(theory::slope_thermo_logical(q, rate, bt - h) - 1));
      const double bp = theory::breakpoint_participation_logical(q, rate);
      jump = std::max(jump, std::abs(theory::dimension_participation_logical(q, rate, bp - h) - 1));
      const auto cs = theory::codespace_slopes(q, rate, 0.5);
      jump = std::max(jump, std::abs(theory::codespace_slopes(q, rate, cs.participation_breakpoint - h).participation - 1));
      jump = std::max(jump, std::abs(theory::codespace_slopes(q, rate, cs.entanglement_breakpoint - h).entanglement - 1));
    }
  r.check(jump < 1e-5, "breakpoint jump " + num(jump, 2));

  // Determinism under parallelism and record invariants.
  auto c = config("determinism", ErrorKind::coherent_disordered, {6}, {0.4, 1.2}, 16, Backend::pure);
  c.entropies = {EntropyKind::entanglement, EntropyKind::thermodynamic, EntropyKind::participation_codespace};
  c.workers = 1;
  const ResultTable one = run_quenched_sweep(c);
  c.workers = 4;
  const ResultTable four = run_quenched_sweep(c);
  r.check(raw_csv(one.raw) == raw_csv(four.raw), "raw tables identical for 1 and 4 workers");
  bool records = true;
  for (const auto& row : one.raw) {
    if (row.value_kind == kFidelityKind)
      records = records && row.fidelity >= 0 && row.fidelity <= 1 + 1e-9 && row.p2 > 0 && row.m2 >= 0;
    else
      records = records && row.value >= -1e-9;
  }
  r.check(records, "0 <= F <= 1, p2 > 0, entropies >= 0");

  // Quenched/annealed split stays inside the empirical envelope.
  const auto e = config("quenched_annealed", ErrorKind::coherent, {6, 8, 10, 12}, {0.8, 1.2}, 2000, Backend::pure);
  const ResultTable et = run_quenched_sweep(e);
  save(et, e);
  for (int n : e.sizes)
    for (double s : e.grid) {
      const auto& a = find(et, n, s, kFidelityKind, kMissing);
      const double gap = std::abs(a.mean - a.annealed_ratio), bound = 5e-2 * std::exp(-n / 4.0);
      r.check(gap < bound, "split N=" + std::to_string(n) + " a=" + num(s, 2) + " " + num(gap, 3) + "/" + num(bound, 3));
    }
  return r.outcome();
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"exact-oracle", exact_oracle},
      {"coherent-transition", coherent_transition},
      {"depolarizing-transition", depolarizing_transition},
      {"entanglement-window", entanglement_window},
      {"participation-window", participation_window},
      {"self-averaging", self_averaging},
      {"critical-exponents", critical_exponents},
      {"disordered-monte-carlo", disordered_monte_carlo},
      {"noisy-device", noisy_device},
      {"initial-state-invariance", initial_state_invariance},
      {"invariant-suite", invariant_suite},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s %s (%.1fs): %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), secs, o.detail.c_str());
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
