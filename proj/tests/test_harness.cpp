#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numbers>
#include <random>

#include "encdec/harness/io.hpp"
#include "encdec/harness/noisy_device.hpp"
#include "encdec/harness/pipeline.hpp"
#include "encdec/harness/selfavg.hpp"
#include "encdec/harness/theory_export.hpp"
#include "encdec/stats.hpp"

using namespace encdec;
using namespace encdec::harness;

namespace {

ExperimentConfig sweep(ErrorKind model, std::vector<int> sizes, std::vector<double> grid, std::size_t realizations,
                       Backend backend) {
  ExperimentConfig c;
  c.id = "t";
  c.model = model;
  c.sizes = std::move(sizes);
  c.grid = std::move(grid);
  c.realizations = realizations;
  c.backend = backend;
  c.workers = 1;
  return c;
}

const AggregateRow& aggregate(const ResultTable& t, int n, double s, const std::string& kind = kFidelityKind,
                              double q = kMissing) {
  for (const auto& a : t.aggregated)
    if (a.n == n && a.strength == s && a.kind == kind && (std::isnan(q) || a.q == q)) return a;
  throw std::runtime_error("aggregate not found");
}

std::vector<double> raw_values(const ResultTable& t, int n, double s, const std::string& kind) {
  std::vector<double> out;
  for (const auto& r : t.raw)
    if (r.n == n && r.strength == s && r.value_kind == kind) out.push_back(r.value);
  return out;
}

}  // namespace

TEST(QuenchedSweep, ZeroAngleIsExactInversion) {
  auto c = sweep(ErrorKind::coherent, {6}, {0.0}, 12, Backend::pure);
  c.entropies = {EntropyKind::entanglement, EntropyKind::thermodynamic, EntropyKind::participation_logical};
  c.q_list = {2.0, 3.0};
  const ResultTable t = run_quenched_sweep(c);
  for (double f : raw_values(t, 6, 0.0, kFidelityKind)) EXPECT_NEAR(f, 1.0, 1e-9);
  for (const char* kind : {"entanglement", "thermodynamic", "participation_logical"})
    for (double v : raw_values(t, 6, 0.0, kind)) EXPECT_NEAR(v, 0.0, 1e-8);
  const auto& a = aggregate(t, 6, 0.0);
  EXPECT_NEAR(a.mean, 1.0, 1e-9);
  EXPECT_NEAR(a.sem, 0.0, 1e-9);
  EXPECT_EQ(a.n_real, 12u);
}

TEST(QuenchedSweep, CoherentDecodedStateStaysPure) {
  auto c = sweep(ErrorKind::coherent, {6}, {0.8, 1.4}, 10, Backend::pure);
  c.entropies = {EntropyKind::thermodynamic};
  const ResultTable t = run_quenched_sweep(c);
  for (double s : c.grid)
    for (double v : raw_values(t, 6, s, "thermodynamic")) EXPECT_NEAR(v, 0.0, 1e-8);
}

TEST(QuenchedSweep, FullDepolarizationGivesMaximallyMixedLogical) {
  auto c = sweep(ErrorKind::depolarizing, {8}, {1.0}, 10, Backend::density);
  c.entropies = {EntropyKind::thermodynamic};
  const ResultTable t = run_quenched_sweep(c);
  EXPECT_NEAR(aggregate(t, 8, 1.0).mean, 1.0 / 16, 1e-9);
  EXPECT_NEAR(aggregate(t, 8, 1.0, "thermodynamic").mean, 4.0, 0.05);
}

TEST(QuenchedSweep, FullDepolarizationTrajectoryMean) {
  auto c = sweep(ErrorKind::depolarizing, {6}, {1.0}, 200, Backend::trajectory);
  c.trajectories = 40;
  const auto& a = aggregate(run_quenched_sweep(c), 6, 1.0);
  EXPECT_NEAR(a.mean, 0.125, 3 * a.sem);
}

TEST(QuenchedSweep, TwoQubitCodeMatchesAnnealedValue) {
  auto c = sweep(ErrorKind::coherent, {2}, {std::numbers::pi / 2}, 10000, Backend::pure);
  const auto& a = aggregate(run_quenched_sweep(c), 2, std::numbers::pi / 2);
  EXPECT_NEAR(a.theory_value, 2.0 / 3, 1e-12);
  EXPECT_NEAR(a.mean, 2.0 / 3, 3 * a.sem);
}

TEST(QuenchedSweep, DeterministicAcrossWorkerCounts) {
  auto c = sweep(ErrorKind::coherent_disordered, {6}, {0.5, 1.0}, 9, Backend::pure);
  c.disorder_draws = 2;
  c.entropies = {EntropyKind::participation_codespace};
  const ResultTable one = run_quenched_sweep(c);
  c.workers = 3;
  const ResultTable three = run_quenched_sweep(c);
  EXPECT_EQ(raw_csv(one.raw), raw_csv(three.raw));
  EXPECT_EQ(aggregated_csv(one.aggregated), aggregated_csv(three.aggregated));
}

TEST(QuenchedSweep, PauliTransferMatchesDensity) {
  for (ErrorKind model : {ErrorKind::depolarizing, ErrorKind::depolarizing_disordered}) {
    auto c = sweep(model, {6}, {0.1, 0.4, 0.9}, 4, Backend::density);
    c.disorder_draws = 2;
    const ResultTable dens = run_quenched_sweep(c);
    c.backend = Backend::pauli_transfer;
    const ResultTable pt = run_quenched_sweep(c);
    ASSERT_EQ(dens.raw.size(), pt.raw.size());
    for (std::size_t i = 0; i < dens.raw.size(); ++i) {
      EXPECT_NEAR(dens.raw[i].m2, pt.raw[i].m2, 1e-10);
      EXPECT_NEAR(dens.raw[i].p2, pt.raw[i].p2, 1e-10);
    }
  }
}

TEST(QuenchedSweep, TrajectoryErrorShrinksAsInverseRoot) {
  // Identical grid values use independent trajectory streams on one circuit.
  auto c = sweep(ErrorKind::depolarizing, {6}, std::vector<double>(40, 0.3), 1, Backend::density);
  const double exact = run_quenched_sweep(c).raw.front().m2;
  c.backend = Backend::trajectory;
  auto spread = [&](std::size_t m) {
    c.trajectories = m;
    std::vector<double> v;
    for (const auto& r : run_quenched_sweep(c).raw) v.push_back(r.m2);
    const auto ms = stats::mean_sem(v);
    EXPECT_NEAR(ms.mean, exact, 4 * ms.sem);
    return std::sqrt(stats::variance(v));
  };
  const double ratio = spread(16) / spread(256);
  EXPECT_GT(ratio, 2.5);
  EXPECT_LT(ratio, 6.4);
}

TEST(QuenchedSweep, QuenchedAnnealedEnvelope) {
  auto c = sweep(ErrorKind::coherent, {6, 8}, {0.8, 1.2}, 300, Backend::pure);
  const ResultTable t = run_quenched_sweep(c);
  for (int n : c.sizes)
    for (double s : c.grid) {
      const auto& a = aggregate(t, n, s);
      EXPECT_LT(std::abs(a.mean - a.annealed_ratio), 5e-2 * std::exp(-n / 4.0)) << "N=" << n << " s=" << s;
    }
}

TEST(QuenchedSweep, InitialStateInvariance) {
  auto c = sweep(ErrorKind::coherent, {6}, {1.0}, 400, Backend::pure);
  const auto zero = aggregate(run_quenched_sweep(c), 6, 1.0);
  c.initial_state = InitialState::ghz;
  const auto ghz = aggregate(run_quenched_sweep(c), 6, 1.0);
  EXPECT_LT(std::abs(zero.mean - ghz.mean), 2 * std::hypot(zero.sem, ghz.sem));
}

TEST(QuenchedSweep, AggregationIsOrderInvariant) {
  const auto c = sweep(ErrorKind::coherent, {6}, {0.7, 1.3}, 20, Backend::pure);
  std::vector<std::vector<PointResult>> results(c.realizations);
  for (std::size_t i = 0; i < c.realizations; ++i) results[i] = run_realization(c, 6, i);
  ResultTable forward, shuffled;
  append_size(c, 6, results, forward);
  std::shuffle(results.begin(), results.end(), std::mt19937_64(3));
  append_size(c, 6, results, shuffled);
  ASSERT_EQ(forward.aggregated.size(), shuffled.aggregated.size());
  for (std::size_t i = 0; i < forward.aggregated.size(); ++i) {
    EXPECT_NEAR(forward.aggregated[i].mean, shuffled.aggregated[i].mean, 1e-13);
    EXPECT_NEAR(forward.aggregated[i].sem, shuffled.aggregated[i].sem, 1e-13);
    EXPECT_NEAR(forward.aggregated[i].annealed_ratio, shuffled.aggregated[i].annealed_ratio, 1e-13);
  }
}

TEST(QuenchedSweep, DisorderedTheoryUsesRealizedStrengths) {
  auto c = sweep(ErrorKind::coherent_disordered, {4}, {0.6}, 3, Backend::pure);
  c.disorder_draws = 4;
  const auto res = run_realization(c, 4, 1);
  double expect = 0;
  for (std::size_t d = 0; d < 4; ++d)
    expect += theory::annealed_fidelity_coherent(4, 2, realized_strengths(c, 4, 1, d, 0.6)) / 4;
  EXPECT_NEAR(res[0].theory, expect, 1e-14);
}

TEST(QuenchedSweep, DegenerateThreshold) {
  EXPECT_NO_THROW(check_degenerate(1, 100));
  EXPECT_THROW(check_degenerate(2, 100), DegenerateAbort);
  try {
    check_degenerate(5, 10);
  } catch (const DegenerateAbort& e) {
    EXPECT_EQ(e.degenerate_count, 5u);
    EXPECT_EQ(e.evaluations, 10u);
  }
}

TEST(NoisyDevice, ZeroNoiseReproducesCleanSweep) {
  ExperimentConfig noisy = sweep(ErrorKind::device_noise, {6}, {0.4, 1.1}, 8, Backend::trajectory);
  noisy.kind = ExperimentKind::noisy_device;
  noisy.epsilon = 0.0;
  noisy.trajectories = 3;
  ExperimentConfig clean = sweep(ErrorKind::coherent, {6}, {0.4, 1.1}, 8, Backend::pure);
  clean.depth_factor = 1.0;
  const ResultTable a = run_noisy_device(noisy), b = run_quenched_sweep(clean);
  ASSERT_EQ(a.raw.size(), b.raw.size());
  for (std::size_t i = 0; i < a.raw.size(); ++i) {
    EXPECT_NEAR(a.raw[i].fidelity, b.raw[i].fidelity, 1e-12);
    EXPECT_EQ(a.raw[i].seed, b.raw[i].seed);
  }
}

TEST(NoisyDevice, TrajectoryEstimateMatchesDensityEvolution) {
  ExperimentConfig c = sweep(ErrorKind::device_noise, {4}, {0.9}, 1, Backend::trajectory);
  c.kind = ExperimentKind::noisy_device;
  c.epsilon = 0.3;
  const NoisySchedule s = realization_schedule(c, 4, 0, 0.9);
  ASSERT_FALSE(harness::detail::active_sites(s).empty());
  const PureState logical = PureState::zero(2);
  const NoisyEstimate exact = noisy_density_exact(s, logical);
  std::vector<double> m2, p2;
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    RngStream rng(seed);
    const NoisyEstimate e = noisy_trajectory_estimate(s, logical, 50, rng);
    m2.push_back(e.m2);
    p2.push_back(e.p2);
  }
  const auto am = stats::mean_sem(m2), ap = stats::mean_sem(p2);
  EXPECT_NEAR(am.mean, exact.m2, 4 * am.sem + 1e-12);
  EXPECT_NEAR(ap.mean, exact.p2, 4 * ap.sem + 1e-12);
}

TEST(NoisyDevice, ZeroNoiseDensityMatchesPureEvolution) {
  ExperimentConfig c = sweep(ErrorKind::device_noise, {4}, {0.7}, 1, Backend::trajectory);
  c.kind = ExperimentKind::noisy_device;
  const NoisySchedule s = realization_schedule(c, 4, 2, 0.7);
  const PureState logical = PureState::zero(2);
  RngStream rng(1);
  const NoisyEstimate a = noisy_trajectory_estimate(s, logical, 10, rng);
  const NoisyEstimate b = noisy_density_exact(s, logical);
  EXPECT_NEAR(a.m2, b.m2, 1e-12);
  EXPECT_NEAR(a.p2, b.p2, 1e-12);
}

TEST(SelfAveraging, ZeroAngleIsDegenerate) {
  auto c = sweep(ErrorKind::coherent, {2, 4, 6, 8}, {0.0}, 30, Backend::pure);
  c.kind = ExperimentKind::selfavg;
  const auto res = run_selfaveraging_study(c);
  ASSERT_EQ(res.points.size(), 4u);
  for (const auto& p : res.points) EXPECT_NEAR(p.difference, 0.0, 1e-12);
  for (const auto& f : res.fits) EXPECT_EQ(f.status, "degenerate");
}

TEST(SelfAveraging, NeedsFourSizes) {
  auto c = sweep(ErrorKind::coherent, {4, 6, 8}, {0.5}, 30, Backend::pure);
  c.kind = ExperimentKind::selfavg;
  EXPECT_THROW(run_selfaveraging_study(c), ConfigError);
}

TEST(SelfAveraging, DecayFitRecoversRate) {
  const std::vector<int> sizes = {4, 6, 8, 10};
  std::vector<double> v;
  for (int n : sizes) v.push_back(0.3 * std::exp(-0.4 * n));
  const DecayFit f = fit_decay("difference", 1.0, sizes, v);
  EXPECT_EQ(f.status, "ok");
  EXPECT_NEAR(f.rate, 0.4, 1e-12);
  EXPECT_NEAR(f.r2, 1.0, 1e-12);
}

TEST(Config, ValidationRejectsInvalidCombinations) {
  auto ok = sweep(ErrorKind::coherent, {6}, {0.5}, 10, Backend::pure);
  EXPECT_NO_THROW(validate(ok));
  auto bad = ok;
  bad.model = ErrorKind::depolarizing;
  EXPECT_THROW(validate(bad), ConfigError);  // pure backend needs a coherent model
  bad = ok;
  bad.backend = Backend::density;
  bad.sizes = {12};
  EXPECT_THROW(validate(bad), ConfigError);
  bad = ok;
  bad.sizes = {5};
  EXPECT_THROW(validate(bad), ConfigError);
  bad = ok;
  bad.grid = {2.0};
  EXPECT_THROW(validate(bad), ConfigError);
  bad = ok;
  bad.q_list = {1.0};
  EXPECT_THROW(validate(bad), ConfigError);
  bad = sweep(ErrorKind::depolarizing, {6}, {0.5}, 10, Backend::trajectory);
  bad.entropies = {EntropyKind::thermodynamic};
  EXPECT_THROW(validate(bad), ConfigError);
  bad = sweep(ErrorKind::depolarizing, {6}, {1.5}, 10, Backend::density);
  EXPECT_THROW(validate(bad), ConfigError);
  bad = sweep(ErrorKind::device_noise, {6}, {0.5}, 10, Backend::trajectory);
  EXPECT_THROW(validate(bad), ConfigError);  // device noise only via noisy_device
  bad.kind = ExperimentKind::noisy_device;
  EXPECT_NO_THROW(validate(bad));
  bad.epsilon = 1.5;
  EXPECT_THROW(validate(bad), ConfigError);
}

TEST(Config, JsonAndTomlAgree) {
  const Json j = Json::parse(R"({"id": "demo", "experiment": "sweep", "model": "coherent", "sizes": [6, 8],
    "rate": 0.5, "grid": "0:1.5:4", "q": [2, "inf"], "realizations": 20, "seed": 7, "backend": "pure"})");
  const ExperimentConfig a = config_from_json(j);
  const ExperimentConfig b = config_from_json(toml_to_json(R"(
id = "demo"
experiment = "sweep"
model = "coherent"
sizes = [6, 8]
rate = 0.5
grid = "0:1.5:4"
q = [2, "inf"]
realizations = 20
seed = 7
backend = "pure"
)"));
  EXPECT_EQ(config_to_json(a).dump(), config_to_json(b).dump());
  EXPECT_EQ(a.grid.size(), 4u);
  EXPECT_DOUBLE_EQ(a.grid.back(), 1.5);
  EXPECT_TRUE(std::isinf(a.q_list[1]));
  EXPECT_EQ(config_to_json(config_from_json(config_to_json(a))).dump(), config_to_json(a).dump());
}

TEST(Config, ShippedConfigsValidate) {
  std::size_t seen = 0;
  for (const auto& e : std::filesystem::directory_iterator(ENCDEC_CONFIG_DIR)) {
    EXPECT_NO_THROW(load_config(e.path())) << e.path();
    ++seen;
  }
  EXPECT_GE(seen, 7u);
}

TEST(Config, UnknownFieldRejected) {
  EXPECT_THROW(config_from_json(Json::parse(R"({"sizes": [6], "bogus": 1})")), ConfigError);
  EXPECT_THROW(toml_to_json("sizes = [6"), ConfigError);
  EXPECT_THROW(parse_grid("0:1"), ConfigError);
}

TEST(Config, DepthRule) {
  ExperimentConfig c;
  EXPECT_EQ(c.depth(8), 16);
  c.model = ErrorKind::device_noise;
  EXPECT_EQ(c.depth(8), 8);
  c.depth_factor = 3.0;
  EXPECT_EQ(c.depth(8), 24);
}

TEST(TheoryExport, CoherentRowsMatchTheoryModule) {
  auto c = sweep(ErrorKind::coherent, {8}, {0.5, 1.0}, 1, Backend::pure);
  c.kind = ExperimentKind::theory_export;
  const auto rows = theory_rows(c);
  bool saw_critical = false, saw_fidelity = false;
  for (const auto& r : rows) {
    if (r.kind == "critical_alpha") {
      saw_critical = true;
      EXPECT_NEAR(r.value, 2 * std::acos(std::exp2(-0.25)), 1e-14);
    }
    if (r.kind == "fidelity_annealed" && r.strength == 1.0) {
      saw_fidelity = true;
      EXPECT_DOUBLE_EQ(r.value, theory::annealed_fidelity_coherent(8, 4, 1.0));
    }
  }
  EXPECT_TRUE(saw_critical);
  EXPECT_TRUE(saw_fidelity);
}

TEST(TheoryExport, DisorderedCriticalWidth) {
  auto c = sweep(ErrorKind::depolarizing_disordered, {8}, {0.7}, 1, Backend::density);
  c.kind = ExperimentKind::theory_export;
  bool found = false;
  for (const auto& r : theory_rows(c)) {
    if (r.kind != "critical_width_depolarizing") continue;
    found = true;
    EXPECT_NEAR(r.value, 0.7332, 5e-4);
  }
  EXPECT_TRUE(found);
}
