// encdec: command-line driver for sweeps, self-averaging studies, data collapse,
// noisy-device runs and closed-form exports.

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "encdec/encdec.hpp"

namespace fs = std::filesystem;
using namespace encdec;
using namespace encdec::harness;

namespace {

enum Exit { kOk = 0, kFailure = 1, kConfig = 2, kDegenerate = 3, kIo = 4 };

struct Overrides {
  std::string config;
  std::vector<int> sizes;
  std::optional<double> rate;
  std::optional<int> n_logical;
  std::string grid;
  std::string model;
  std::optional<double> epsilon;
  std::vector<double> q;
  std::vector<std::string> entropies;
  std::optional<std::size_t> realizations;
  std::optional<std::size_t> disorder_draws;
  std::optional<std::size_t> trajectories;
  std::optional<std::uint64_t> seed;
  std::string backend;
  std::string initial_state;
  std::optional<std::size_t> workers;
  std::string out;
  std::string format;
  std::string id;
  std::string input;
  std::optional<double> fixed_nu;
  std::optional<std::size_t> bootstrap;
};

void add_shared(CLI::App* app, Overrides& o) {
  app->add_option("--config", o.config, "TOML or JSON experiment config");
  app->add_option("--n", o.sizes, "system sizes, comma separated")->delimiter(',');
  app->add_option("--rate", o.rate, "code rate k/N");
  app->add_option("--k", o.n_logical, "explicit logical qubit count");
  app->add_option("--grid", o.grid, "strength grid lo:hi:steps or comma list");
  app->add_option("--model", o.model, "coherent|coherent_disordered|depolarizing|depolarizing_disordered|device_noise");
  app->add_option("--epsilon", o.epsilon, "device noise strength");
  app->add_option("--q", o.q, "renyi indices, comma separated")->delimiter(',');
  app->add_option("--entropies", o.entropies, "entropy kinds, comma separated")->delimiter(',');
  app->add_option("--realizations", o.realizations, "circuit realizations per point");
  app->add_option("--disorder-draws", o.disorder_draws, "noise draws per circuit realization");
  app->add_option("--trajectories", o.trajectories, "trajectories per realization");
  app->add_option("--seed", o.seed, "master seed");
  app->add_option("--backend", o.backend, "pure|density|trajectory|pauli_transfer");
  app->add_option("--initial-state", o.initial_state, "all_zero|ghz|product_random");
  app->add_option("--workers", o.workers, "worker threads (0: all cores)");
  app->add_option("--out", o.out, "output directory");
  app->add_option("--format", o.format, "csv|json");
  app->add_option("--id", o.id, "experiment id");
}

std::vector<double> grid_from_flag(const std::string& text) {
  if (text.find(':') != std::string::npos) return parse_grid(text);
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto end = std::min(text.find(',', start), text.size());
    try {
      out.push_back(std::stod(text.substr(start, end - start)));
    } catch (const std::logic_error&) {
      throw ConfigError("malformed grid '" + text + "'");
    }
    start = end + 1;
  }
  return out;
}

ExperimentConfig build_config(const Overrides& o, ExperimentKind kind) {
  ExperimentConfig c = o.config.empty() ? ExperimentConfig{} : read_config(o.config);
  c.kind = kind;
  if (!o.id.empty()) c.id = o.id;
  if (!o.sizes.empty()) c.sizes = o.sizes;
  if (o.rate) {
    c.rate = o.rate;
    c.n_logical.reset();
  }
  if (o.n_logical) c.n_logical = o.n_logical;
  if (!o.grid.empty()) c.grid = grid_from_flag(o.grid);
  if (!o.model.empty()) c.model = parse_error_kind(o.model);
  if (o.epsilon) c.epsilon = *o.epsilon;
  if (!o.q.empty()) c.q_list = o.q;
  if (!o.entropies.empty()) {
    c.entropies.clear();
    for (const auto& e : o.entropies) c.entropies.push_back(parse_entropy_kind(e));
  }
  if (o.realizations) c.realizations = *o.realizations;
  if (o.disorder_draws) c.disorder_draws = *o.disorder_draws;
  if (o.trajectories) c.trajectories = *o.trajectories;
  if (o.seed) c.seed = *o.seed;
  if (!o.backend.empty()) c.backend = parse_backend(o.backend);
  if (!o.initial_state.empty()) c.initial_state = parse_initial_state(o.initial_state);
  if (o.workers) c.workers = *o.workers;
  if (!o.out.empty()) c.out = o.out;
  if (!o.format.empty()) c.format = parse_output_format(o.format);
  if (!o.input.empty()) c.collapse_input = o.input;
  if (o.fixed_nu) c.fixed_nu = o.fixed_nu;
  if (o.bootstrap) c.bootstrap = *o.bootstrap;
  if (kind == ExperimentKind::noisy_device && o.model.empty() && o.config.empty()) {
    c.model = ErrorKind::device_noise;
    if (o.backend.empty()) c.backend = Backend::trajectory;
  }
  validate(c);
  return c;
}

fs::path out_dir(const ExperimentConfig& c) { return c.out.empty() ? fs::path("out") / c.id : fs::path(c.out); }

class Timer {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

void write_manifest(const fs::path& dir, const ExperimentConfig& c, const RunInfo& info,
                    const std::vector<std::string>& files, std::size_t evaluations = 0, std::size_t degenerate = 0) {
  harness::detail::write_text(dir / "manifest.json", manifest(c, info, files, evaluations, degenerate).dump(2) + "\n");
}

void report(const fs::path& dir, const std::vector<std::string>& files) {
  for (const auto& f : files) std::cout << (dir / f).string() << "\n";
}

int cmd_theory(const ExperimentConfig& c) {
  Timer t;
  const auto rows = theory_rows(c);
  const fs::path dir = out_dir(c);
  std::vector<std::string> files;
  if (c.format == OutputFormat::csv) {
    harness::detail::write_text(dir / "theory.csv", theory_csv(rows));
    files = {"theory.csv"};
  } else {
    harness::detail::write_text(dir / "theory.json", theory_json(rows));
    files = {"theory.json"};
  }
  files.push_back("manifest.json");
  write_manifest(dir, c, {t.seconds(), 1}, files);
  report(dir, files);
  return kOk;
}

int cmd_sweep(const ExperimentConfig& c) {
  Timer t;
  const ResultTable table = c.kind == ExperimentKind::noisy_device ? run_noisy_device(c) : run_quenched_sweep(c);
  const fs::path dir = out_dir(c);
  report(dir, emit_results(table, dir, c.format, c, {t.seconds(), resolve_workers(c.workers)}));
  return kOk;
}

int cmd_selfavg(const ExperimentConfig& c) {
  Timer t;
  const SelfAveragingResult res = run_selfaveraging_study(c);
  const fs::path dir = out_dir(c);
  auto files = emit_results(res.table, dir, c.format, c, {t.seconds(), resolve_workers(c.workers)});
  files.pop_back();
  harness::detail::write_text(dir / "selfavg_points.csv", selfavg_points_csv(res.points));
  harness::detail::write_text(dir / "selfavg_fits.csv", selfavg_fits_csv(res.fits));
  files.insert(files.end(), {"selfavg_points.csv", "selfavg_fits.csv", "manifest.json"});
  write_manifest(dir, c, {t.seconds(), resolve_workers(c.workers)}, files, res.table.evaluations,
                 res.table.degenerate);
  report(dir, files);
  return kOk;
}

int cmd_collapse(const ExperimentConfig& c) {
  Timer t;
  const auto points = fidelity_curves(load_aggregated(c.collapse_input));
  CollapseOptions opt;
  opt.nu_lo = c.nu_lo;
  opt.nu_hi = c.nu_hi;
  opt.fixed_nu = c.fixed_nu;
  opt.bootstrap = c.bootstrap;
  opt.seed = c.seed;
  if (c.critical_lo) {
    opt.critical_lo = *c.critical_lo;
    opt.critical_hi = *c.critical_hi;
  } else if (!points.empty()) {
    const auto [lo, hi] = std::minmax_element(points.begin(), points.end(),
                                              [](const auto& a, const auto& b) { return a.strength < b.strength; });
    opt.critical_lo = lo->strength;
    opt.critical_hi = hi->strength;
  }
  const CollapseFit fit = run_data_collapse(points, opt);
  const fs::path dir = out_dir(c);
  harness::detail::write_text(dir / "collapse.csv", collapse_csv(fit));
  harness::detail::write_text(dir / "collapse.json", collapse_to_json(fit).dump(2) + "\n");
  const std::vector<std::string> files = {"collapse.csv", "collapse.json", "manifest.json"};
  write_manifest(dir, c, {t.seconds(), 1}, files);
  report(dir, files);
  std::cout << "critical=" << fit.critical << " nu=" << fit.nu << " residual=" << fit.residual << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Encoding-decoding random circuits: simulation and closed-form theory"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  Overrides o;
  auto* theory = app.add_subcommand("theory", "export closed-form curves");
  auto* run = app.add_subcommand("run", "quenched Monte Carlo sweep");
  auto* selfavg = app.add_subcommand("selfavg", "self-averaging study over sizes");
  auto* collapse = app.add_subcommand("collapse", "finite-size data collapse of fidelity curves");
  auto* noisy = app.add_subcommand("noisy", "noisy encoder/decoder sweep");
  for (auto* s : {theory, run, selfavg, collapse, noisy}) add_shared(s, o);
  collapse->add_option("--input", o.input, "aggregated CSV, results JSON or run directory");
  collapse->add_option("--fixed-nu", o.fixed_nu, "hold nu fixed and fit the critical point only");
  collapse->add_option("--bootstrap", o.bootstrap, "bootstrap resamples");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfig;
  }

  try {
    if (theory->parsed()) return cmd_theory(build_config(o, ExperimentKind::theory_export));
    if (run->parsed()) return cmd_sweep(build_config(o, ExperimentKind::sweep));
    if (selfavg->parsed()) return cmd_selfavg(build_config(o, ExperimentKind::selfavg));
    if (noisy->parsed()) return cmd_sweep(build_config(o, ExperimentKind::noisy_device));
    if (collapse->parsed()) return cmd_collapse(build_config(o, ExperimentKind::collapse));
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const InvalidArgument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const DegenerateAbort& e) {
    std::cerr << "aborted: " << e.what() << "\n";
    return kDegenerate;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kFailure;
}
