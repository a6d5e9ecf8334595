#pragma once

#include <array>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "encdec/harness/collapse.hpp"
#include "encdec/harness/config.hpp"
#include "encdec/harness/results.hpp"
#include "encdec/harness/selfavg.hpp"
#include "encdec/harness/theory_export.hpp"

namespace encdec::harness {

inline constexpr const char* kVersion = "0.1.0";

inline const std::vector<std::string>& raw_columns() {
  static const std::vector<std::string> cols = {"experiment_id", "kind", "backend", "N", "k", "r", "model",
                                                "strength", "disorder_w", "epsilon", "q", "subsystem", "realization",
                                                "seed", "m2", "p2", "fidelity", "value_kind", "value", "post_prob"};
  return cols;
}

inline const std::vector<std::string>& aggregated_columns() {
  static const std::vector<std::string> cols = {"experiment_id", "kind", "N", "k", "r", "model", "strength", "q",
                                                "subsystem", "mean", "sem", "n_real", "annealed_ratio", "theory_value"};
  return cols;
}

inline const std::vector<std::string>& theory_columns() {
  static const std::vector<std::string> cols = {"kind", "N", "k", "r", "q", "strength", "value"};
  return cols;
}

//------------------------------------------------------------------------------
// Field formatting: doubles as %.17g (round-trip exact), NaN as an empty field.
//------------------------------------------------------------------------------

namespace detail {

inline std::string fmt(double v) {
  if (std::isnan(v)) return "";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::array<char, 32> buf{};
  std::snprintf(buf.data(), buf.size(), "%.17g", v);
  return buf.data();
}

inline std::string fmt(int v) { return std::to_string(v); }
inline std::string fmt(std::uint64_t v) { return std::to_string(v); }
inline std::string fmt(const std::string& v) { return v; }

inline double parse_double(const std::string& s) {
  if (s.empty()) return kMissing;
  if (s == "inf") return kInfinity;
  if (s == "-inf") return -kInfinity;
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::logic_error&) {
    throw IoError("malformed number '" + s + "'");
  }
  if (used != s.size()) throw IoError("malformed number '" + s + "'");
  return v;
}

inline int parse_int(const std::string& s) {
  if (s.empty()) return 0;
  try {
    std::size_t used = 0;
    const int v = std::stoi(s, &used);
    if (used == s.size()) return v;
  } catch (const std::logic_error&) {
  }
  throw IoError("malformed integer '" + s + "'");
}

inline std::uint64_t parse_u64(const std::string& s) {
  if (s.empty()) return 0;
  try {
    std::size_t used = 0;
    const auto v = std::stoull(s, &used);
    if (used == s.size()) return v;
  } catch (const std::logic_error&) {
  }
  throw IoError("malformed integer '" + s + "'");
}

inline std::string join(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    out += fields[i];
  }
  return out;
}

inline std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << text;
  out.flush();
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

inline std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Lines of a CSV file after checking its header.
inline std::vector<std::vector<std::string>> read_csv(const std::string& text, const std::vector<std::string>& header) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw IoError("empty CSV");
  if (split(line) != header) throw IoError("unexpected CSV header: " + line);
  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    auto f = split(line);
    if (f.size() != header.size()) throw IoError("CSV row has " + std::to_string(f.size()) + " fields, expected " +
                                                 std::to_string(header.size()));
    rows.push_back(std::move(f));
  }
  return rows;
}

inline Json num(double v) {
  if (std::isnan(v)) return nullptr;
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

inline double from_num(const Json& j) {
  if (j.is_null()) return kMissing;
  if (j.is_string()) return parse_double(j.get<std::string>());
  return j.get<double>();
}

}  // namespace detail

//------------------------------------------------------------------------------
// Raw and aggregated tables
//------------------------------------------------------------------------------

inline std::vector<std::string> raw_fields(const RawRow& r) {
  using detail::fmt;
  return {fmt(r.experiment_id), fmt(r.kind), fmt(r.backend), fmt(r.n), fmt(r.k), fmt(r.r), fmt(r.model),
          fmt(r.strength), fmt(r.disorder_w), fmt(r.epsilon), fmt(r.q), fmt(r.subsystem), fmt(r.realization),
          fmt(r.seed), fmt(r.m2), fmt(r.p2), fmt(r.fidelity), fmt(r.value_kind), fmt(r.value), fmt(r.post_prob)};
}

inline RawRow raw_from_fields(const std::vector<std::string>& f) {
  using namespace detail;
  return {f[0], f[1], f[2], parse_int(f[3]), parse_int(f[4]), parse_double(f[5]), f[6], parse_double(f[7]),
          parse_double(f[8]), parse_double(f[9]), parse_double(f[10]), parse_int(f[11]), parse_u64(f[12]),
          parse_u64(f[13]), parse_double(f[14]), parse_double(f[15]), parse_double(f[16]), f[17],
          parse_double(f[18]), parse_double(f[19])};
}

inline std::vector<std::string> aggregated_fields(const AggregateRow& a) {
  using detail::fmt;
  return {fmt(a.experiment_id), fmt(a.kind), fmt(a.n), fmt(a.k), fmt(a.r), fmt(a.model), fmt(a.strength), fmt(a.q),
          fmt(a.subsystem), fmt(a.mean), fmt(a.sem), fmt(a.n_real), fmt(a.annealed_ratio), fmt(a.theory_value)};
}

inline AggregateRow aggregated_from_fields(const std::vector<std::string>& f) {
  using namespace detail;
  return {f[0], f[1], parse_int(f[2]), parse_int(f[3]), parse_double(f[4]), f[5], parse_double(f[6]),
          parse_double(f[7]), parse_int(f[8]), parse_double(f[9]), parse_double(f[10]), parse_u64(f[11]),
          parse_double(f[12]), parse_double(f[13])};
}

template <class Row, class Fields>
std::string to_csv(const std::vector<std::string>& header, const std::vector<Row>& rows, Fields fields) {
  std::string out = detail::join(header) + "\n";
  for (const auto& r : rows) out += detail::join(fields(r)) + "\n";
  return out;
}

inline std::string raw_csv(const std::vector<RawRow>& rows) { return to_csv(raw_columns(), rows, raw_fields); }
inline std::string aggregated_csv(const std::vector<AggregateRow>& rows) {
  return to_csv(aggregated_columns(), rows, aggregated_fields);
}

inline std::vector<RawRow> parse_raw_csv(const std::string& text) {
  std::vector<RawRow> out;
  for (const auto& f : detail::read_csv(text, raw_columns())) out.push_back(raw_from_fields(f));
  return out;
}

inline std::vector<AggregateRow> parse_aggregated_csv(const std::string& text) {
  std::vector<AggregateRow> out;
  for (const auto& f : detail::read_csv(text, aggregated_columns())) out.push_back(aggregated_from_fields(f));
  return out;
}

namespace detail {

inline bool is_text_column(const std::string& c) {
  return c == "experiment_id" || c == "kind" || c == "backend" || c == "model" || c == "value_kind";
}

inline Json field_to_json(const std::string& column, const std::string& field) {
  if (is_text_column(column)) return field;
  if (field.empty()) return nullptr;
  if (field == "inf" || field == "-inf") return field;
  return Json::parse(field);
}

inline std::string field_from_json(const std::string& column, const Json& v) {
  if (is_text_column(column)) return v.get<std::string>();
  if (v.is_null()) return "";
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_unsigned()) return std::to_string(v.get<std::uint64_t>());
  if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
  return fmt(v.get<double>());
}

}  // namespace detail

/// JSON rows keyed by column name; numbers as JSON numbers, NaN as null.
template <class Row>
Json rows_to_json(const std::vector<std::string>& header, const std::vector<Row>& rows,
                  std::vector<std::string> (*fields)(const Row&)) {
  Json arr = Json::array();
  for (const auto& r : rows) {
    const auto f = fields(r);
    Json o = Json::object();
    for (std::size_t i = 0; i < header.size(); ++i) o[header[i]] = detail::field_to_json(header[i], f[i]);
    arr.push_back(std::move(o));
  }
  return arr;
}

template <class Row>
std::vector<Row> rows_from_json(const Json& arr, const std::vector<std::string>& header,
                                Row (*from_fields)(const std::vector<std::string>&)) {
  std::vector<Row> out;
  try {
    for (const auto& o : arr) {
      std::vector<std::string> f;
      for (const auto& h : header) f.push_back(detail::field_from_json(h, o.at(h)));
      out.push_back(from_fields(f));
    }
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("malformed results JSON: ") + e.what());
  }
  return out;
}

inline std::string results_json(const ResultTable& t) {
  Json j;
  j["raw"] = rows_to_json(raw_columns(), t.raw, &raw_fields);
  j["aggregated"] = rows_to_json(aggregated_columns(), t.aggregated, &aggregated_fields);
  return j.dump(1) + "\n";
}

inline ResultTable parse_results_json(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw IoError(std::string("malformed results JSON: ") + e.what());
  }
  if (!j.contains("raw") || !j.contains("aggregated")) throw IoError("results JSON needs raw and aggregated arrays");
  ResultTable t;
  t.raw = rows_from_json<RawRow>(j.at("raw"), raw_columns(), &raw_from_fields);
  t.aggregated = rows_from_json<AggregateRow>(j.at("aggregated"), aggregated_columns(), &aggregated_from_fields);
  return t;
}

//------------------------------------------------------------------------------
// Manifest and emit
//------------------------------------------------------------------------------

struct RunInfo {
  double wall_time_seconds = 0.0;
  std::size_t workers = 1;
};

inline Json manifest(const ExperimentConfig& cfg, const RunInfo& info, const std::vector<std::string>& files,
                     std::size_t evaluations = 0, std::size_t degenerate = 0) {
  Json m;
  m["tool"] = "encdec";
  m["version"] = kVersion;
  m["experiment_id"] = cfg.id;
  m["config"] = config_to_json(cfg);
  m["seeds"] = {{"master", cfg.seed},
                {"derivation", "splitmix64 chain over (master, realization, stream tag, sub-index)"},
                {"stream_tags", {{"gates", 1}, {"disorder", 2}, {"trajectory", 3}, {"initial_state", 4}}}};
  m["wall_time_seconds"] = info.wall_time_seconds;
  m["workers"] = info.workers;
  m["evaluations"] = evaluations;
  m["degenerate_post_selections"] = degenerate;
  m["files"] = files;
  return m;
}

/// Writes raw + aggregated tables (csv: raw.csv, aggregated.csv; json:
/// results.json) and manifest.json into `dir`. Returns the file names.
inline std::vector<std::string> emit_results(const ResultTable& t, const std::filesystem::path& dir, OutputFormat format,
                                             const ExperimentConfig& cfg, const RunInfo& info) {
  std::vector<std::string> files;
  if (format == OutputFormat::csv) {
    detail::write_text(dir / "raw.csv", raw_csv(t.raw));
    detail::write_text(dir / "aggregated.csv", aggregated_csv(t.aggregated));
    files = {"raw.csv", "aggregated.csv"};
  } else {
    detail::write_text(dir / "results.json", results_json(t));
    files = {"results.json"};
  }
  files.push_back("manifest.json");
  detail::write_text(dir / "manifest.json", manifest(cfg, info, files, t.evaluations, t.degenerate).dump(2) + "\n");
  return files;
}

/// Reads back whatever emit_results wrote in `dir`.
inline ResultTable load_results(const std::filesystem::path& dir) {
  if (std::filesystem::exists(dir / "results.json")) return parse_results_json(detail::read_text(dir / "results.json"));
  ResultTable t;
  t.raw = parse_raw_csv(detail::read_text(dir / "raw.csv"));
  t.aggregated = parse_aggregated_csv(detail::read_text(dir / "aggregated.csv"));
  return t;
}

/// Aggregated rows from an aggregated CSV, a results JSON, or a run directory.
inline std::vector<AggregateRow> load_aggregated(const std::filesystem::path& path) {
  if (std::filesystem::is_directory(path)) return load_results(path).aggregated;
  if (path.extension() == ".json") return parse_results_json(detail::read_text(path)).aggregated;
  return parse_aggregated_csv(detail::read_text(path));
}

//------------------------------------------------------------------------------
// Self-averaging and collapse outputs
//------------------------------------------------------------------------------

inline std::string selfavg_points_csv(const std::vector<SelfAveragingPoint>& pts) {
  using detail::fmt;
  std::string out =
      "N,strength,n_real,quenched,quenched_sem,annealed,theory_value,difference,fluct_m2,fluct_m2_err,fluct_p2,fluct_p2_err\n";
  for (const auto& p : pts)
    out += detail::join({fmt(p.n), fmt(p.strength), fmt(static_cast<std::uint64_t>(p.n_real)), fmt(p.quenched),
                         fmt(p.quenched_sem), fmt(p.annealed), fmt(p.theory), fmt(p.difference),
                         fmt(p.fluctuations.numerator.mean), fmt(p.fluctuations.numerator.sem),
                         fmt(p.fluctuations.denominator.mean), fmt(p.fluctuations.denominator.sem)}) +
           "\n";
  return out;
}

inline std::string selfavg_fits_csv(const std::vector<DecayFit>& fits) {
  using detail::fmt;
  std::string out = "quantity,strength,rate,r2,points,status\n";
  for (const auto& f : fits)
    out += detail::join({f.quantity, fmt(f.strength), fmt(f.rate), fmt(f.r2), fmt(static_cast<std::uint64_t>(f.points)),
                         f.status}) +
           "\n";
  return out;
}

inline Json collapse_to_json(const CollapseFit& f) {
  using detail::num;
  return Json{{"critical", num(f.critical)},
              {"nu", num(f.nu)},
              {"residual", num(f.residual)},
              {"critical_err", num(f.critical_err)},
              {"nu_err", num(f.nu_err)},
              {"critical_ci", {num(f.critical_ci_lo), num(f.critical_ci_hi)}},
              {"nu_ci", {num(f.nu_ci_lo), num(f.nu_ci_hi)}},
              {"bootstrap_samples", f.bootstrap_samples},
              {"locally_optimal", f.locally_optimal},
              {"curves", f.curves}};
}

inline std::string collapse_csv(const CollapseFit& f) {
  using detail::fmt;
  std::string curves;
  for (std::size_t i = 0; i < f.curves.size(); ++i) curves += (i ? ";" : "") + f.curves[i];
  return "critical,nu,residual,critical_err,nu_err,critical_ci_lo,critical_ci_hi,nu_ci_lo,nu_ci_hi,bootstrap_samples,"
         "locally_optimal,curves\n" +
         detail::join({fmt(f.critical), fmt(f.nu), fmt(f.residual), fmt(f.critical_err), fmt(f.nu_err),
                       fmt(f.critical_ci_lo), fmt(f.critical_ci_hi), fmt(f.nu_ci_lo), fmt(f.nu_ci_hi),
                       fmt(static_cast<std::uint64_t>(f.bootstrap_samples)), f.locally_optimal ? "true" : "false",
                       curves}) +
         "\n";
}

//------------------------------------------------------------------------------
// Theory export
//------------------------------------------------------------------------------

inline std::vector<std::string> theory_fields(const TheoryRow& t) {
  using detail::fmt;
  return {t.kind, fmt(t.n), fmt(t.k), fmt(t.r), fmt(t.q), fmt(t.strength), fmt(t.value)};
}

inline TheoryRow theory_from_fields(const std::vector<std::string>& f) {
  using detail::parse_double;
  return {f[0], parse_double(f[1]), parse_double(f[2]), parse_double(f[3]), parse_double(f[4]), parse_double(f[5]),
          parse_double(f[6])};
}

inline std::string theory_csv(const std::vector<TheoryRow>& rows) { return to_csv(theory_columns(), rows, theory_fields); }

inline std::vector<TheoryRow> parse_theory_csv(const std::string& text) {
  std::vector<TheoryRow> out;
  for (const auto& f : detail::read_csv(text, theory_columns())) out.push_back(theory_from_fields(f));
  return out;
}

inline std::string theory_json(const std::vector<TheoryRow>& rows) {
  Json j;
  j["theory"] = rows_to_json(theory_columns(), rows, &theory_fields);
  return j.dump(1) + "\n";
}

}  // namespace encdec::harness
