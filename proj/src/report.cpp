#include "rankzo/report.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "rankzo/errors.hpp"

namespace rankzo::report {

using nlohmann::json;

namespace {

json number(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

template <typename T>
T parse_field(const std::string& field, const std::string& line) {
  T value{};
  const char* first = field.data();
  const char* last = first + field.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) throw ConfigError("trace: malformed row '" + line + "'");
  return value;
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_trace_csv(const std::string& path, const std::vector<bench::SeedRun>& runs) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << kTraceHeader << '\n';
  for (const auto& run : runs) {
    for (const auto& r : run.trace.records) {
      out << run.run_id << ',' << run.seed << ',' << r.t << ',' << format_double(r.f_gap) << ','
          << format_double(r.grad_sq) << ',' << r.queries << ',' << format_double(r.eta) << '\n';
    }
  }
  if (!out) throw IoError("write to '" + path + "' failed");
}

std::vector<TraceRow> read_trace_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read '" + path + "'");
  std::string line;
  if (!std::getline(in, line) || line != kTraceHeader) {
    throw ConfigError("trace: missing header in '" + path + "'");
  }
  std::vector<TraceRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (f.size() != 7) throw ConfigError("trace: malformed row '" + line + "'");
    TraceRow row;
    row.run_id = parse_field<std::size_t>(f[0], line);
    row.seed = parse_field<std::uint64_t>(f[1], line);
    row.record.t = parse_field<std::int64_t>(f[2], line);
    row.record.f_gap = parse_field<double>(f[3], line);
    row.record.grad_sq = parse_field<double>(f[4], line);
    row.record.queries = parse_field<std::uint64_t>(f[5], line);
    row.record.eta = parse_field<double>(f[6], line);
    rows.push_back(row);
  }
  return rows;
}

std::string summary_json(const bench::ExperimentResult& result) {
  const auto& s = result.summary;
  json j;
  j["method"] = result.method;
  j["mode"] = bench::to_string(s.mode);
  j["sample_size"] = s.sample_size;
  j["horizon"] = s.horizon;
  j["alpha"] = number(result.alpha);
  j["delta"] = number(result.delta);
  j["c_d_delta"] = number(result.c_d_delta);
  j["initial_criterion"] = number(result.initial_criterion);
  j["successful_runs"] = s.successful_runs;
  j["failed_runs"] = s.failed_runs;
  j["epsilon"] = s.epsilon ? json(*s.epsilon) : json(nullptr);
  j["queries_to_target"] = s.queries_to_target ? json(*s.queries_to_target) : json(nullptr);
  j["iterations_to_target"] = s.iterations_to_target ? json(*s.iterations_to_target) : json(nullptr);
  json failures = json::array();
  for (const auto& run : result.runs) {
    if (!run.trace.ok()) failures.push_back({{"run_id", run.run_id}, {"reason", *run.trace.abort_reason}});
  }
  j["failures"] = failures;
  json rows = json::array();
  for (const auto& r : s.rows) {
    rows.push_back({{"t", r.t},
                    {"queries", r.queries},
                    {"median", number(r.median)},
                    {"q1", number(r.q1)},
                    {"q3", number(r.q3)}});
  }
  j["rows"] = rows;
  return j.dump(2);
}

std::string reports_json(const std::vector<verify::McReport>& reports) {
  json arr = json::array();
  for (const auto& r : reports) {
    json details = json::object();
    for (const auto& [k, v] : r.details) details[k] = number(v);
    arr.push_back({{"check", r.check},
                   {"kind", r.kind == verify::BoundKind::Lower ? "lower" : "upper"},
                   {"trials", r.trials},
                   {"successes", r.successes},
                   {"empirical_freq", number(r.empirical_freq)},
                   {"theoretical_bound", number(r.theoretical_bound)},
                   {"standard_error", number(r.standard_error)},
                   {"pass", r.pass},
                   {"details", details}});
  }
  return arr.dump(2);
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << text << '\n';
  if (!out) throw IoError("write to '" + path + "' failed");
}

void emit_report(const bench::ExperimentResult& result, const std::string& out_dir,
                 const std::string& label) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create '" + out_dir + "': " + ec.message());
  const std::filesystem::path dir(out_dir);
  write_trace_csv((dir / (label + "_trace.csv")).string(), result.runs);
  write_text((dir / (label + "_summary.json")).string(), summary_json(result));
}

}  // namespace rankzo::report
