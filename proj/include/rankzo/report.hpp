#pragma once

// CSV traces and JSON summaries. Doubles are written in shortest
// round-trip form, so a trace read back compares equal to the one written.

#include <cstdint>
#include <string>
#include <vector>

#include "rankzo/bench.hpp"
#include "rankzo/verify.hpp"

namespace rankzo::report {

inline constexpr const char* kTraceHeader = "run_id,seed,t,f_gap,grad_sq,queries,eta";

std::string format_double(double v);

struct TraceRow {
  std::size_t run_id = 0;
  std::uint64_t seed = 0;
  core::IterationRecord record;
};

/// One row per (run, t). Throws IoError when `path` cannot be written.
void write_trace_csv(const std::string& path, const std::vector<bench::SeedRun>& runs);

/// Throws IoError on an unreadable file and ConfigError on a malformed row.
std::vector<TraceRow> read_trace_csv(const std::string& path);

std::string summary_json(const bench::ExperimentResult& result);

std::string reports_json(const std::vector<verify::McReport>& reports);

/// Throws IoError when `path` cannot be written.
void write_text(const std::string& path, const std::string& text);

/// Writes <out_dir>/<label>_trace.csv and <out_dir>/<label>_summary.json,
/// creating out_dir if needed.
void emit_report(const bench::ExperimentResult& result, const std::string& out_dir,
                 const std::string& label);

}  // namespace rankzo::report
