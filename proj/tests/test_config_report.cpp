#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "rankzo/bench.hpp"
#include "rankzo/config.hpp"
#include "rankzo/errors.hpp"
#include "rankzo/report.hpp"

using namespace rankzo;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("rankzo_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

bench::ExperimentResult tiny_result(std::int64_t horizon) {
  bench::ExperimentSpec s;
  s.problem.dim = 3;
  s.problem.lambda_max = 2.0;
  s.problem.noise_radius = 4.0;
  s.sample_size = 4;
  s.horizon = horizon;
  s.seeds = {5};
  return bench::run_experiment(s);
}

}  // namespace

TEST(Config, ParsesEveryField) {
  const auto s = config::parse_spec(R"({
    "family": "cosine", "dim": 7, "lambda_min": 0.5, "lambda_max": 3, "cosine_a": 2.5,
    "noise_radius": 30, "region_radius": 2, "sample_size": 16, "horizon": 300,
    "alpha": 0.01, "delta": 0.001, "schedule": "fixed_horizon", "mu": 0.5,
    "eta_hat": 0.02, "eta": 0.3, "gradient_norm_scaling": false, "seeds": [4, 9],
    "target_epsilon": 0.2, "mode": "nonconvex_stationarity", "x1_distance": 2.0,
    "x1_fill": 0.5, "baseline_horizon": 100, "baseline_alpha": 0.001})");
  EXPECT_EQ(s.problem.family, "cosine");
  EXPECT_EQ(s.problem.dim, 7);
  EXPECT_DOUBLE_EQ(s.problem.cosine_a, 2.5);
  EXPECT_EQ(s.sample_size, 16);
  EXPECT_EQ(s.horizon, 300);
  EXPECT_DOUBLE_EQ(*s.alpha, 0.01);
  EXPECT_EQ(s.schedule, bench::ScheduleKind::FixedHorizon);
  EXPECT_FALSE(s.gradient_norm_scaling);
  EXPECT_EQ(s.seeds, (std::vector<std::uint64_t>{4, 9}));
  EXPECT_EQ(s.mode, bench::Mode::NonconvexStationarity);
  EXPECT_DOUBLE_EQ(*s.x1_fill, 0.5);
  EXPECT_EQ(*s.baseline_horizon, 100);

  const auto again = config::parse_spec(config::dump_spec(s));
  EXPECT_EQ(config::dump_spec(again), config::dump_spec(s));
}

TEST(Config, SeedCount) {
  const auto s = config::parse_spec(R"({"seed_count": 3, "seed_base": 10})");
  EXPECT_EQ(s.seeds, (std::vector<std::uint64_t>{10, 11, 12}));
}

TEST(Config, Errors) {
  EXPECT_THROW(config::parse_spec("{"), ConfigError);
  EXPECT_THROW(config::parse_spec("[1]"), ConfigError);
  EXPECT_THROW(config::parse_spec(R"({"dimension": 3})"), ConfigError);
  EXPECT_THROW(config::parse_spec(R"({"dim": "three"})"), ConfigError);
  EXPECT_THROW(config::parse_spec(R"({"seeds": []})"), ConfigError);
  EXPECT_THROW(config::parse_spec(R"({"schedule": "cosine"})"), ConfigError);
  EXPECT_THROW(config::parse_spec(R"({"target_epsilon": 0})"), ConfigError);
  EXPECT_THROW(config::load_spec("/nonexistent/spec.json"), ConfigError);
}

TEST(Report, EmptyResultsHeaderOnly) {
  const auto dir = scratch("empty");
  report::write_trace_csv((dir / "t.csv").string(), {});
  EXPECT_EQ(slurp(dir / "t.csv"), std::string(report::kTraceHeader) + "\n");
}

TEST(Report, OneRunTwoRows) {
  const auto dir = scratch("two");
  const auto r = tiny_result(2);
  report::write_trace_csv((dir / "t.csv").string(), r.runs);
  const auto rows = report::read_trace_csv((dir / "t.csv").string());
  EXPECT_EQ(rows.size(), 2u);
}

TEST(Report, RoundTripExact) {
  const auto dir = scratch("roundtrip");
  const auto r = tiny_result(25);
  report::write_trace_csv((dir / "t.csv").string(), r.runs);
  const auto rows = report::read_trace_csv((dir / "t.csv").string());
  ASSERT_EQ(rows.size(), 25u);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& a = r.runs[0].trace.records[i];
    EXPECT_EQ(rows[i].seed, 5u);
    EXPECT_EQ(rows[i].record.t, a.t);
    EXPECT_NEAR(rows[i].record.f_gap, a.f_gap, 1e-12 * std::max(1.0, std::abs(a.f_gap)));
    EXPECT_EQ(rows[i].record.grad_sq, a.grad_sq);
    EXPECT_EQ(rows[i].record.queries, a.queries);
    EXPECT_EQ(rows[i].record.eta, a.eta);
  }
}

TEST(Report, ByteIdentical) {
  const auto a = scratch("bytes_a");
  const auto b = scratch("bytes_b");
  report::emit_report(tiny_result(10), a.string(), "rank");
  report::emit_report(tiny_result(10), b.string(), "rank");
  EXPECT_EQ(slurp(a / "rank_trace.csv"), slurp(b / "rank_trace.csv"));
  EXPECT_EQ(slurp(a / "rank_summary.json"), slurp(b / "rank_summary.json"));
}

TEST(Report, UnwritablePath) {
  EXPECT_THROW(report::write_trace_csv("/nonexistent/dir/t.csv", {}), IoError);
  EXPECT_THROW(report::write_text("/nonexistent/dir/s.json", "{}"), IoError);
}

TEST(Report, FormatDouble) {
  EXPECT_EQ(report::format_double(0.1), "0.1");
  EXPECT_EQ(report::format_double(1e-300), "1e-300");
  EXPECT_EQ(report::format_double(std::numeric_limits<double>::infinity()), "inf");
}
