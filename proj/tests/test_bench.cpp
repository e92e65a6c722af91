#include <gtest/gtest.h>

#include <cmath>

#include "rankzo/bench.hpp"
#include "rankzo/errors.hpp"

using namespace rankzo;
using namespace rankzo::bench;

namespace {

ExperimentSpec small_spec() {
  ExperimentSpec s;
  s.problem.family = "quadratic";
  s.problem.dim = 4;
  s.problem.lambda_min = 1.0;
  s.problem.lambda_max = 2.0;
  s.problem.noise_radius = 5.0;
  s.problem.region_radius = 1.0;
  s.sample_size = 8;
  s.horizon = 60;
  s.seeds = {1, 2, 3, 4, 5};
  return s;
}

}  // namespace

TEST(Experiment, ZeroHorizonIsEmpty) {
  ExperimentSpec s = small_spec();
  s.horizon = 0;
  s.seeds = {1};
  s.schedule = ScheduleKind::Constant;
  const ExperimentResult r = run_experiment(s);
  EXPECT_TRUE(r.summary.rows.empty());
  EXPECT_EQ(r.summary.successful_runs, 1u);
  EXPECT_TRUE(check_accounting(r, 8, 0));
}

TEST(Experiment, DeterministicSummaries) {
  ExperimentSpec s = small_spec();
  s.seeds.clear();
  for (std::uint64_t i = 1; i <= 20; ++i) s.seeds.push_back(i);
  const Summary a = run_experiment(s).summary;
  const Summary b = run_experiment(s).summary;
  ASSERT_EQ(a.rows.size(), b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    EXPECT_EQ(a.rows[i].median, b.rows[i].median);
    EXPECT_EQ(a.rows[i].q1, b.rows[i].q1);
    EXPECT_EQ(a.rows[i].q3, b.rows[i].q3);
  }
}

TEST(Experiment, QueriesAreNT) {
  const ExperimentResult r = run_experiment(small_spec());
  EXPECT_TRUE(check_accounting(r, 8, 60));
  for (const auto& row : r.summary.rows) EXPECT_EQ(row.queries, 8u * static_cast<std::uint64_t>(row.t));
}

TEST(Experiment, QuartilesOrdered) {
  const Summary s = run_experiment(small_spec()).summary;
  for (const auto& row : s.rows) {
    EXPECT_LE(row.q1, row.median);
    EXPECT_LE(row.median, row.q3);
  }
}

TEST(Experiment, DefaultsFromProblemConstants) {
  const PreparedExperiment p = prepare(small_spec());
  const double delta = 1.0 / (20.0 * 8 * 60);
  EXPECT_DOUBLE_EQ(p.delta, delta);
  EXPECT_DOUBLE_EQ(p.c_d_delta, 4 + 2 * std::log(1 / delta));
  EXPECT_DOUBLE_EQ(p.config.alpha, 3.0 / (2 * p.c_d_delta * 2.0));
  EXPECT_NEAR((p.x1 - p.problem->minimizer()).norm(), 1.0, 1e-12);
}

TEST(Experiment, TargetReached) {
  ExperimentSpec s = small_spec();
  s.horizon = 400;
  s.target_epsilon_relative = 0.5;
  const ExperimentResult r = run_experiment(s);
  ASSERT_TRUE(r.summary.queries_to_target.has_value());
  const auto t = *r.summary.iterations_to_target;
  EXPECT_EQ(*r.summary.queries_to_target, 8u * static_cast<std::uint64_t>(t));
  EXPECT_LE(r.summary.rows[static_cast<std::size_t>(t - 1)].median, *r.summary.epsilon);
  for (std::int64_t i = 0; i + 1 < t; ++i) {
    EXPECT_GT(r.summary.rows[static_cast<std::size_t>(i)].median, *r.summary.epsilon);
  }
}

TEST(Experiment, NonconvexCriterionIsRunningAverage) {
  core::RunTrace tr;
  for (int t = 1; t <= 4; ++t) tr.records.push_back(core::IterationRecord{t, 0.0, double(t), 0, 0.1});
  const auto c = criterion_series(tr, Mode::NonconvexStationarity);
  EXPECT_DOUBLE_EQ(c[0], 1.0);
  EXPECT_DOUBLE_EQ(c[3], 2.5);
}

TEST(Experiment, FailedRunsExcluded) {
  std::vector<SeedRun> runs(3);
  for (std::size_t i = 0; i < 3; ++i) {
    runs[i].run_id = i;
    for (int t = 1; t <= 2; ++t) {
      runs[i].trace.records.push_back(core::IterationRecord{t, double(i + 1), 0.0, 4u * t, 0.1});
    }
  }
  runs[1].trace.abort_reason = "t=2: boom";
  const Summary s = summarize(runs, Mode::StronglyConvexGap, std::nullopt, 4, 2);
  EXPECT_EQ(s.successful_runs, 2u);
  EXPECT_EQ(s.failed_runs, 1u);
  EXPECT_DOUBLE_EQ(s.rows[0].median, 2.0);
}

TEST(Experiment, InvalidSpecs) {
  ExperimentSpec s = small_spec();
  s.seeds.clear();
  EXPECT_THROW(run_experiment(s), ConfigError);
  s = small_spec();
  s.target_epsilon = -1.0;
  EXPECT_THROW(run_experiment(s), ConfigError);
  s = small_spec();
  s.sample_size = 6;
  EXPECT_THROW(run_experiment(s), ConfigError);
  s = small_spec();
  s.problem.noise_radius = 1.0;
  EXPECT_THROW(run_experiment(s), ConfigError);
  s = small_spec();
  s.problem.family = "rosenbrock";
  EXPECT_THROW(run_experiment(s), ConfigError);
}

TEST(Baseline, NoiselessQuadraticConverges) {
  auto p = functions::make_quadratic(2, 1.0, 2.0, functions::NoiseSpec{0.0}, 1.0);
  BaselineConfig c;
  c.dim = 2;
  c.horizon = 2000;
  c.alpha = 1e-4;
  c.schedule.eta0 = 0.05;
  c.seed = 3;
  const Vector x1 = Vector::Constant(2, 1.0);
  const core::RunTrace tr = baseline_two_point_zo(*p, c, x1);
  ASSERT_TRUE(tr.ok());
  EXPECT_LT(p->value(tr.final_point), 1e-2 * p->value(x1));
  EXPECT_EQ(tr.ledger_total, 4000u);
  for (const auto& r : tr.records) EXPECT_EQ(r.queries, 2u * static_cast<std::uint64_t>(r.t));
}

TEST(Baseline, EstimatorUnbiasedForSmallAlpha) {
  auto p = functions::make_quadratic(3, 1.0, 3.0, functions::NoiseSpec{0.0}, 1.0);
  Vector x(3);
  x << 0.4, -0.2, 0.7;
  const double alpha = 1e-5;
  const int n = 100000;
  Rng rng = make_rng(17);
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector sum = Vector::Zero(3);
  Vector sum_sq = Vector::Zero(3);
  Vector u(3);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < 3; ++j) u[j] = normal(rng);
    const Vector g = ((p->value(x + alpha * u) - p->value(x)) / alpha) * u;
    sum += g;
    sum_sq += g.cwiseProduct(g);
  }
  const Vector mean = sum / n;
  const Vector grad = p->gradient(x);
  for (int j = 0; j < 3; ++j) {
    const double se = std::sqrt((sum_sq[j] / n - mean[j] * mean[j]) / n);
    EXPECT_LT(std::abs(mean[j] - grad[j]), 4.0 * se) << j;
  }
}

TEST(Baseline, StepGridAndSchedule) {
  auto p = functions::make_quadratic(8, 1.0, 5.0, functions::NoiseSpec{0.0}, 1.0);
  const auto grid = baseline_step_grid(*p);
  ASSERT_EQ(grid.size(), 5u);
  EXPECT_DOUBLE_EQ(grid[2], 1.0 / 50.0);
  for (std::size_t i = 1; i < grid.size(); ++i) EXPECT_NEAR(grid[i] / grid[i - 1], 3.0, 1e-12);
  BaselineSchedule s{0.5, 2.0};
  EXPECT_DOUBLE_EQ(s.at(2), 0.5 / 2.0);
  EXPECT_DOUBLE_EQ((BaselineSchedule{0.5, std::nullopt}.at(100)), 0.5);
}

TEST(Baseline, ExperimentAccounting) {
  ExperimentSpec s = small_spec();
  s.target_epsilon_relative = 0.5;
  const BaselineResult r = run_baseline_experiment(s);
  EXPECT_EQ(r.experiment.summary.horizon, 8 * 60 / 2);
  EXPECT_TRUE(check_accounting(r.experiment, 2, 240));
  EXPECT_EQ(r.grid_scores.size(), 5u);
}

TEST(Fit, ExactPowerLaws) {
  std::vector<std::pair<double, double>> lin;
  std::vector<std::pair<double, double>> inv;
  for (double x : {1.0, 2.0, 5.0, 10.0, 30.0}) {
    lin.emplace_back(x, 7.0 * x);
    inv.emplace_back(x, 3.0 / (x * x));
  }
  const ScalingFit a = fit_loglog_slope(lin);
  EXPECT_NEAR(a.slope, 1.0, 1e-9);
  EXPECT_NEAR(a.intercept, std::log(7.0), 1e-9);
  EXPECT_NEAR(a.r_squared, 1.0, 1e-12);
  EXPECT_NEAR(fit_loglog_slope(inv).slope, -2.0, 1e-9);
}

TEST(Fit, NoisyPowerLaw) {
  Rng rng = make_rng(23);
  std::uniform_real_distribution<double> jitter(0.95, 1.05);
  std::vector<std::pair<double, double>> pts;
  for (int i = 0; i <= 20; ++i) {
    const double x = std::pow(10.0, 1.0 + i / 20.0);
    pts.emplace_back(x, std::pow(x, 1.5) * jitter(rng));
  }
  const ScalingFit f = fit_loglog_slope(pts);
  EXPECT_GE(f.slope, 1.35);
  EXPECT_LE(f.slope, 1.65);
  EXPECT_GE(f.r_squared, 0.0);
  EXPECT_LE(f.r_squared, 1.0);
}

TEST(Fit, RescalingShiftsInterceptOnly) {
  std::vector<std::pair<double, double>> pts = {{1, 2.0}, {2, 3.5}, {4, 8.1}, {8, 15.0}};
  std::vector<std::pair<double, double>> scaled = pts;
  for (auto& p : scaled) p.second *= 1000.0;
  const ScalingFit a = fit_loglog_slope(pts);
  const ScalingFit b = fit_loglog_slope(scaled);
  EXPECT_NEAR(a.slope, b.slope, 1e-12);
  EXPECT_NEAR(b.intercept - a.intercept, std::log(1000.0), 1e-12);
}

TEST(Fit, Rejects) {
  EXPECT_THROW(fit_loglog_slope({{1, 1}, {2, 2}}), DomainError);
  EXPECT_THROW(fit_loglog_slope({{1, 1}, {2, 0}, {3, 3}}), DomainError);
  EXPECT_THROW(fit_loglog_slope({{-1, 1}, {2, 2}, {3, 3}}), DomainError);
}

TEST(QueryBounds, Terms) {
  QueryBoundInputs in;
  in.dim = 10;
  in.L = 1.0;
  in.mu = 1.0;
  in.g_upper = 1.0;
  in.epsilon = 0.1;
  in.f_gap1 = 1.0;
  // f_gap1 = 1 > 0 but ln(max{7500, 1}) term: 10 ln(7500) / (K eps)
  const double second = 10.0 * std::log(7500.0) / (0.404329453335082 * 0.1);
  EXPECT_NEAR(predicted_query_bounds(Mode::StronglyConvexGap, in), 75000.0 + second, 1e-6);
  const double nc = predicted_query_bounds(Mode::NonconvexStationarity, in);
  EXPECT_NEAR(nc, 3.0 * 180 * 180 * 10 / 0.01 + 32000.0, 1e-6);

  QueryBoundInputs half = in;
  half.epsilon = 0.05;
  const double lead_half = 750.0 * 10 / 0.05;
  EXPECT_DOUBLE_EQ(lead_half, 2.0 * 75000.0);

  QueryBoundInputs bad = in;
  bad.L = 0.0;
  EXPECT_THROW(predicted_query_bounds(Mode::StronglyConvexGap, bad), DomainError);
  bad = in;
  bad.mu.reset();
  EXPECT_THROW(predicted_query_bounds(Mode::StronglyConvexGap, bad), DomainError);
  EXPECT_NO_THROW(predicted_query_bounds(Mode::NonconvexStationarity, bad));
}

TEST(Scaling, HorizonSweepFits) {
  ExperimentSpec s = small_spec();
  s.seeds = {1, 2, 3};
  const ScalingStudy st = run_scaling(s, SweepAxis::Horizon, {50, 100, 200});
  ASSERT_TRUE(st.fit.has_value()) << st.error.value_or("");
  EXPECT_EQ(st.points.size(), 3u);
  EXPECT_LT(st.fit->slope, 0.0);
  EXPECT_THROW(run_scaling(s, SweepAxis::Dim, {2.5}), ConfigError);
}
