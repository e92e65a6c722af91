#pragma once

// Experiment runner, value-based baseline, log-log scaling fits and the
// query-complexity formulas the experiments are compared against.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rankzo/core.hpp"
#include "rankzo/functions.hpp"

namespace rankzo::bench {

enum class Mode { StronglyConvexGap, NonconvexStationarity };

std::string to_string(Mode mode);
Mode mode_from_string(const std::string& name);

struct ProblemSpec {
  std::string family = "quadratic";  ///< "quadratic" or "cosine"
  int dim = 10;
  double lambda_min = 1.0;
  double lambda_max = 10.0;
  double cosine_a = 2.0;
  double noise_radius = 0.0;
  double region_radius = 1.0;

  std::unique_ptr<functions::StochasticProblem> build() const;
};

enum class ScheduleKind { StronglyConvex, FixedHorizon, Constant };

struct ExperimentSpec {
  ProblemSpec problem;
  int sample_size = 32;
  std::int64_t horizon = 1000;
  /// Absent: the largest admissible alpha for the problem's constants.
  std::optional<double> alpha;
  /// Absent: 1 / (20 N T).
  std::optional<double> delta;
  ScheduleKind schedule = ScheduleKind::StronglyConvex;
  /// StronglyConvex rate; absent uses the problem's mu.
  std::optional<double> mu;
  /// FixedHorizon rate; absent uses fixed_horizon_eta_hat on the problem constants.
  std::optional<double> eta_hat;
  double eta = 0.1;  ///< Constant rate
  bool gradient_norm_scaling = true;
  std::vector<std::uint64_t> seeds = {1};
  std::optional<double> target_epsilon;
  /// Target as a fraction of the initial criterion (f-gap or ||grad f||^2 at x1).
  std::optional<double> target_epsilon_relative;
  Mode mode = Mode::StronglyConvexGap;
  /// x1 = x* + x1_distance (1,...,1)/sqrt(d), unless x1_fill is set.
  double x1_distance = 1.0;
  /// x1 = x1_fill (1,...,1).
  std::optional<double> x1_fill;
  /// Two-point baseline settings; absent horizon matches the rank method's
  /// query budget (N T / 2 iterations), absent alpha reuses the rank alpha.
  std::optional<std::int64_t> baseline_horizon;
  std::optional<double> baseline_alpha;

  /// Throws ConfigError on an inconsistent spec.
  void validate() const;
};

/// Everything derived from a spec before running: problem, x1, resolved
/// optimizer parameters.
struct PreparedExperiment {
  std::unique_ptr<functions::StochasticProblem> problem;
  Vector x1;
  core::OptimizerConfig config;  ///< seed left at 0
  double delta = 0.0;
  double c_d_delta = 0.0;
  double initial_criterion = 0.0;  ///< f(x1) - f* or ||grad f(x1)||^2
  std::optional<double> epsilon;
};

PreparedExperiment prepare(const ExperimentSpec& spec);

struct SummaryRow {
  std::int64_t t = 0;
  double median = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
  std::uint64_t queries = 0;
};

struct Summary {
  Mode mode = Mode::StronglyConvexGap;
  int sample_size = 0;
  std::int64_t horizon = 0;
  std::size_t successful_runs = 0;
  std::size_t failed_runs = 0;
  std::vector<SummaryRow> rows;
  std::optional<double> epsilon;
  /// Queries at the first t whose median criterion is <= epsilon.
  std::optional<std::uint64_t> queries_to_target;
  std::optional<std::int64_t> iterations_to_target;
};

struct SeedRun {
  std::size_t run_id = 0;
  std::uint64_t seed = 0;
  core::RunTrace trace;
};

struct ExperimentResult {
  std::string method = "rank";
  std::vector<SeedRun> runs;
  Summary summary;
  double alpha = 0.0;
  double c_d_delta = 0.0;
  double delta = 0.0;
  double initial_criterion = 0.0;
};

/// The per-run criterion tracked by `mode`: f-gap at each t, or the running
/// average (1/t) sum_{s <= t} ||grad f(x_s)||^2.
std::vector<double> criterion_series(const core::RunTrace& trace, Mode mode);

/// Per-t median and quartiles over successful runs, plus queries-to-target.
Summary summarize(const std::vector<SeedRun>& runs, Mode mode, std::optional<double> epsilon,
                  int sample_size, std::int64_t horizon);

ExperimentResult run_experiment(const ExperimentSpec& spec);

/// eta_t = eta0 / (1 + eta0 mu t / 2) when mu is set (tends to 2/(mu t)),
/// constant eta0 otherwise.
struct BaselineSchedule {
  double eta0 = 1e-2;
  std::optional<double> mu;
  double at(std::int64_t t) const;
};

struct BaselineConfig {
  int dim = 1;
  std::int64_t horizon = 1;
  double alpha = 1e-3;
  BaselineSchedule schedule;
  std::uint64_t seed = 0;
};

/// Two-point Gaussian-smoothing SGD:
///   g = ((f(x + alpha u; xi) - f(x; xi)) / alpha) u,  x <- x - eta_t g,
/// two evaluations per iteration under one shared noise draw.
core::RunTrace baseline_two_point_zo(const functions::StochasticProblem& problem,
                                     const BaselineConfig& config, const Vector& x1);

/// Five-point logarithmic grid eta0 = base * 3^k, k = -2..2, with
/// base = 1 / (L (d + 2)).
std::vector<double> baseline_step_grid(const functions::StochasticProblem& problem);

struct BaselineResult {
  ExperimentResult experiment;
  double chosen_eta0 = 0.0;
  std::vector<std::pair<double, double>> grid_scores;  ///< (eta0, final median criterion)
};

/// Runs the baseline at every grid step over the spec's seeds and keeps the
/// step with the smallest final median criterion.
BaselineResult run_baseline_experiment(const ExperimentSpec& spec);

struct ScalingFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::vector<std::pair<double, double>> points;  ///< (ln x, ln y)
};

/// Ordinary least squares of ln y on ln x; needs >= 3 points, all positive.
ScalingFit fit_loglog_slope(const std::vector<std::pair<double, double>>& points);

/// Every successful run has ledger_total == per_iteration * horizon and
/// record t carries queries == per_iteration * t.
bool check_accounting(const ExperimentResult& result, int per_iteration, std::int64_t horizon);

enum class SweepAxis { Dim, Epsilon, Horizon };

SweepAxis sweep_axis_from_string(const std::string& name);
std::string to_string(SweepAxis axis);

struct SweepPoint {
  double value = 0.0;
  ExperimentResult result;
  /// queries-to-target (dim, epsilon) or the final median criterion (horizon)
  std::optional<double> response;
};

struct ScalingStudy {
  SweepAxis axis = SweepAxis::Dim;
  std::vector<SweepPoint> points;
  std::optional<ScalingFit> fit;
  /// Why no fit was produced (target not reached, too few points, ...).
  std::optional<std::string> error;
};

/// Reruns `spec` once per value with the swept field replaced: dim sets the
/// problem dimension, epsilon the target (relative when the spec's target is
/// relative), horizon sets T. Fits ln(response) against ln(value).
ScalingStudy run_scaling(const ExperimentSpec& spec, SweepAxis axis, const std::vector<double>& values);

struct QueryBoundInputs {
  int dim = 1;
  double L = 1.0;
  std::optional<double> mu;
  double g_upper = 1.0;
  double epsilon = 1.0;
  double f_gap1 = 1.0;
  double p = core::kBoundP;
};

/// Total-query formulas: strongly convex
///   750 d L G^2/(mu^2 eps) + 10 f1 ln(max{75 d L G^2/(mu^2 eps), f1}) / (K(1/4||p) eps),
/// nonconvex
///   3 * 180^2 f1 d L G^2 / eps^2 + 320 d G^2 / eps.
double predicted_query_bounds(Mode mode, const QueryBoundInputs& in);

}  // namespace rankzo::bench
