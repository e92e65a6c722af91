#pragma once

// Rank-based zeroth-order optimizer.
//
// Each iteration draws N standard Gaussian directions u_i, asks the rank
// oracle to order x_t + alpha u_i by a single noisy evaluation, and steps
// along
//   d_t = (4/N) sum_{best quarter} u_(k) - (4/N) sum_{worst quarter} u_(k).

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "rankzo/direction_set.hpp"
#include "rankzo/functions.hpp"
#include "rankzo/oracle.hpp"

namespace rankzo::core {

/// eta_t = 1 / (2 mu t), times ||grad f(x_t; xi_t)|| when scaled.
struct StronglyConvex {
  double mu;
};
/// eta_t = eta_hat, times ||grad f(x_t; xi_t)|| when scaled.
struct FixedHorizon {
  double eta_hat;
};
struct Constant {
  double eta;
};

struct StepSchedule {
  std::variant<StronglyConvex, FixedHorizon, Constant> rule = Constant{0.1};
  /// Oracle-assisted mode: the harness supplies ||grad f(x_t; xi_t)||.
  bool gradient_norm_scaling = false;

  void validate() const;
};

struct OptimizerConfig {
  int dim = 1;
  int sample_size = 4;
  std::int64_t horizon = 1;  ///< T; 0 runs no iterations
  double alpha = 1e-3;
  StepSchedule schedule;
  std::uint64_t seed = 0;

  /// Throws ConfigError on sample_size not a positive multiple of 4,
  /// alpha <= 0, dim < 1, horizon < 0 or an invalid schedule.
  void validate() const;
};

/// C_{d,delta} = d + 2 ln(1/delta).
double c_d_delta(int d, double delta);

/// Largest admissible smoothing radius, g_lower / (2 C L).
double smoothing_parameter(double g_lower, double L, double c_d_delta);

/// Default probability parameter delta = 1 / (20 N T).
double default_delta(int sample_size, std::int64_t horizon);

/// Rounded tail probability the convergence bounds are stated with; 1 - Phi(2) is
/// 0.02275..., see verify::upper_tail_at_two().
inline constexpr double kBoundP = 0.0224;

/// ceil(ln(40 T) / K(1/4 || p)) rounded up to a multiple of 4.
int recommended_sample_size(std::int64_t horizon, double p = kBoundP);

/// eta_hat = sqrt(N / (T L C)) * sqrt(f(x_1) - f*) / G_u.
double fixed_horizon_eta_hat(int sample_size, std::int64_t horizon, double L, double c_d_delta,
                             double f_gap1, double g_upper);

double step_size(const StepSchedule& schedule, std::int64_t t,
                 std::optional<double> grad_norm = std::nullopt);

/// N x d i.i.d. standard normals drawn from `rng`.
DirectionSet sample_directions(Rng& rng, int sample_size, int dim, std::int64_t iteration = 0);

/// Weight carried by rank position k (0-based): +4/N in the best quarter,
/// -4/N in the worst quarter, 0 otherwise.
std::vector<double> quartile_weights(int sample_size);

struct DescentDirection {
  Vector vector;
};

/// Each quarter is summed in ascending direction-index order, so the result
/// depends only on the two index sets and reversing the ranking negates it
/// bit for bit.
DescentDirection build_descent_direction(const DirectionSet& dirs, const oracle::Ranking& ranking);

struct IterationRecord {
  std::int64_t t = 0;
  double f_gap = 0.0;
  double grad_sq = 0.0;
  std::uint64_t queries = 0;
  double eta = 0.0;
};

struct RunTrace {
  std::vector<IterationRecord> records;
  Vector final_point;
  std::uint64_t ledger_total = 0;
  /// Iterations whose x_t lay outside the problem's certified region.
  std::int64_t region_exits = 0;
  /// Set when the run stopped early; records up to the failure are kept.
  std::optional<std::string> abort_reason;

  bool ok() const { return !abort_reason.has_value(); }
};

/// Runs T iterations from x1. Configuration errors throw before iteration 1;
/// a failure during iteration t (non-finite oracle value, vanishing scaled
/// step) ends the run with `abort_reason` set.
RunTrace run(const functions::StochasticProblem& problem, const OptimizerConfig& config,
             const Vector& x1, const oracle::ValueTransform& transform = {});

}  // namespace rankzo::core
