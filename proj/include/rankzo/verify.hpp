#pragma once

// Monte Carlo and algebraic checks of the probability events and auxiliary
// inequalities behind the convergence analysis. Every report is a pure function of
// its seed: trial i draws from make_rng(seed, i), so results do not depend
// on evaluation order.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rankzo/functions.hpp"
#include "rankzo/types.hpp"

namespace rankzo::verify {

/// K(q || p) = q ln(q/p) + (1-q) ln((1-q)/(1-p)); q, p in (0, 1).
double kl_binary(double q, double p);

/// Standard normal CDF via erfc.
double normal_cdf(double x);

/// 1 - Phi(2) = 0.0227501...
double upper_tail_at_two();

/// Pr(chi^2_k > x).
double chi_square_sf(int k, double x);

enum class BoundKind {
  Lower,  ///< pass iff empirical_freq >= theoretical_bound - 3 se
  Upper,  ///< pass iff empirical_freq <= theoretical_bound + 3 se
};

struct McReport {
  std::string check;
  BoundKind kind = BoundKind::Lower;
  std::int64_t trials = 0;
  std::int64_t successes = 0;
  double empirical_freq = 0.0;
  double theoretical_bound = 0.0;
  double standard_error = 0.0;
  bool pass = false;
  /// Named auxiliary quantities (sample means, reference values, ...).
  std::vector<std::pair<std::string, double>> details;

  std::optional<double> detail(const std::string& key) const;
};

/// Fills empirical_freq, standard_error (binomial, from the empirical
/// frequency) and pass.
McReport make_report(std::string check, BoundKind kind, std::int64_t trials,
                     std::int64_t successes, double theoretical_bound);

/// Event that the (3N/4+1)-th smallest of N standard normals is >= 2 and the
/// (N/4)-th smallest is <= -2. Compared against 1 - 2 exp(-N K(1/4 || 0.0224)).
McReport mc_order_statistics_event(int sample_size, std::int64_t trials, std::uint64_t seed);

/// Exact probability of the order-statistics event at threshold tau with
/// per-sample tail probability p = Pr(X >= tau) (trinomial sum).
double order_statistics_event_probability(int sample_size, double tail_p);

/// Violation frequency of ||u||^2 <= 2d + 3 ln(1/delta), u ~ N(0, I_d).
McReport mc_vector_norm_bound(int dim, double delta, std::int64_t trials, std::uint64_t seed);

/// Violation frequency of ||d_t||^2 <= 8 C_{d,delta} / N for d_t built from
/// N fresh Gaussians under the identity ranking. Details carry the sample
/// mean of ||d_t||^2 and the closed form 8d/N.
McReport mc_direction_norm_bound(int sample_size, int dim, double delta, std::int64_t trials,
                                 std::uint64_t seed);

struct ScalarGaussianReport {
  McReport tail;      ///< Pr(|X| > tau) <= 2 exp(-tau^2 / 2)
  McReport max_of_n;  ///< Pr(max_i |X_i| > sqrt(2 ln(2N/delta))) <= delta
  bool pass() const { return tail.pass && max_of_n.pass; }
};

ScalarGaussianReport mc_scalar_gaussian_bounds(double tau, int sample_size, double delta,
                                               std::int64_t trials, std::uint64_t seed);

/// Ranked-projection sum S = sum_{best quarter} <z, u_(k)> -
/// sum_{worst quarter} <z, u_(k)> on the noiseless linear objective
/// f(x) = <g, x> (rankings computed through the rank oracle); frequency of
/// S <= -N against 1 - 2 exp(-N K(1/4 || 0.0224)). `gradient` defaults to
/// the first coordinate axis.
McReport mc_descent_sum_bound(int sample_size, int dim, std::int64_t trials, std::uint64_t seed,
                              std::optional<Vector> gradient = std::nullopt);

/// Delta_1, ..., Delta_{n+1} of the tight recursion Delta_{t+1} = rho_t Delta_t + beta_t.
std::vector<double> recursion_sequence(std::span<const double> rhos, std::span<const double> betas,
                                       double delta1);

/// Runs Delta_{t+1} = rho_t Delta_t + beta_t from Delta_1 and checks every
/// unrolled closed form (all anchors k <= t) to 1e-10 relative.
bool check_recursion_unroll(std::span<const double> rhos, std::span<const double> betas,
                            double delta1);

/// Extremal sequence Delta_{t+1} = b/(t(t-1)) sqrt(sum_{i=2}^t (i-1)^2 Delta_i) + c/t
/// from Delta_2 = a/2, a = 9b^2/4 + 3c; checks Delta_t <= a/t for t <= T.
bool check_sequence_rate(double b, double c, std::int64_t horizon);

/// As above from an arbitrary starting value 0 <= delta2 <= a/2.
bool check_sequence_rate(double b, double c, std::int64_t horizon, double delta2);

struct SweepResult {
  std::int64_t cases = 0;
  std::int64_t violations = 0;
};

/// `cases` random nonnegative (rho, beta) sequences of length <= 50.
SweepResult sweep_recursion_unroll(std::int64_t cases, std::uint64_t seed);

/// `cases` random (b, c) in [0, 5]^2 with random admissible Delta_2.
SweepResult sweep_sequence_rate(std::int64_t cases, std::int64_t horizon, std::uint64_t seed);

/// ||grad f||^2 <= 2L (f - f*) and, when mu is known, >= 2 mu (f - f*) at
/// `samples` region points. Returns true or throws CertificationError
/// naming the point and inequality.
bool check_convexity_bounds(const functions::StochasticProblem& problem, int samples,
                            std::uint64_t seed);

}  // namespace rankzo::verify
