#include "rankzo/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "rankzo/core.hpp"
#include "rankzo/errors.hpp"
#include "rankzo/oracle.hpp"

namespace rankzo::verify {

namespace {

void require_trials(std::int64_t trials, const char* check) {
  if (trials < 1000) throw DomainError(std::string(check) + ": trials must be >= 1000");
}

void require_quartered(int n, const char* check) {
  if (n < 4 || n % 4 != 0) {
    throw DomainError(std::string(check) + ": N must be a positive multiple of 4");
  }
}

double order_statistics_bound(int n) {
  return 1.0 - 2.0 * std::exp(-n * kl_binary(0.25, core::kBoundP));
}

struct MeanAccumulator {
  double sum = 0.0;
  double sum_sq = 0.0;
  std::int64_t n = 0;
  void add(double v) {
    sum += v;
    sum_sq += v * v;
    ++n;
  }
  double mean() const { return sum / n; }
  double standard_error() const {
    const double m = mean();
    const double var = std::max(0.0, sum_sq / n - m * m) * n / std::max<std::int64_t>(1, n - 1);
    return std::sqrt(var / n);
  }
};

bool close_relative(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max({std::abs(a), std::abs(b), 1e-300});
}

}  // namespace

std::optional<double> McReport::detail(const std::string& key) const {
  for (const auto& [k, v] : details) {
    if (k == key) return v;
  }
  return std::nullopt;
}

McReport make_report(std::string check, BoundKind kind, std::int64_t trials,
                     std::int64_t successes, double theoretical_bound) {
  McReport r;
  r.check = std::move(check);
  r.kind = kind;
  r.trials = trials;
  r.successes = successes;
  r.empirical_freq = static_cast<double>(successes) / static_cast<double>(trials);
  r.theoretical_bound = theoretical_bound;
  r.standard_error = std::sqrt(r.empirical_freq * (1.0 - r.empirical_freq) / trials);
  r.pass = kind == BoundKind::Lower
               ? r.empirical_freq >= theoretical_bound - 3.0 * r.standard_error
               : r.empirical_freq <= theoretical_bound + 3.0 * r.standard_error;
  return r;
}

double order_statistics_event_probability(int sample_size, double tail_p) {
  require_quartered(sample_size, "order_statistics_event_probability");
  if (!(tail_p > 0.0 && tail_p < 0.5)) {
    throw DomainError("order_statistics_event_probability: tail_p must lie in (0, 1/2)");
  }
  // At least m = N/4 samples at or above tau and at least m at or below -tau.
  const int n = sample_size;
  const int m = n / 4;
  const double log_p = std::log(tail_p);
  const double log_mid = std::log1p(-2.0 * tail_p);
  const double log_nf = std::lgamma(n + 1.0);
  double total = 0.0;
  for (int hi = m; hi <= n; ++hi) {
    for (int lo = m; lo + hi <= n; ++lo) {
      const int mid = n - hi - lo;
      total += std::exp(log_nf - std::lgamma(hi + 1.0) - std::lgamma(lo + 1.0) -
                        std::lgamma(mid + 1.0) + (hi + lo) * log_p + mid * log_mid);
    }
  }
  return total;
}

McReport mc_order_statistics_event(int sample_size, std::int64_t trials, std::uint64_t seed) {
  require_quartered(sample_size, "mc_order_statistics_event");
  require_trials(trials, "mc_order_statistics_event");
  const int n = sample_size;
  const auto upper_pos = static_cast<std::size_t>(3 * n / 4);  // (3N/4 + 1)-th smallest
  const auto lower_pos = static_cast<std::size_t>(n / 4 - 1);  // (N/4)-th smallest
  std::vector<double> x(static_cast<std::size_t>(n));
  std::int64_t hits = 0;
  for (std::int64_t i = 0; i < trials; ++i) {
    Rng rng = make_rng(seed, static_cast<std::uint64_t>(i));
    std::normal_distribution<double> normal(0.0, 1.0);
    for (double& v : x) v = normal(rng);
    std::sort(x.begin(), x.end());
    if (x[upper_pos] >= 2.0 && x[lower_pos] <= -2.0) ++hits;
  }
  McReport r = make_report("order_statistics", BoundKind::Lower, trials, hits,
                           order_statistics_bound(n));
  const double p_exact = upper_tail_at_two();
  const double kl_bound = kl_binary(0.25, core::kBoundP);
  const double kl_exact = kl_binary(0.25, p_exact);
  r.details = {
      {"N", n},
      {"p_bound", core::kBoundP},
      {"p_exact", p_exact},
      {"kl_bound", kl_bound},
      {"kl_exact", kl_exact},
      {"bound_with_exact_p", 1.0 - 2.0 * std::exp(-n * kl_exact)},
      {"exact_event_probability", order_statistics_event_probability(n, p_exact)},
      {"chernoff_upper_tail", std::exp(-n * kl_exact)},
  };
  return r;
}

McReport mc_vector_norm_bound(int dim, double delta, std::int64_t trials, std::uint64_t seed) {
  if (dim < 1) throw DomainError("mc_vector_norm_bound: dim must be >= 1");
  if (!(delta > 0.0 && delta < 1.0)) throw DomainError("mc_vector_norm_bound: delta in (0,1)");
  require_trials(trials, "mc_vector_norm_bound");
  const double threshold = 2.0 * dim + 3.0 * std::log(1.0 / delta);
  std::int64_t violations = 0;
  for (std::int64_t i = 0; i < trials; ++i) {
    Rng rng = make_rng(seed, static_cast<std::uint64_t>(i));
    std::normal_distribution<double> normal(0.0, 1.0);
    double sq = 0.0;
    for (int j = 0; j < dim; ++j) {
      const double v = normal(rng);
      sq += v * v;
    }
    if (sq > threshold) ++violations;
  }
  McReport r = make_report("vector_norm", BoundKind::Upper, trials, violations, delta);
  r.details = {{"d", dim},
               {"delta", delta},
               {"threshold", threshold},
               {"exact_violation_probability", chi_square_sf(dim, threshold)}};
  return r;
}

McReport mc_direction_norm_bound(int sample_size, int dim, double delta, std::int64_t trials,
                                 std::uint64_t seed) {
  require_quartered(sample_size, "mc_direction_norm_bound");
  require_trials(trials, "mc_direction_norm_bound");
  const double c = core::c_d_delta(dim, delta);
  const double threshold = 8.0 * c / sample_size;
  oracle::Ranking identity;
  identity.order.resize(static_cast<std::size_t>(sample_size));
  std::iota(identity.order.begin(), identity.order.end(), std::size_t{0});

  std::int64_t violations = 0;
  MeanAccumulator acc;
  for (std::int64_t i = 0; i < trials; ++i) {
    Rng rng = make_rng(seed, static_cast<std::uint64_t>(i));
    const core::DirectionSet dirs = core::sample_directions(rng, sample_size, dim);
    const double sq = core::build_descent_direction(dirs, identity).vector.squaredNorm();
    acc.add(sq);
    if (sq > threshold) ++violations;
  }
  McReport r = make_report("direction_norm", BoundKind::Upper, trials, violations, delta);
  // ||d_t||^2 = (8/N) chi^2_d, so the violation probability is Pr(chi^2_d > C).
  r.details = {{"N", sample_size},
               {"d", dim},
               {"delta", delta},
               {"threshold", threshold},
               {"mean_sq_norm", acc.mean()},
               {"mean_sq_norm_se", acc.standard_error()},
               {"reference_mean", 8.0 * dim / sample_size},
               {"exact_violation_probability", chi_square_sf(dim, c)}};
  return r;
}

ScalarGaussianReport mc_scalar_gaussian_bounds(double tau, int sample_size, double delta,
                                               std::int64_t trials, std::uint64_t seed) {
  if (!(tau > 0.0)) throw DomainError("mc_scalar_gaussian_bounds: tau must be > 0");
  if (sample_size < 1) throw DomainError("mc_scalar_gaussian_bounds: N must be >= 1");
  if (!(delta > 0.0 && delta < 1.0)) throw DomainError("mc_scalar_gaussian_bounds: delta in (0,1)");
  require_trials(trials, "mc_scalar_gaussian_bounds");

  const double max_threshold = std::sqrt(2.0 * std::log(2.0 * sample_size / delta));
  const std::uint64_t max_seed = mix_seed(seed, 0xABCDEFULL);
  std::int64_t tail_hits = 0;
  std::int64_t max_hits = 0;
  for (std::int64_t i = 0; i < trials; ++i) {
    Rng rng = make_rng(seed, static_cast<std::uint64_t>(i));
    std::normal_distribution<double> normal(0.0, 1.0);
    if (std::abs(normal(rng)) > tau) ++tail_hits;

    Rng rng_max = make_rng(max_seed, static_cast<std::uint64_t>(i));
    std::normal_distribution<double> normal_max(0.0, 1.0);
    double m = 0.0;
    for (int j = 0; j < sample_size; ++j) m = std::max(m, std::abs(normal_max(rng_max)));
    if (m > max_threshold) ++max_hits;
  }
  ScalarGaussianReport out;
  out.tail = make_report("gaussian_tail", BoundKind::Upper, trials, tail_hits,
                         2.0 * std::exp(-0.5 * tau * tau));
  out.tail.details = {{"tau", tau}, {"exact_probability", 2.0 * (1.0 - normal_cdf(tau))}};
  out.max_of_n = make_report("gaussian_max", BoundKind::Upper, trials, max_hits, delta);
  out.max_of_n.details = {
      {"N", sample_size},
      {"delta", delta},
      {"threshold", max_threshold},
      {"exact_probability",
       1.0 - std::pow(1.0 - 2.0 * (1.0 - normal_cdf(max_threshold)), sample_size)}};
  return out;
}

McReport mc_descent_sum_bound(int sample_size, int dim, std::int64_t trials, std::uint64_t seed,
                              std::optional<Vector> gradient) {
  require_quartered(sample_size, "mc_descent_sum_bound");
  require_trials(trials, "mc_descent_sum_bound");
  if (dim < 1) throw DomainError("mc_descent_sum_bound: dim must be >= 1");
  Vector g = gradient ? *gradient : Vector::Unit(dim, 0);
  if (g.size() != dim || !(g.norm() > 0.0)) {
    throw DomainError("mc_descent_sum_bound: gradient must be nonzero with dimension d");
  }
  const auto problem = functions::make_linear(g);
  const oracle::RankOracle rank_oracle(*problem);
  const Vector z = g / g.norm();
  const Vector center = Vector::Zero(dim);
  const functions::Noise xi = Vector::Zero(dim);
  const int q = sample_size / 4;

  oracle::QueryLedger ledger(static_cast<std::size_t>(sample_size));
  std::int64_t hits = 0;
  MeanAccumulator acc;
  for (std::int64_t i = 0; i < trials; ++i) {
    Rng rng = make_rng(seed, static_cast<std::uint64_t>(i));
    const core::DirectionSet dirs = core::sample_directions(rng, sample_size, dim);
    const oracle::Ranking ranking = rank_oracle.rank(center, dirs, 1.0, xi, ledger);
    double s = 0.0;
    for (int k = 0; k < q; ++k) {
      s += z.dot(dirs[static_cast<int>(ranking.order[static_cast<std::size_t>(k)])]);
      s -= z.dot(dirs[static_cast<int>(ranking.order[static_cast<std::size_t>(sample_size - 1 - k)])]);
    }
    acc.add(s);
    if (s <= -static_cast<double>(sample_size)) ++hits;
  }
  McReport r = make_report("descent_sum", BoundKind::Lower, trials, hits,
                           order_statistics_bound(sample_size));
  r.details = {{"N", sample_size},
               {"d", dim},
               {"mean_S", acc.mean()},
               {"mean_S_se", acc.standard_error()},
               {"threshold", -static_cast<double>(sample_size)}};
  return r;
}

std::vector<double> recursion_sequence(std::span<const double> rhos, std::span<const double> betas,
                                       double delta1) {
  if (rhos.size() != betas.size()) {
    throw DomainError("recursion: rho and beta sequences must have equal length");
  }
  std::vector<double> delta(rhos.size() + 1);
  delta[0] = delta1;
  for (std::size_t t = 0; t < rhos.size(); ++t) delta[t + 1] = rhos[t] * delta[t] + betas[t];
  return delta;
}

bool check_recursion_unroll(std::span<const double> rhos, std::span<const double> betas,
                            double delta1) {
  for (double r : rhos) {
    if (!(r >= 0.0)) throw DomainError("check_recursion_unroll: rho must be >= 0");
  }
  const std::vector<double> delta = recursion_sequence(rhos, betas, delta1);
  // delta[j] holds Delta_{j+1}; rhos[j], betas[j] hold rho_{j+1}, beta_{j+1}.
  const std::size_t n = rhos.size();
  for (std::size_t t = 0; t < n; ++t) {
    for (std::size_t k = 0; k <= t; ++k) {
      double prod = 1.0;
      for (std::size_t i = k; i <= t; ++i) prod *= rhos[i];
      double closed = prod * delta[k];
      for (std::size_t i = k; i <= t; ++i) {
        double tail = 1.0;
        for (std::size_t j = i + 1; j <= t; ++j) tail *= rhos[j];
        closed += tail * betas[i];
      }
      if (!close_relative(closed, delta[t + 1], 1e-10)) return false;
    }
  }
  return true;
}

bool check_sequence_rate(double b, double c, std::int64_t horizon, double delta2) {
  if (!(b >= 0.0) || !(c >= 0.0)) throw DomainError("check_sequence_rate: b, c must be >= 0");
  if (horizon < 2) throw DomainError("check_sequence_rate: T must be >= 2");
  const double a = 2.25 * b * b + 3.0 * c;
  if (!(delta2 >= 0.0) || delta2 > a / 2.0) {
    throw DomainError("check_sequence_rate: require 0 <= Delta_2 <= a/2");
  }
  auto within = [a](double value, std::int64_t t) {
    return value <= a / static_cast<double>(t) * (1.0 + 1e-10) + 1e-300;
  };
  double weighted = 0.0;  // sum_{i=2}^t (i-1)^2 Delta_i
  double current = delta2;
  for (std::int64_t t = 2; t <= horizon; ++t) {
    if (!within(current, t)) return false;
    const double td = static_cast<double>(t);
    weighted += (td - 1.0) * (td - 1.0) * current;
    current = b / (td * (td - 1.0)) * std::sqrt(weighted) + c / td;
  }
  return true;
}

bool check_sequence_rate(double b, double c, std::int64_t horizon) {
  return check_sequence_rate(b, c, horizon, (2.25 * b * b + 3.0 * c) / 2.0);
}

SweepResult sweep_recursion_unroll(std::int64_t cases, std::uint64_t seed) {
  SweepResult out;
  std::vector<double> rhos;
  std::vector<double> betas;
  for (std::int64_t i = 0; i < cases; ++i) {
    Rng rng = make_rng(seed, static_cast<std::uint64_t>(i));
    std::uniform_int_distribution<int> length(1, 50);
    std::uniform_real_distribution<double> rho(0.0, 2.0);
    std::uniform_real_distribution<double> beta(0.0, 1.0);
    std::uniform_real_distribution<double> start(0.0, 10.0);
    const int n = length(rng);
    rhos.resize(static_cast<std::size_t>(n));
    betas.resize(static_cast<std::size_t>(n));
    for (int t = 0; t < n; ++t) {
      rhos[static_cast<std::size_t>(t)] = rho(rng);
      betas[static_cast<std::size_t>(t)] = beta(rng);
    }
    ++out.cases;
    if (!check_recursion_unroll(rhos, betas, start(rng))) ++out.violations;
  }
  return out;
}

SweepResult sweep_sequence_rate(std::int64_t cases, std::int64_t horizon, std::uint64_t seed) {
  SweepResult out;
  for (std::int64_t i = 0; i < cases; ++i) {
    Rng rng = make_rng(seed, static_cast<std::uint64_t>(i));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double b = 5.0 * unit(rng);
    const double c = 5.0 * unit(rng);
    const double a = 2.25 * b * b + 3.0 * c;
    ++out.cases;
    if (!check_sequence_rate(b, c, horizon, 0.5 * a * unit(rng))) ++out.violations;
  }
  return out;
}

bool check_convexity_bounds(const functions::StochasticProblem& problem, int samples,
                            std::uint64_t seed) {
  if (samples < 100) throw DomainError("check_convexity_bounds: samples must be >= 100");
  if (!std::isfinite(problem.f_star())) {
    throw DomainError("check_convexity_bounds: problem has no finite optimum");
  }
  const auto& c = problem.constants();
  Rng rng = make_rng(seed);
  for (int i = 0; i < samples; ++i) {
    const Vector x = problem.sample_region_point(rng);
    const double gap = problem.value(x) - problem.f_star();
    const double g2 = problem.gradient(x).squaredNorm();
    const double slack = 1e-10 * std::max({1.0, g2, std::abs(gap)});
    auto describe = [&](const char* inequality) {
      std::ostringstream os;
      os << inequality << " fails at sample " << i << " (||x - x*|| = "
         << (x - problem.minimizer()).norm() << "): ||grad f||^2 = " << g2
         << ", f - f* = " << gap;
      return os.str();
    };
    if (g2 > 2.0 * c.L * gap + slack) {
      throw CertificationError("smoothness gradient bound", describe("||grad f||^2 <= 2L(f - f*)"));
    }
    if (c.mu && g2 < 2.0 * *c.mu * gap - slack) {
      throw CertificationError("strong convexity gradient bound",
                               describe("||grad f||^2 >= 2mu(f - f*)"));
    }
  }
  return true;
}

}  // namespace rankzo::verify
