#include "rankzo/core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rankzo/errors.hpp"
#include "rankzo/verify.hpp"

namespace rankzo::core {

namespace {

bool positive_finite(double v) { return v > 0.0 && std::isfinite(v); }

}  // namespace

void StepSchedule::validate() const {
  const bool ok = std::visit(
      [](const auto& r) {
        using R = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<R, StronglyConvex>) return positive_finite(r.mu);
        if constexpr (std::is_same_v<R, FixedHorizon>) return positive_finite(r.eta_hat);
        if constexpr (std::is_same_v<R, Constant>) return positive_finite(r.eta);
      },
      rule);
  if (!ok) throw ConfigError("step schedule: rate parameter must be positive and finite");
}

void OptimizerConfig::validate() const {
  if (dim < 1) throw ConfigError("optimizer: dim must be >= 1");
  if (sample_size < 4 || sample_size % 4 != 0) {
    throw ConfigError("optimizer: sample_size must be a positive multiple of 4, got " +
                      std::to_string(sample_size));
  }
  if (horizon < 0) throw ConfigError("optimizer: horizon must be >= 0");
  if (!positive_finite(alpha)) throw ConfigError("optimizer: alpha must be positive and finite");
  schedule.validate();
}

double c_d_delta(int d, double delta) {
  if (d < 1) throw DomainError("c_d_delta: d must be >= 1");
  if (!(delta > 0.0 && delta < 1.0)) throw DomainError("c_d_delta: delta must lie in (0, 1)");
  return d + 2.0 * std::log(1.0 / delta);
}

double smoothing_parameter(double g_lower, double L, double c) {
  if (!positive_finite(g_lower) || !positive_finite(L) || !positive_finite(c)) {
    throw DomainError("smoothing_parameter: inputs must be positive and finite");
  }
  return g_lower / (2.0 * c * L);
}

double default_delta(int sample_size, std::int64_t horizon) {
  if (sample_size < 1 || horizon < 1) {
    throw DomainError("default_delta: sample_size and horizon must be >= 1");
  }
  return 1.0 / (20.0 * sample_size * static_cast<double>(horizon));
}

int recommended_sample_size(std::int64_t horizon, double p) {
  if (horizon < 1) throw DomainError("recommended_sample_size: T must be >= 1");
  if (!(p > 0.0 && p < 0.25)) {
    throw DomainError("recommended_sample_size: p must lie in (0, 1/4)");
  }
  const double raw = std::log(40.0 * static_cast<double>(horizon)) / verify::kl_binary(0.25, p);
  const auto n = static_cast<int>(std::ceil(raw));
  return ((n + 3) / 4) * 4;
}

double fixed_horizon_eta_hat(int sample_size, std::int64_t horizon, double L, double c,
                             double f_gap1, double g_upper) {
  if (sample_size < 1 || horizon < 1 || !positive_finite(L) || !positive_finite(c) ||
      !positive_finite(f_gap1) || !positive_finite(g_upper)) {
    throw DomainError("fixed_horizon_eta_hat: inputs must be positive");
  }
  return std::sqrt(sample_size / (static_cast<double>(horizon) * L * c)) * std::sqrt(f_gap1) /
         g_upper;
}

double step_size(const StepSchedule& schedule, std::int64_t t, std::optional<double> grad_norm) {
  if (t < 1) throw DomainError("step_size: t must be >= 1");
  double scale = 1.0;
  if (schedule.gradient_norm_scaling) {
    if (!grad_norm) {
      throw ConfigError("step_size: gradient-norm scaling requires a stochastic gradient norm");
    }
    if (!positive_finite(*grad_norm)) {
      throw DomainError("step_size: gradient norm must be positive and finite");
    }
    scale = *grad_norm;
  }
  return std::visit(
      [&](const auto& r) -> double {
        using R = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<R, StronglyConvex>) {
          return scale / (2.0 * r.mu * static_cast<double>(t));
        } else if constexpr (std::is_same_v<R, FixedHorizon>) {
          return r.eta_hat * scale;
        } else {
          return r.eta * scale;
        }
      },
      schedule.rule);
}

DirectionSet sample_directions(Rng& rng, int sample_size, int dim, std::int64_t iteration) {
  if (sample_size < 4 || sample_size % 4 != 0) {
    throw ConfigError("sample_directions: N must be a positive multiple of 4");
  }
  if (dim < 1) throw ConfigError("sample_directions: d must be >= 1");
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix u(dim, sample_size);
  for (int j = 0; j < sample_size; ++j) {
    for (int i = 0; i < dim; ++i) u(i, j) = normal(rng);
  }
  return DirectionSet(std::move(u), iteration);
}

std::vector<double> quartile_weights(int sample_size) {
  if (sample_size < 4 || sample_size % 4 != 0) {
    throw ConfigError("quartile_weights: N must be a positive multiple of 4");
  }
  const int q = sample_size / 4;
  const double w = 4.0 / sample_size;
  std::vector<double> weights(static_cast<std::size_t>(sample_size), 0.0);
  for (int k = 0; k < q; ++k) {
    weights[static_cast<std::size_t>(k)] = w;
    weights[static_cast<std::size_t>(sample_size - 1 - k)] = -w;
  }
  return weights;
}

DescentDirection build_descent_direction(const DirectionSet& dirs, const oracle::Ranking& ranking) {
  const int n = dirs.size();
  if (n % 4 != 0) throw IntegrityError("descent direction: N must be a multiple of 4");
  if (!oracle::is_permutation(ranking.order, static_cast<std::size_t>(n))) {
    throw IntegrityError("descent direction: ranking is not a permutation of the direction set");
  }
  const int q = n / 4;
  std::vector<std::size_t> best(ranking.order.begin(), ranking.order.begin() + q);
  std::vector<std::size_t> worst(ranking.order.end() - q, ranking.order.end());
  std::sort(best.begin(), best.end());
  std::sort(worst.begin(), worst.end());

  Vector plus = Vector::Zero(dirs.dim());
  Vector minus = Vector::Zero(dirs.dim());
  for (std::size_t i : best) plus += dirs[static_cast<int>(i)];
  for (std::size_t i : worst) minus += dirs[static_cast<int>(i)];
  return DescentDirection{(4.0 / n) * (plus - minus)};
}

RunTrace run(const functions::StochasticProblem& problem, const OptimizerConfig& config,
             const Vector& x1, const oracle::ValueTransform& transform) {
  config.validate();
  if (config.dim != problem.dim()) {
    throw ConfigError("run: config dim " + std::to_string(config.dim) +
                      " does not match problem dim " + std::to_string(problem.dim()));
  }
  if (x1.size() != problem.dim() || !x1.allFinite()) {
    throw ConfigError("run: x1 must be finite with the problem's dimension");
  }

  RunTrace trace;
  trace.records.reserve(static_cast<std::size_t>(config.horizon));
  Rng rng = make_rng(config.seed);
  oracle::RankOracle rank_oracle(problem, transform);
  oracle::QueryLedger ledger(static_cast<std::size_t>(config.sample_size));
  Vector x = x1;

  for (std::int64_t t = 1; t <= config.horizon; ++t) {
    const functions::Noise xi = problem.sample_noise(rng);
    const DirectionSet dirs = sample_directions(rng, config.sample_size, config.dim, t);
    try {
      const oracle::Ranking ranking = rank_oracle.rank(x, dirs, config.alpha, xi, ledger);
      const DescentDirection d = build_descent_direction(dirs, ranking);
      std::optional<double> grad_norm;
      if (config.schedule.gradient_norm_scaling) grad_norm = problem.gradient(x, xi).norm();
      const double eta = step_size(config.schedule, t, grad_norm);

      IterationRecord rec;
      rec.t = t;
      rec.f_gap = problem.value(x) - problem.f_star();
      rec.grad_sq = problem.gradient(x).squaredNorm();
      rec.queries = ledger.total_evaluations();
      rec.eta = eta;
      if (!problem.in_region(x)) ++trace.region_exits;
      trace.records.push_back(rec);

      x += eta * d.vector;
      if (!x.allFinite()) {
        trace.abort_reason = "iterate became non-finite at t=" + std::to_string(t);
        break;
      }
    } catch (const Error& e) {
      std::ostringstream os;
      os << "t=" << t << ": " << e.what();
      trace.abort_reason = os.str();
      break;
    }
  }
  trace.final_point = x;
  trace.ledger_total = ledger.total_evaluations();
  return trace;
}

}  // namespace rankzo::core
