#include "rankzo/bench.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rankzo/errors.hpp"
#include "rankzo/verify.hpp"

namespace rankzo::bench {

namespace {

double quantile_sorted(const std::vector<double>& sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

double initial_criterion(const functions::StochasticProblem& p, const Vector& x1, Mode mode) {
  return mode == Mode::StronglyConvexGap ? p.value(x1) - p.f_star() : p.gradient(x1).squaredNorm();
}

ExperimentResult collect(std::string method, std::vector<SeedRun> runs, Mode mode,
                         std::optional<double> epsilon, int queries_per_iteration,
                         std::int64_t horizon) {
  ExperimentResult result;
  result.method = std::move(method);
  result.summary = summarize(runs, mode, epsilon, queries_per_iteration, horizon);
  result.runs = std::move(runs);
  return result;
}

}  // namespace

std::string to_string(Mode mode) {
  return mode == Mode::StronglyConvexGap ? "strongly_convex_gap" : "nonconvex_stationarity";
}

Mode mode_from_string(const std::string& name) {
  if (name == "strongly_convex_gap") return Mode::StronglyConvexGap;
  if (name == "nonconvex_stationarity") return Mode::NonconvexStationarity;
  throw ConfigError("unknown mode '" + name + "'");
}

std::unique_ptr<functions::StochasticProblem> ProblemSpec::build() const {
  const functions::NoiseSpec noise{noise_radius};
  try {
    if (family == "quadratic") {
      return functions::make_quadratic(dim, lambda_min, lambda_max, noise, region_radius);
    }
    if (family == "cosine") {
      return functions::make_nonconvex_cosine(dim, cosine_a, noise, region_radius);
    }
  } catch (const DomainError& e) {
    throw ConfigError(std::string("problem: ") + e.what());
  }
  throw ConfigError("unknown problem family '" + family + "'");
}

void ExperimentSpec::validate() const {
  if (seeds.empty()) throw ConfigError("experiment: seed list must be nonempty");
  if (target_epsilon && !(*target_epsilon > 0.0)) {
    throw ConfigError("experiment: target_epsilon must be > 0");
  }
  if (target_epsilon_relative && !(*target_epsilon_relative > 0.0)) {
    throw ConfigError("experiment: target_epsilon_relative must be > 0");
  }
  if (target_epsilon && target_epsilon_relative) {
    throw ConfigError("experiment: give target_epsilon or target_epsilon_relative, not both");
  }
  if (horizon < 0) throw ConfigError("experiment: horizon must be >= 0");
  if (baseline_horizon && *baseline_horizon < 0) {
    throw ConfigError("experiment: baseline_horizon must be >= 0");
  }
}

PreparedExperiment prepare(const ExperimentSpec& spec) {
  spec.validate();
  PreparedExperiment out;
  out.problem = spec.problem.build();
  const auto& p = *out.problem;
  const auto& constants = p.constants();
  const int d = p.dim();

  out.x1 = spec.x1_fill ? Vector::Constant(d, *spec.x1_fill)
                        : Vector(p.minimizer() + Vector::Constant(d, spec.x1_distance / std::sqrt(d)));
  out.delta = spec.delta ? *spec.delta
                         : core::default_delta(std::max(spec.sample_size, 1),
                                               std::max<std::int64_t>(spec.horizon, 1));
  try {
    out.c_d_delta = core::c_d_delta(d, out.delta);
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }

  core::OptimizerConfig& cfg = out.config;
  cfg.dim = d;
  cfg.sample_size = spec.sample_size;
  cfg.horizon = spec.horizon;
  if (spec.alpha) {
    cfg.alpha = *spec.alpha;
  } else if (constants.g_lower) {
    cfg.alpha = core::smoothing_parameter(*constants.g_lower, constants.L, out.c_d_delta);
  } else {
    throw ConfigError("experiment: alpha must be given for a problem without a gradient lower bound");
  }

  cfg.schedule.gradient_norm_scaling = spec.gradient_norm_scaling;
  switch (spec.schedule) {
    case ScheduleKind::StronglyConvex: {
      const std::optional<double> mu = spec.mu ? spec.mu : constants.mu;
      if (!mu) throw ConfigError("experiment: strongly convex schedule needs mu");
      cfg.schedule.rule = core::StronglyConvex{*mu};
      break;
    }
    case ScheduleKind::FixedHorizon: {
      double eta_hat = 0.0;
      if (spec.eta_hat) {
        eta_hat = *spec.eta_hat;
      } else {
        const double gap = p.value(out.x1) - p.f_star();
        if (spec.horizon < 1 || !(gap > 0.0)) {
          throw ConfigError("experiment: automatic eta_hat needs T >= 1 and f(x1) > f*");
        }
        eta_hat = core::fixed_horizon_eta_hat(spec.sample_size, spec.horizon, constants.L,
                                              out.c_d_delta, gap, constants.g_upper);
      }
      cfg.schedule.rule = core::FixedHorizon{eta_hat};
      break;
    }
    case ScheduleKind::Constant:
      cfg.schedule.rule = core::Constant{spec.eta};
      break;
  }
  cfg.validate();

  out.initial_criterion = initial_criterion(p, out.x1, spec.mode);
  if (spec.target_epsilon) out.epsilon = spec.target_epsilon;
  if (spec.target_epsilon_relative) out.epsilon = *spec.target_epsilon_relative * out.initial_criterion;
  return out;
}

std::vector<double> criterion_series(const core::RunTrace& trace, Mode mode) {
  std::vector<double> out;
  out.reserve(trace.records.size());
  double running = 0.0;
  for (const auto& rec : trace.records) {
    if (mode == Mode::StronglyConvexGap) {
      out.push_back(rec.f_gap);
    } else {
      running += rec.grad_sq;
      out.push_back(running / static_cast<double>(rec.t));
    }
  }
  return out;
}

Summary summarize(const std::vector<SeedRun>& runs, Mode mode, std::optional<double> epsilon,
                  int sample_size, std::int64_t horizon) {
  Summary s;
  s.mode = mode;
  s.sample_size = sample_size;
  s.horizon = horizon;
  s.epsilon = epsilon;

  std::vector<const SeedRun*> ok;
  for (const auto& r : runs) {
    if (r.trace.ok()) {
      ok.push_back(&r);
    } else {
      ++s.failed_runs;
    }
  }
  std::sort(ok.begin(), ok.end(),
            [](const SeedRun* a, const SeedRun* b) { return a->run_id < b->run_id; });
  s.successful_runs = ok.size();
  if (ok.empty()) return s;

  std::vector<std::vector<double>> series;
  series.reserve(ok.size());
  std::size_t length = std::numeric_limits<std::size_t>::max();
  for (const SeedRun* r : ok) {
    series.push_back(criterion_series(r->trace, mode));
    length = std::min(length, series.back().size());
  }

  std::vector<double> column(ok.size());
  s.rows.reserve(length);
  for (std::size_t i = 0; i < length; ++i) {
    for (std::size_t j = 0; j < ok.size(); ++j) column[j] = series[j][i];
    std::sort(column.begin(), column.end());
    SummaryRow row;
    row.t = ok.front()->trace.records[i].t;
    row.queries = ok.front()->trace.records[i].queries;
    row.median = quantile_sorted(column, 0.5);
    row.q1 = quantile_sorted(column, 0.25);
    row.q3 = quantile_sorted(column, 0.75);
    if (epsilon && !s.queries_to_target && row.median <= *epsilon) {
      s.queries_to_target = row.queries;
      s.iterations_to_target = row.t;
    }
    s.rows.push_back(row);
  }
  return s;
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
  PreparedExperiment prep = prepare(spec);
  std::vector<SeedRun> runs;
  runs.reserve(spec.seeds.size());
  for (std::size_t i = 0; i < spec.seeds.size(); ++i) {
    core::OptimizerConfig cfg = prep.config;
    cfg.seed = spec.seeds[i];
    SeedRun r;
    r.run_id = i;
    r.seed = spec.seeds[i];
    r.trace = core::run(*prep.problem, cfg, prep.x1);
    runs.push_back(std::move(r));
  }
  ExperimentResult result =
      collect("rank", std::move(runs), spec.mode, prep.epsilon, spec.sample_size, spec.horizon);
  result.alpha = prep.config.alpha;
  result.c_d_delta = prep.c_d_delta;
  result.delta = prep.delta;
  result.initial_criterion = prep.initial_criterion;
  return result;
}

double BaselineSchedule::at(std::int64_t t) const {
  if (mu) return eta0 / (1.0 + 0.5 * eta0 * *mu * static_cast<double>(t));
  return eta0;
}

core::RunTrace baseline_two_point_zo(const functions::StochasticProblem& problem,
                                     const BaselineConfig& config, const Vector& x1) {
  if (config.dim != problem.dim() || x1.size() != problem.dim() || !x1.allFinite()) {
    throw ConfigError("baseline: dimension mismatch or non-finite x1");
  }
  if (!(config.alpha > 0.0) || !(config.schedule.eta0 > 0.0) || config.horizon < 0) {
    throw ConfigError("baseline: alpha and eta0 must be > 0, horizon >= 0");
  }
  core::RunTrace trace;
  trace.records.reserve(static_cast<std::size_t>(config.horizon));
  Rng rng = make_rng(config.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  oracle::QueryLedger ledger(2);
  Vector x = x1;
  Vector u(problem.dim());

  for (std::int64_t t = 1; t <= config.horizon; ++t) {
    const functions::Noise xi = problem.sample_noise(rng);
    for (int i = 0; i < u.size(); ++i) u[i] = normal(rng);
    const double f_shift = problem.value(x + config.alpha * u, xi);
    const double f_here = problem.value(x, xi);
    ledger.record(2);
    if (!std::isfinite(f_shift) || !std::isfinite(f_here)) {
      trace.abort_reason = "t=" + std::to_string(t) + ": non-finite function value";
      break;
    }
    const double eta = config.schedule.at(t);
    core::IterationRecord rec;
    rec.t = t;
    rec.f_gap = problem.value(x) - problem.f_star();
    rec.grad_sq = problem.gradient(x).squaredNorm();
    rec.queries = ledger.total_evaluations();
    rec.eta = eta;
    if (!problem.in_region(x)) ++trace.region_exits;
    trace.records.push_back(rec);

    x -= eta * ((f_shift - f_here) / config.alpha) * u;
    if (!x.allFinite()) {
      trace.abort_reason = "iterate became non-finite at t=" + std::to_string(t);
      break;
    }
  }
  trace.final_point = x;
  trace.ledger_total = ledger.total_evaluations();
  return trace;
}

std::vector<double> baseline_step_grid(const functions::StochasticProblem& problem) {
  const double base = 1.0 / (problem.constants().L * (problem.dim() + 2.0));
  return {base / 9.0, base / 3.0, base, base * 3.0, base * 9.0};
}

BaselineResult run_baseline_experiment(const ExperimentSpec& spec) {
  PreparedExperiment prep = prepare(spec);
  const auto& p = *prep.problem;
  BaselineConfig cfg;
  cfg.dim = p.dim();
  cfg.horizon = spec.baseline_horizon
                    ? *spec.baseline_horizon
                    : static_cast<std::int64_t>(spec.sample_size) * spec.horizon / 2;
  cfg.alpha = spec.baseline_alpha ? *spec.baseline_alpha : prep.config.alpha;
  if (spec.mode == Mode::StronglyConvexGap) {
    cfg.schedule.mu = spec.mu ? spec.mu : p.constants().mu;
  }

  BaselineResult best;
  double best_score = std::numeric_limits<double>::infinity();
  bool have_best = false;
  for (double eta0 : baseline_step_grid(p)) {
    cfg.schedule.eta0 = eta0;
    std::vector<SeedRun> runs;
    for (std::size_t i = 0; i < spec.seeds.size(); ++i) {
      BaselineConfig c = cfg;
      c.seed = spec.seeds[i];
      runs.push_back(SeedRun{i, spec.seeds[i], baseline_two_point_zo(p, c, prep.x1)});
    }
    ExperimentResult r = collect("two_point", std::move(runs), spec.mode, prep.epsilon, 2, cfg.horizon);
    double score = std::numeric_limits<double>::infinity();
    if (r.summary.failed_runs == 0 && !r.summary.rows.empty()) score = r.summary.rows.back().median;
    if (cfg.horizon == 0 && r.summary.failed_runs == 0) score = 0.0;
    best.grid_scores.emplace_back(eta0, score);
    if (!have_best || score < best_score) {
      have_best = true;
      best_score = score;
      best.chosen_eta0 = eta0;
      best.experiment = std::move(r);
    }
  }
  best.experiment.alpha = cfg.alpha;
  best.experiment.c_d_delta = prep.c_d_delta;
  best.experiment.delta = prep.delta;
  best.experiment.initial_criterion = prep.initial_criterion;
  return best;
}

bool check_accounting(const ExperimentResult& result, int per_iteration, std::int64_t horizon) {
  const auto per = static_cast<std::uint64_t>(per_iteration);
  for (const auto& run : result.runs) {
    if (!run.trace.ok()) continue;
    if (run.trace.records.size() != static_cast<std::size_t>(horizon)) return false;
    if (run.trace.ledger_total != per * static_cast<std::uint64_t>(horizon)) return false;
    for (const auto& rec : run.trace.records) {
      if (rec.queries != per * static_cast<std::uint64_t>(rec.t)) return false;
    }
  }
  return true;
}

SweepAxis sweep_axis_from_string(const std::string& name) {
  if (name == "dim") return SweepAxis::Dim;
  if (name == "epsilon") return SweepAxis::Epsilon;
  if (name == "horizon") return SweepAxis::Horizon;
  throw ConfigError("unknown sweep '" + name + "'");
}

std::string to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::Dim: return "dim";
    case SweepAxis::Epsilon: return "epsilon";
    case SweepAxis::Horizon: return "horizon";
  }
  return "dim";
}

ScalingStudy run_scaling(const ExperimentSpec& spec, SweepAxis axis, const std::vector<double>& values) {
  if (values.empty()) throw ConfigError("scaling: no sweep values");
  ScalingStudy study;
  study.axis = axis;
  for (double v : values) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError("scaling: sweep values must be positive");
    ExperimentSpec s = spec;
    switch (axis) {
      case SweepAxis::Dim:
        if (v != std::floor(v)) throw ConfigError("scaling: dimensions must be integers");
        s.problem.dim = static_cast<int>(v);
        break;
      case SweepAxis::Epsilon:
        if (s.target_epsilon_relative) {
          s.target_epsilon_relative = v;
        } else {
          s.target_epsilon = v;
        }
        break;
      case SweepAxis::Horizon:
        if (v != std::floor(v)) throw ConfigError("scaling: horizons must be integers");
        s.horizon = static_cast<std::int64_t>(v);
        break;
    }
    SweepPoint point;
    point.value = v;
    point.result = run_experiment(s);
    const Summary& sum = point.result.summary;
    if (axis == SweepAxis::Horizon) {
      if (!sum.rows.empty()) point.response = sum.rows.back().median;
    } else if (sum.queries_to_target) {
      point.response = static_cast<double>(*sum.queries_to_target);
    }
    study.points.push_back(std::move(point));
  }

  std::vector<std::pair<double, double>> xy;
  for (const auto& p : study.points) {
    if (!p.response) {
      study.error = "no response at " + to_string(axis) + " = " + std::to_string(p.value) +
                    (axis == SweepAxis::Horizon ? " (no successful run)" : " (target not reached)");
      return study;
    }
    xy.emplace_back(p.value, *p.response);
  }
  try {
    study.fit = fit_loglog_slope(xy);
  } catch (const DomainError& e) {
    study.error = e.what();
  }
  return study;
}

ScalingFit fit_loglog_slope(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 3) throw DomainError("fit_loglog_slope: need at least 3 points");
  ScalingFit fit;
  for (const auto& [x, y] : points) {
    if (!(x > 0.0) || !(y > 0.0) || !std::isfinite(x) || !std::isfinite(y)) {
      throw DomainError("fit_loglog_slope: all coordinates must be positive and finite");
    }
    fit.points.emplace_back(std::log(x), std::log(y));
  }
  const double n = static_cast<double>(fit.points.size());
  double mx = 0.0;
  double my = 0.0;
  for (const auto& [lx, ly] : fit.points) {
    mx += lx;
    my += ly;
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (const auto& [lx, ly] : fit.points) {
    sxx += (lx - mx) * (lx - mx);
    sxy += (lx - mx) * (ly - my);
    syy += (ly - my) * (ly - my);
  }
  if (!(sxx > 0.0)) throw DomainError("fit_loglog_slope: x values must not all coincide");
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0.0;
  for (const auto& [lx, ly] : fit.points) {
    const double r = ly - (fit.intercept + fit.slope * lx);
    ss_res += r * r;
  }
  fit.r_squared = syy > 0.0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;
  return fit;
}

double predicted_query_bounds(Mode mode, const QueryBoundInputs& in) {
  auto positive = [](double v) { return v > 0.0 && std::isfinite(v); };
  if (in.dim < 1 || !positive(in.L) || !positive(in.g_upper) || !positive(in.epsilon) ||
      !positive(in.f_gap1)) {
    throw DomainError("predicted_query_bounds: all constants must be positive");
  }
  const double d = in.dim;
  const double g2 = in.g_upper * in.g_upper;
  if (mode == Mode::StronglyConvexGap) {
    if (!in.mu || !positive(*in.mu)) {
      throw DomainError("predicted_query_bounds: strongly convex bound needs mu > 0");
    }
    const double mu2 = *in.mu * *in.mu;
    const double lead = 750.0 * d * in.L * g2 / (mu2 * in.epsilon);
    const double inner = std::max(75.0 * d * in.L * g2 / (mu2 * in.epsilon), in.f_gap1);
    return lead + 10.0 * in.f_gap1 * std::log(inner) / (verify::kl_binary(0.25, in.p) * in.epsilon);
  }
  return 3.0 * 180.0 * 180.0 * in.f_gap1 * d * in.L * g2 / (in.epsilon * in.epsilon) +
         320.0 * d * g2 / in.epsilon;
}

}  // namespace rankzo::bench
