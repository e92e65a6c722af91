// rankzo: run experiments, Monte Carlo checks, scaling sweeps and the
// baseline comparison. Exit status 0 on success, 1 when a check fails,
// 2 on a configuration or I/O error.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "rankzo/bench.hpp"
#include "rankzo/config.hpp"
#include "rankzo/errors.hpp"
#include "rankzo/report.hpp"
#include "rankzo/verify.hpp"

namespace {

using namespace rankzo;
using nlohmann::json;

constexpr int kOk = 0;
constexpr int kCheckFailed = 1;
constexpr int kConfigError = 2;

const std::vector<std::string> kChecks = {"order_statistics", "vector_norm",     "direction_norm",
                                          "scalar_gaussian",  "descent_sum",     "recursion_unroll",
                                          "sequence_rate"};

struct VerifyOptions {
  std::optional<std::string> check;
  std::int64_t trials = 10000;
  std::uint64_t seed = 1;
  std::string out;
  std::optional<int> sample_size;
  std::optional<int> dim;
  std::optional<double> delta;
  double tau = 2.0;
  std::int64_t horizon = 1000;
};

verify::McReport count_report(const std::string& name, const verify::SweepResult& r) {
  verify::McReport rep = verify::make_report(name, verify::BoundKind::Upper, r.cases, r.violations, 0.0);
  rep.pass = r.violations == 0;
  return rep;
}

std::vector<verify::McReport> run_check(const std::string& name, const VerifyOptions& o) {
  const double delta = o.delta.value_or(0.05);
  if (name == "order_statistics") {
    return {verify::mc_order_statistics_event(o.sample_size.value_or(64), o.trials, o.seed)};
  }
  if (name == "vector_norm") {
    return {verify::mc_vector_norm_bound(o.dim.value_or(50), delta, o.trials, o.seed)};
  }
  if (name == "direction_norm") {
    return {verify::mc_direction_norm_bound(o.sample_size.value_or(32), o.dim.value_or(20), delta,
                                            o.trials, o.seed)};
  }
  if (name == "scalar_gaussian") {
    auto r = verify::mc_scalar_gaussian_bounds(o.tau, o.sample_size.value_or(32), delta, o.trials, o.seed);
    return {r.tail, r.max_of_n};
  }
  if (name == "descent_sum") {
    return {verify::mc_descent_sum_bound(o.sample_size.value_or(64), o.dim.value_or(50), o.trials, o.seed)};
  }
  if (name == "recursion_unroll") {
    return {count_report(name, verify::sweep_recursion_unroll(o.trials, o.seed))};
  }
  if (name == "sequence_rate") {
    return {count_report(name, verify::sweep_sequence_rate(o.trials, o.horizon, o.seed))};
  }
  throw ConfigError("unknown check '" + name + "'");
}

int cmd_verify(const VerifyOptions& o) {
  if (o.trials < 1) throw ConfigError("--trials must be >= 1");
  std::vector<verify::McReport> reports;
  const std::vector<std::string> names = o.check ? std::vector<std::string>{*o.check} : kChecks;
  for (const auto& n : names) {
    for (auto& r : run_check(n, o)) reports.push_back(std::move(r));
  }
  report::write_text(o.out, report::reports_json(reports));
  bool all = true;
  for (const auto& r : reports) {
    std::cout << (r.pass ? "PASS " : "FAIL ") << r.check << " freq=" << report::format_double(r.empirical_freq)
              << " bound=" << report::format_double(r.theoretical_bound) << '\n';
    all = all && r.pass;
  }
  return all ? kOk : kCheckFailed;
}

int cmd_run(const std::string& config_path, const std::string& out, std::uint64_t seed_offset) {
  bench::ExperimentSpec spec = config::load_spec(config_path);
  for (auto& s : spec.seeds) s += seed_offset;
  const bench::ExperimentResult result = bench::run_experiment(spec);
  report::emit_report(result, out, "rank");
  const bool accounted = bench::check_accounting(result, spec.sample_size, spec.horizon);
  std::cout << "runs ok=" << result.summary.successful_runs << " failed=" << result.summary.failed_runs;
  if (result.summary.queries_to_target) std::cout << " queries_to_target=" << *result.summary.queries_to_target;
  std::cout << (accounted ? "" : " ACCOUNTING MISMATCH") << '\n';
  return accounted ? kOk : kCheckFailed;
}

std::vector<double> parse_values(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError("--values: cannot parse '" + item + "'");
    }
  }
  return out;
}

int cmd_scaling(const std::string& config_path, const std::string& sweep, const std::string& values,
                const std::string& out, std::optional<double> slope_min, std::optional<double> slope_max) {
  const bench::ExperimentSpec spec = config::load_spec(config_path);
  const bench::SweepAxis axis = bench::sweep_axis_from_string(sweep);
  const bench::ScalingStudy study = bench::run_scaling(spec, axis, parse_values(values));

  std::filesystem::create_directories(out);
  json j;
  j["sweep"] = bench::to_string(axis);
  json pts = json::array();
  bool accounted = true;
  for (const auto& p : study.points) {
    const std::string label = bench::to_string(axis) + "_" + report::format_double(p.value);
    report::emit_report(p.result, out, label);
    accounted = accounted && bench::check_accounting(p.result, p.result.summary.sample_size,
                                                     p.result.summary.horizon);
    pts.push_back({{"value", p.value}, {"response", p.response ? json(*p.response) : json(nullptr)}});
  }
  j["points"] = pts;
  bool in_range = true;
  if (study.fit) {
    j["slope"] = study.fit->slope;
    j["intercept"] = study.fit->intercept;
    j["r_squared"] = study.fit->r_squared;
    if (slope_min && study.fit->slope < *slope_min) in_range = false;
    if (slope_max && study.fit->slope > *slope_max) in_range = false;
    std::cout << "slope=" << report::format_double(study.fit->slope)
              << " r2=" << report::format_double(study.fit->r_squared) << '\n';
  } else {
    j["error"] = study.error.value_or("no fit");
    std::cout << "no fit: " << study.error.value_or("") << '\n';
  }
  j["accounting_ok"] = accounted;
  report::write_text((std::filesystem::path(out) / "scaling.json").string(), j.dump(2));
  return study.fit && in_range && accounted ? kOk : kCheckFailed;
}

int cmd_compare(const std::string& config_path, const std::string& out) {
  const bench::ExperimentSpec spec = config::load_spec(config_path);
  const bench::ExperimentResult rank = bench::run_experiment(spec);
  const bench::BaselineResult base = bench::run_baseline_experiment(spec);
  report::emit_report(rank, out, "rank");
  report::emit_report(base.experiment, out, "baseline");

  const bool rank_ok = bench::check_accounting(rank, spec.sample_size, spec.horizon);
  const bool base_ok = bench::check_accounting(base.experiment, 2, base.experiment.summary.horizon);
  const auto& rq = rank.summary.queries_to_target;
  const auto& bq = base.experiment.summary.queries_to_target;

  json j;
  j["rank_queries_to_target"] = rq ? json(*rq) : json(nullptr);
  j["baseline_queries_to_target"] = bq ? json(*bq) : json(nullptr);
  j["query_ratio"] = rq && bq ? json(static_cast<double>(*rq) / static_cast<double>(*bq)) : json(nullptr);
  j["baseline_eta0"] = base.chosen_eta0;
  json grid = json::array();
  for (const auto& [eta, score] : base.grid_scores) grid.push_back({{"eta0", eta}, {"final_median", report::format_double(score)}});
  j["baseline_grid"] = grid;
  j["accounting_ok"] = rank_ok && base_ok;
  report::write_text((std::filesystem::path(out) / "compare.json").string(), j.dump(2));

  std::cout << "rank queries=" << (rq ? std::to_string(*rq) : "none")
            << " baseline queries=" << (bq ? std::to_string(*bq) : "none") << '\n';
  const bool targets = !rank.summary.epsilon || (rq && bq);
  return rank_ok && base_ok && targets ? kOk : kCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rank-based zeroth-order optimization experiments"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out;
  std::uint64_t seed_offset = 0;
  auto* run = app.add_subcommand("run", "Run one experiment over its seed list");
  run->add_option("--config", config_path, "Experiment JSON")->required();
  run->add_option("--out", out, "Output directory")->required();
  run->add_option("--seed-offset", seed_offset, "Added to every seed");

  VerifyOptions vo;
  auto* ver = app.add_subcommand("verify", "Monte Carlo and recursion checks");
  ver->add_option("--check", vo.check, "One check; default runs all")->check(CLI::IsMember(kChecks));
  ver->add_option("--trials", vo.trials, "Trials (or random cases)")->required();
  ver->add_option("--seed", vo.seed, "Seed")->required();
  ver->add_option("--out", vo.out, "JSON report file")->required();
  ver->add_option("--sample-size", vo.sample_size, "N");
  ver->add_option("--dim", vo.dim, "d");
  ver->add_option("--delta", vo.delta, "delta");
  ver->add_option("--tau", vo.tau, "Scalar tail threshold");
  ver->add_option("--horizon", vo.horizon, "Length of the sequence-rate check");

  std::string sweep;
  std::string values;
  std::optional<double> slope_min;
  std::optional<double> slope_max;
  auto* sc = app.add_subcommand("scaling", "Sweep one parameter and fit a log-log slope");
  sc->add_option("--config", config_path, "Experiment JSON")->required();
  sc->add_option("--sweep", sweep, "dim, epsilon or horizon")
      ->required()
      ->check(CLI::IsMember({"dim", "epsilon", "horizon"}));
  sc->add_option("--values", values, "Comma-separated values")->required();
  sc->add_option("--out", out, "Output directory")->required();
  sc->add_option("--slope-min", slope_min, "Fail when the slope is below");
  sc->add_option("--slope-max", slope_max, "Fail when the slope is above");

  auto* cmp = app.add_subcommand("compare", "Rank method against the two-point baseline");
  cmp->add_option("--config", config_path, "Experiment JSON")->required();
  cmp->add_option("--out", out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*run) return cmd_run(config_path, out, seed_offset);
    if (*ver) return cmd_verify(vo);
    if (*sc) return cmd_scaling(config_path, sweep, values, out, slope_min, slope_max);
    if (*cmp) return cmd_compare(config_path, out);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "io error: " << e.what() << '\n';
    return kConfigError;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kCheckFailed;
  }
  return kOk;
}
