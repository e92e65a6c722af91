#include "rankzo/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "rankzo/errors.hpp"

namespace rankzo::config {

using nlohmann::json;

namespace {

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "family",          "dim",
      "lambda_min",      "lambda_max",
      "cosine_a",        "noise_radius",
      "region_radius",   "sample_size",
      "horizon",         "alpha",
      "delta",           "schedule",
      "mu",              "eta_hat",
      "eta",             "gradient_norm_scaling",
      "seeds",           "seed_count",
      "seed_base",       "target_epsilon",
      "target_epsilon_relative", "mode",
      "x1_distance",     "x1_fill",
      "baseline_horizon", "baseline_alpha"};
  return keys;
}

template <typename T>
void read(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("config: key '") + key + "' has the wrong type");
  }
}

template <typename T>
void read(const json& j, const char* key, std::optional<T>& out) {
  if (!j.contains(key) || j.at(key).is_null()) return;
  T value{};
  read(j, key, value);
  out = value;
}

}  // namespace

std::string to_string(bench::ScheduleKind kind) {
  switch (kind) {
    case bench::ScheduleKind::StronglyConvex: return "strongly_convex";
    case bench::ScheduleKind::FixedHorizon: return "fixed_horizon";
    case bench::ScheduleKind::Constant: return "constant";
  }
  return "constant";
}

bench::ScheduleKind schedule_from_string(const std::string& name) {
  if (name == "strongly_convex") return bench::ScheduleKind::StronglyConvex;
  if (name == "fixed_horizon") return bench::ScheduleKind::FixedHorizon;
  if (name == "constant") return bench::ScheduleKind::Constant;
  throw ConfigError("unknown schedule '" + name + "'");
}

bench::ExperimentSpec parse_spec(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config: top level must be an object");
  for (const auto& item : j.items()) {
    if (!known_keys().count(item.key())) throw ConfigError("config: unknown key '" + item.key() + "'");
  }

  bench::ExperimentSpec s;
  auto& p = s.problem;
  read(j, "family", p.family);
  read(j, "dim", p.dim);
  read(j, "lambda_min", p.lambda_min);
  read(j, "lambda_max", p.lambda_max);
  read(j, "cosine_a", p.cosine_a);
  read(j, "noise_radius", p.noise_radius);
  read(j, "region_radius", p.region_radius);
  read(j, "sample_size", s.sample_size);
  read(j, "horizon", s.horizon);
  read(j, "alpha", s.alpha);
  read(j, "delta", s.delta);
  std::string schedule = to_string(s.schedule);
  read(j, "schedule", schedule);
  s.schedule = schedule_from_string(schedule);
  read(j, "mu", s.mu);
  read(j, "eta_hat", s.eta_hat);
  read(j, "eta", s.eta);
  read(j, "gradient_norm_scaling", s.gradient_norm_scaling);
  if (j.contains("seeds") && j.contains("seed_count")) {
    throw ConfigError("config: give seeds or seed_count, not both");
  }
  read(j, "seeds", s.seeds);
  if (j.contains("seed_count")) {
    std::int64_t count = 0;
    std::uint64_t base = 1;
    read(j, "seed_count", count);
    read(j, "seed_base", base);
    if (count < 1) throw ConfigError("config: seed_count must be >= 1");
    s.seeds.clear();
    for (std::int64_t i = 0; i < count; ++i) s.seeds.push_back(base + static_cast<std::uint64_t>(i));
  }
  read(j, "target_epsilon", s.target_epsilon);
  read(j, "target_epsilon_relative", s.target_epsilon_relative);
  std::string mode = bench::to_string(s.mode);
  read(j, "mode", mode);
  s.mode = bench::mode_from_string(mode);
  read(j, "x1_distance", s.x1_distance);
  read(j, "x1_fill", s.x1_fill);
  read(j, "baseline_horizon", s.baseline_horizon);
  read(j, "baseline_alpha", s.baseline_alpha);
  s.validate();
  return s;
}

bench::ExperimentSpec load_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_spec(buf.str());
}

std::string dump_spec(const bench::ExperimentSpec& s) {
  json j;
  j["family"] = s.problem.family;
  j["dim"] = s.problem.dim;
  j["lambda_min"] = s.problem.lambda_min;
  j["lambda_max"] = s.problem.lambda_max;
  j["cosine_a"] = s.problem.cosine_a;
  j["noise_radius"] = s.problem.noise_radius;
  j["region_radius"] = s.problem.region_radius;
  j["sample_size"] = s.sample_size;
  j["horizon"] = s.horizon;
  if (s.alpha) j["alpha"] = *s.alpha;
  if (s.delta) j["delta"] = *s.delta;
  j["schedule"] = to_string(s.schedule);
  if (s.mu) j["mu"] = *s.mu;
  if (s.eta_hat) j["eta_hat"] = *s.eta_hat;
  j["eta"] = s.eta;
  j["gradient_norm_scaling"] = s.gradient_norm_scaling;
  j["seeds"] = s.seeds;
  if (s.target_epsilon) j["target_epsilon"] = *s.target_epsilon;
  if (s.target_epsilon_relative) j["target_epsilon_relative"] = *s.target_epsilon_relative;
  j["mode"] = bench::to_string(s.mode);
  j["x1_distance"] = s.x1_distance;
  if (s.x1_fill) j["x1_fill"] = *s.x1_fill;
  if (s.baseline_horizon) j["baseline_horizon"] = *s.baseline_horizon;
  if (s.baseline_alpha) j["baseline_alpha"] = *s.baseline_alpha;
  return j.dump(2);
}

}  // namespace rankzo::config
