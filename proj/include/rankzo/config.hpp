#pragma once

// Experiment specs as flat JSON objects.
//
// Keys: family, dim, lambda_min, lambda_max, cosine_a, noise_radius,
// region_radius, sample_size, horizon, alpha, delta, schedule
// ("strongly_convex" | "fixed_horizon" | "constant"), mu, eta_hat, eta,
// gradient_norm_scaling, seeds (array) or seed_count + seed_base,
// target_epsilon, target_epsilon_relative, mode, x1_distance, x1_fill,
// baseline_horizon, baseline_alpha. Unknown keys are rejected.

#include <string>

#include "rankzo/bench.hpp"

namespace rankzo::config {

/// Throws ConfigError on malformed JSON, unknown keys or wrong value types.
bench::ExperimentSpec parse_spec(const std::string& json_text);

/// Reads and parses `path`; an unreadable file is a ConfigError.
bench::ExperimentSpec load_spec(const std::string& path);

/// Inverse of parse_spec (absent optionals are omitted).
std::string dump_spec(const bench::ExperimentSpec& spec);

std::string to_string(bench::ScheduleKind kind);
bench::ScheduleKind schedule_from_string(const std::string& name);

}  // namespace rankzo::config
