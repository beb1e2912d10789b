#pragma once

/**
 * @file config.hpp
 * @brief Flat `dotted.key = value` configuration files.
 *
 * One assignment per line, `#` starts a comment, blank lines are ignored.
 * Unknown keys are rejected; keys that are not mentioned keep their defaults.
 *
 *     plant.M = 160
 *     plant.m = 73.4
 *     control.mode = with_wheel          # or baseline_no_wheel
 *     control.pendulum.segments = 2      # resize a schedule
 *     control.pendulum.0.threshold = 0.1
 *     control.pendulum.0.kp = 1.2
 *     control.pendulum.0.ki = 0.4
 *     control.wheel.1.threshold = inf
 *     control.wheel.1.kd = 6
 *     measurement.enabled = true
 *
 * If `plant.d_w` is set and `plant.J_w` is not, J_w is re-derived from the
 * diameter as a solid disc of the wheel mass.
 */

#include <rotunsim/sim.hpp>

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace rotunsim {

/// A parsed `key = value` line.
struct KeyValue {
    int line = 0;
    std::string key;
    std::string value;
};

/// Splits text into assignments. Throws ParseError on lines without '=' or
/// with an empty key, and on duplicate keys.
std::vector<KeyValue> parse_key_values(std::string_view text);

/// Reads a whole file; throws DomainError if it cannot be opened.
std::string read_text_file(const std::filesystem::path& path);

/// Number parsing shared by the file readers (accepts inf / -inf).
double parse_double(std::string_view text, std::string_view key);
bool parse_bool(std::string_view text, std::string_view key);

/// Assigns one key. Throws DomainError for unknown keys or bad values; does
/// not run whole-config validation.
void apply_config_key(SimConfig& config, std::string_view key, std::string_view value);

/// Parses config text on top of `base` and validates the result.
SimConfig parse_config(std::string_view text, const SimConfig& base = {});

SimConfig load_config(const std::filesystem::path& path);

/// Applies scenario deltas to a copy of `base` and validates the result.
SimConfig apply_overrides(const SimConfig& base, std::span<const ConfigOverride> overrides);

/// Full config text that parses back to an identical SimConfig.
std::string format_config(const SimConfig& config);

/// Round-trippable number formatting ("%.17g", plus inf/-inf).
std::string format_double(double value);

const char* to_string(ControlMode mode);

}  // namespace rotunsim
