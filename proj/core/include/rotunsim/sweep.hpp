#pragma once

// Grid evaluation of controller (or plant) settings. Spec file example:
//
//     scenario = builtin:e1:1        # or a scenario file, relative to this file
//     objective = overshoot          # overshoot | settling_time | rms_roll_err
//     target = 0.26
//     window.t_start = 3
//     window.t_end = 6
//     param.0.key = control.wheel.0.kp
//     param.0.values = 40, 80, 120
//     param.1.key = control.wheel.0.kd
//     param.1.values = 2, 4
//
// Every grid point is an independent run. Results are sorted by objective,
// then lexicographically by parameter values; capsized runs score +inf.

#include <rotunsim/metrics.hpp>
#include <rotunsim/sim.hpp>

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace rotunsim {

enum class Objective { overshoot, settling_time, rms_roll_err };

const char* to_string(Objective objective);

struct SweepParameter {
    std::string key;
    std::vector<double> values;
};

struct SweepSpec {
    std::vector<SweepParameter> parameters;
    Objective objective = Objective::overshoot;
    std::string scenario_ref;
    double target = 0.0;
    MetricWindow window;
    std::filesystem::path base_dir;  ///< for resolving relative scenario paths
};

struct SweepResult {
    std::vector<double> values;  ///< one per parameter, in spec order
    double objective = 0.0;
    Metrics metrics;
};

SweepSpec parse_sweep_spec(std::string_view text, std::filesystem::path base_dir = {});
SweepSpec load_sweep_spec(const std::filesystem::path& path);

/// "builtin:<name>" (see builtin_scenario) or a scenario file path.
Scenario resolve_scenario_ref(const SweepSpec& spec, const SimConfig& config);

double objective_value(const Metrics& metrics, Objective objective);

/// Evaluates the whole grid on `workers` threads (0 = hardware concurrency).
/// Output does not depend on the worker count.
std::vector<SweepResult> run_sweep(const SweepSpec& spec, const Scenario& scenario,
                                   const SimConfig& config, unsigned workers = 0);

/// CSV: one column per parameter key, then objective and capsized.
std::string format_sweep_csv(const SweepSpec& spec, const std::vector<SweepResult>& results);

}  // namespace rotunsim
