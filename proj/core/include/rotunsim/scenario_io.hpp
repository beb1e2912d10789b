#pragma once

// Scenario files use the config file syntax:
//
//     name = e1_v1
//     duration = 9
//     seed = 20240917
//     timeline.0.t = 0
//     timeline.0.v_hope = 1
//     timeline.0.theta_hope = 0
//     disturbance.0.kind = impulse        # impulse | band_noise | constant
//     disturbance.0.t_start = 3
//     disturbance.0.t_end = 3.01
//     disturbance.0.magnitude = 80
//     disturbance.0.noise_cutoff = 0
//     override.plant.c_theta = 5          # any config key
//
// Indexed entries may appear in any order but must be contiguous from 0.

#include <rotunsim/sim.hpp>

#include <filesystem>
#include <string>
#include <string_view>

namespace rotunsim {

Scenario parse_scenario(std::string_view text);
Scenario load_scenario(const std::filesystem::path& path);

/// Text that parses back to an equal Scenario.
std::string format_scenario(const Scenario& scenario);
void save_scenario(const Scenario& scenario, const std::filesystem::path& path);

}  // namespace rotunsim
