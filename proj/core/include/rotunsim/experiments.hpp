#pragma once

/**
 * @file experiments.hpp
 * @brief Canned field-test scenarios and the with/without-wheel comparison.
 *
 *   E1  9 s straight runs at 1, 2, 3 m/s with a 0.26 rad roll step on [3, 6) s.
 *   E2  10 s straight runs at 3.5 m/s on four surfaces, modeled as roll
 *       torque noise (and a constant slope torque).
 *   E3  8 s at 4 m/s with a lateral roll impulse at t = 3 s, calibrated so the
 *       roll peak reaches 0.4 rad.
 *   E4  35 s run stepping up to 10 m/s by t = 10 s and holding it.
 */

#include <rotunsim/metrics.hpp>
#include <rotunsim/sim.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace rotunsim {

inline constexpr double kE1RollStep = 0.26;
inline constexpr double kE1Duration = 9.0;
inline constexpr MetricWindow kE1StepWindow{3.0, 6.0};
inline constexpr MetricWindow kE1PostStepWindow{6.0, 9.0};

Scenario scenario_e1(double speed);

inline constexpr double kE2Speed = 3.5;
inline constexpr double kE2Duration = 10.0;
/// Slope torque scale: d_ext = -M g R sin(10 deg) * kSlopeFactor.
inline constexpr double kSlopeFactor = 1.0;

/// grass, track, slope, turf (in that order).
std::vector<Scenario> scenario_e2(const PlantParams& params = {});

inline constexpr double kE3Speed = 4.0;
inline constexpr double kE3Duration = 8.0;
inline constexpr double kE3ImpulseTime = 3.0;
inline constexpr double kE3TargetPeak = 0.4;
inline constexpr double kE3SettleBand = 0.1;

/// E3 with a given impulse magnitude, N m s.
Scenario scenario_e3(double impulse, std::uint64_t seed = kDefaultSeed);

struct E3Calibration {
    Scenario scenario;
    double impulse = 0.0;
    double peak = 0.0;  ///< max |theta| after the impulse
    int runs = 0;
    bool converged = false;
};

/// Bisection over the impulse magnitude until |peak - target_peak| < tolerance.
E3Calibration calibrate_e3(const SimConfig& config, std::uint64_t seed = kDefaultSeed,
                           double target_peak = kE3TargetPeak,
                           double tolerance = 0.02, int max_runs = 30);

inline constexpr double kE4TopSpeed = 10.0;
inline constexpr double kE4Duration = 35.0;
inline constexpr MetricWindow kE4HoldWindow{15.0, 35.0 + 1e-6};

Scenario scenario_e4();

struct ComparisonRow {
    double speed = 0.0;
    Metrics metrics_with_wheel;  ///< roll step window, target 0.26
    Metrics metrics_baseline;
    Metrics post_step_with_wheel;  ///< after the step, target 0
    Metrics post_step_baseline;
};

/// Runs E1 at 1, 2 and 3 m/s in both control modes. Only the mode differs
/// between the paired runs; rows come back in speed order.
std::vector<ComparisonRow> compare_stability(const SimConfig& config = {},
                                             std::uint64_t seed = kDefaultSeed);

/// Time after `t_from` at which |theta| drops below `band` for good. Returns
/// +inf if the last record is still outside the band.
double recovery_time(const Trajectory& traj, double t_from, double band);

/// Named builtin scenario: "e1:<speed>", "e2:<grass|track|slope|turf>",
/// "e3" (calibrated against `config`) or "e4".
Scenario builtin_scenario(const std::string& name, const SimConfig& config = {});

}  // namespace rotunsim
