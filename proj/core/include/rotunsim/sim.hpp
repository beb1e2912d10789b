#pragma once

/**
 * @file sim.hpp
 * @brief Multi-rate closed-loop scheduler.
 *
 * Physics advances with RK4 at a fixed step (1 ms by default); the controller
 * runs every `substeps` physics steps (10 ms, matching a 100 Hz servo bus) and
 * its commands are held constant in between. Disturbance torques are
 * evaluated per physics step. One TelemetryRecord is captured per control
 * tick, including the tick at t = duration, so a run of duration D produces
 * D / period + 1 records.
 */

#include <rotunsim/control.hpp>
#include <rotunsim/disturbance.hpp>
#include <rotunsim/plant.hpp>

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace rotunsim {

struct TimelineSegment {
    double t_start = 0.0;
    double v_hope = 0.0;
    double theta_hope = 0.0;

    friend bool operator==(const TimelineSegment&, const TimelineSegment&) = default;
};

/// A `key = value` delta in the config key space, applied before the run.
struct ConfigOverride {
    std::string key;
    std::string value;

    friend bool operator==(const ConfigOverride&, const ConfigOverride&) = default;
};

inline constexpr std::uint64_t kDefaultSeed = 20240917;

struct Scenario {
    std::string name;
    double duration = 0.0;
    /// Segment i is active on [t_start_i, t_start_{i+1}); the last runs to the end.
    std::vector<TimelineSegment> timeline;
    std::vector<DisturbanceSpec> disturbances;
    std::uint64_t seed = kDefaultSeed;
    std::vector<ConfigOverride> overrides;

    Setpoints setpoints_at(double t) const;
    void validate() const;

    friend bool operator==(const Scenario&, const Scenario&) = default;
};

struct MeasurementModel {
    double theta_noise_std = 0.002;  ///< rad
    double rate_noise_std = 0.01;    ///< rad/s
    bool enabled = true;

    void validate() const;
    friend bool operator==(const MeasurementModel&, const MeasurementModel&) = default;
};

struct SimConfig {
    PlantParams plant;
    ControlConfig control;
    MeasurementModel measurement;

    void validate() const;
    friend bool operator==(const SimConfig&, const SimConfig&) = default;
};

/// One row per control tick: true plant state plus the commands issued.
struct TelemetryRecord {
    double t = 0.0;
    double v = 0.0;
    double theta = 0.0;
    double theta_dot = 0.0;
    double beta = 0.0;
    double beta_cmd = 0.0;
    double omega_w = 0.0;
    double u_gamma = 0.0;
    double v_hope = 0.0;
    double theta_hope = 0.0;
    bool ff_saturated = false;

    friend bool operator==(const TelemetryRecord&, const TelemetryRecord&) = default;
};

enum class Termination { completed, capsized };

struct Trajectory {
    std::vector<TelemetryRecord> records;
    Termination termination = Termination::completed;

    friend bool operator==(const Trajectory&, const Trajectory&) = default;
};

struct SimTiming {
    double physics_dt = 1e-3;
    int substeps = 10;

    double control_period() const { return physics_dt * substeps; }
};

struct RunOptions {
    SimTiming timing;
    /// Called once per control tick after the record is captured.
    std::function<void(const TelemetryRecord&)> on_record;
    /// Called before every physics step with the step index and the inputs
    /// (disturbance included) that the step will integrate.
    std::function<void(std::int64_t, const PlantInputs&)> on_physics_step;
};

/// Noisy measurement for control tick `tick`; exact when the model is disabled.
Measurement measure(const PlantState& state, const MeasurementModel& model, std::uint64_t seed,
                    std::int64_t tick);

/// Runs the scenario closed loop. Scenario overrides are applied to `config`
/// first. Throws DomainError on an invalid scenario or configuration before
/// any stepping; a capsize ends the run with Termination::capsized.
Trajectory run(const Scenario& scenario, const SimConfig& config, const RunOptions& options = {});

}  // namespace rotunsim
