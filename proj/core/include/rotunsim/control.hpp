#pragma once

// Decoupled roll control: a model feedforward plus segmented PI drives the
// pendulum toward the target roll angle while a segmented PD on roll rate
// drives the momentum wheel. The baseline mode disables the wheel and lets
// the pendulum damp the roll itself.

#include <rotunsim/plant.hpp>

#include <limits>
#include <vector>

namespace rotunsim {

/// One band of a piecewise-constant gain schedule. `gain2` is the integral
/// gain for PI schedules and the derivative gain for PD schedules.
struct GainSegment {
    double threshold = std::numeric_limits<double>::infinity();
    double kp = 0.0;
    double gain2 = 0.0;

    friend bool operator==(const GainSegment&, const GainSegment&) = default;
};

class GainSchedule {
public:
    GainSchedule() = default;
    explicit GainSchedule(std::vector<GainSegment> segments);

    /// First segment whose threshold is >= |error|; a boundary value picks the
    /// lower band.
    const GainSegment& select(double error) const;

    const std::vector<GainSegment>& segments() const { return segments_; }
    std::vector<GainSegment>& segments() { return segments_; }

    /// Non-empty, strictly increasing thresholds ending at +inf, finite
    /// non-negative gains. `name` prefixes the error message.
    void validate(const char* name) const;

    friend bool operator==(const GainSchedule&, const GainSchedule&) = default;

private:
    std::vector<GainSegment> segments_;
};

struct Setpoints {
    double v_hope = 0.0;      ///< m/s
    double theta_hope = 0.0;  ///< rad

    friend bool operator==(const Setpoints&, const Setpoints&) = default;
};

struct ControllerState {
    double pi_integral = 0.0;        ///< rad s, clamped to +-integral_clamp
    double rate_filter = 0.0;        ///< low-passed roll rate, rad/s
    bool rate_filter_primed = false; ///< set once the filter has seen a sample
    double last_update_time = 0.0;   ///< s, maintained by the scheduler

    friend bool operator==(const ControllerState&, const ControllerState&) = default;
};

enum class ControlMode { with_wheel, baseline_no_wheel };

struct ControlConfig {
    GainSchedule pendulum_schedule{{{0.1, 1.2, 0.4}, {std::numeric_limits<double>::infinity(), 0.7, 0.15}}};
    GainSchedule wheel_schedule{{{0.3, 80.0, 4.0}, {std::numeric_limits<double>::infinity(), 120.0, 6.0}}};
    double integral_clamp = 0.5;
    double rate_filter_alpha = 0.2;
    ControlMode mode = ControlMode::with_wheel;
    double baseline_kd = 0.6;

    void validate() const;

    friend bool operator==(const ControlConfig&, const ControlConfig&) = default;
};

struct Feedforward {
    double beta = 0.0;
    bool saturated = false;  ///< asin argument or beta_max clamp was active
};

/// theta_hope + asin(M v^2 tan(theta_hope) / (m g l)), with the asin argument
/// clamped to [-1, 1] and the result clamped to +-beta_max.
Feedforward feedforward_beta(double theta_hope, double v, const PlantParams& params);

/// PI correction for the pendulum channel. Throws DomainError on a
/// non-finite error before touching `state`.
double pendulum_pi_step(double theta_err, double dt, ControllerState& state,
                        const ControlConfig& cfg);

/// Corrective roll torque on the frame that drives the roll rate to zero,
/// clamped to +-torque_limit. The derivative acts on a low-passed rate whose
/// memory starts at the first sample, so the first call has no D term.
double wheel_pd_step(double theta_dot, double dt, ControllerState& state,
                     const ControlConfig& cfg, double torque_limit);

struct Measurement {
    double theta = 0.0;
    double theta_dot = 0.0;
    double v = 0.0;
};

struct ControlOutput {
    PlantInputs inputs;
    bool ff_saturated = false;
};

/// Composes the three channels. The speed command is passed through to the
/// drive; beta_cmd = feedforward(theta_hope, measured v) + PI(theta_hope -
/// theta), minus baseline_kd * theta_dot in baseline mode; the wheel motor
/// torque is the reaction that produces the PD's corrective frame torque.
ControlOutput controller_step(const Measurement& measured, const Setpoints& setpoints, double dt,
                              ControllerState& state, const ControlConfig& cfg,
                              const PlantParams& params);

}  // namespace rotunsim
