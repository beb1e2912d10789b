#include <rotunsim/control.hpp>

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

namespace rotunsim {

GainSchedule::GainSchedule(std::vector<GainSegment> segments) : segments_(std::move(segments)) {}

const GainSegment& GainSchedule::select(double error) const {
    const double magnitude = std::abs(error);
    for (const auto& segment : segments_) {
        if (magnitude <= segment.threshold) return segment;
    }
    return segments_.back();
}

void GainSchedule::validate(const char* name) const {
    const std::string prefix(name);
    if (segments_.empty()) throw DomainError(prefix + ": schedule is empty");
    double previous = -1.0;
    for (std::size_t i = 0; i < segments_.size(); ++i) {
        const auto& s = segments_[i];
        const std::string key = prefix + "." + std::to_string(i);
        if (std::isnan(s.threshold) || s.threshold < 0.0) {
            throw DomainError(key + ".threshold must be non-negative");
        }
        if (s.threshold <= previous) {
            throw DomainError(key + ".threshold must be strictly increasing");
        }
        if (!(std::isfinite(s.kp) && s.kp >= 0.0 && std::isfinite(s.gain2) && s.gain2 >= 0.0)) {
            throw DomainError(key + ": gains must be finite and non-negative");
        }
        previous = s.threshold;
    }
    if (!std::isinf(segments_.back().threshold)) {
        throw DomainError(prefix + ": last threshold must be inf");
    }
}

void ControlConfig::validate() const {
    pendulum_schedule.validate("control.pendulum");
    wheel_schedule.validate("control.wheel");
    if (!(std::isfinite(integral_clamp) && integral_clamp > 0.0)) {
        throw DomainError("control.integral_clamp must be positive");
    }
    if (!(rate_filter_alpha > 0.0 && rate_filter_alpha <= 1.0)) {
        throw DomainError("control.rate_filter_alpha must lie in (0, 1]");
    }
    if (!(std::isfinite(baseline_kd) && baseline_kd >= 0.0)) {
        throw DomainError("control.baseline_kd must be non-negative");
    }
}

Feedforward feedforward_beta(double theta_hope, double v, const PlantParams& params) {
    if (!std::isfinite(theta_hope) || !std::isfinite(v)) {
        throw DomainError("feedforward_beta: non-finite argument");
    }
    Feedforward ff;
    const double demand = params.M * v * v * std::tan(theta_hope) / params.pendulum_moment();
    const double clamped_demand = std::clamp(demand, -1.0, 1.0);
    ff.saturated = clamped_demand != demand;
    const double beta = theta_hope + std::asin(clamped_demand);
    ff.beta = std::clamp(beta, -params.beta_max, params.beta_max);
    ff.saturated = ff.saturated || ff.beta != beta;
    return ff;
}

double pendulum_pi_step(double theta_err, double dt, ControllerState& state,
                        const ControlConfig& cfg) {
    if (!std::isfinite(theta_err)) throw DomainError("pendulum_pi_step: non-finite error");
    if (!(dt > 0.0)) throw DomainError("pendulum_pi_step: dt must be positive");

    const GainSegment& gains = cfg.pendulum_schedule.select(theta_err);
    state.pi_integral = std::clamp(state.pi_integral + theta_err * dt, -cfg.integral_clamp,
                                   cfg.integral_clamp);
    return gains.kp * theta_err + gains.gain2 * state.pi_integral;
}

double wheel_pd_step(double theta_dot, double dt, ControllerState& state,
                     const ControlConfig& cfg, double torque_limit) {
    if (!std::isfinite(theta_dot)) throw DomainError("wheel_pd_step: non-finite roll rate");
    if (!(dt > 0.0)) throw DomainError("wheel_pd_step: dt must be positive");

    const double error = -theta_dot;
    double error_rate = 0.0;
    if (!state.rate_filter_primed) {
        state.rate_filter = theta_dot;
        state.rate_filter_primed = true;
    } else {
        const double filtered =
            cfg.rate_filter_alpha * theta_dot + (1.0 - cfg.rate_filter_alpha) * state.rate_filter;
        error_rate = -(filtered - state.rate_filter) / dt;
        state.rate_filter = filtered;
    }

    const GainSegment& gains = cfg.wheel_schedule.select(error);
    const double torque = gains.kp * error + gains.gain2 * error_rate;
    return std::clamp(torque, -torque_limit, torque_limit);
}

ControlOutput controller_step(const Measurement& measured, const Setpoints& setpoints, double dt,
                              ControllerState& state, const ControlConfig& cfg,
                              const PlantParams& params) {
    const Feedforward ff = feedforward_beta(setpoints.theta_hope, measured.v, params);
    const double correction =
        pendulum_pi_step(setpoints.theta_hope - measured.theta, dt, state, cfg);

    ControlOutput out;
    out.ff_saturated = ff.saturated;
    out.inputs.v_cmd = setpoints.v_hope;

    double beta_cmd = ff.beta + correction;
    if (cfg.mode == ControlMode::with_wheel) {
        const double frame_torque =
            wheel_pd_step(measured.theta_dot, dt, state, cfg, params.u_gamma_max);
        // The motor pushes the wheel one way and the frame the other.
        out.inputs.u_gamma = 0.0 - frame_torque;
    } else {
        beta_cmd -= cfg.baseline_kd * measured.theta_dot;
    }
    out.inputs.beta_cmd = std::clamp(beta_cmd, -params.beta_max, params.beta_max);
    return out;
}

}  // namespace rotunsim
