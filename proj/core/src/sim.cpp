#include <rotunsim/config.hpp>
#include <rotunsim/random.hpp>
#include <rotunsim/sim.hpp>

#include <cmath>
#include <string>

namespace rotunsim {

namespace {

constexpr std::uint64_t kThetaNoiseStream = 0x7468657461ULL;  // "theta"
constexpr std::uint64_t kRateNoiseStream = 0x72617465ULL;     // "rate"

// Slack for comparing scheduled times against k * period.
constexpr double kTimeSlack = 1e-9;

}  // namespace

Setpoints Scenario::setpoints_at(double t) const {
    Setpoints sp;
    for (const auto& segment : timeline) {
        if (segment.t_start > t + kTimeSlack) break;
        sp.v_hope = segment.v_hope;
        sp.theta_hope = segment.theta_hope;
    }
    return sp;
}

void Scenario::validate() const {
    if (!(std::isfinite(duration) && duration > 0.0)) {
        throw DomainError("scenario duration must be positive");
    }
    if (timeline.empty()) throw DomainError("scenario timeline is empty");
    if (std::abs(timeline.front().t_start) > kTimeSlack) {
        throw DomainError("scenario timeline must start at t = 0");
    }
    for (std::size_t i = 0; i < timeline.size(); ++i) {
        const auto& s = timeline[i];
        const std::string key = "timeline." + std::to_string(i);
        if (!std::isfinite(s.t_start) || !std::isfinite(s.v_hope) ||
            !std::isfinite(s.theta_hope)) {
            throw DomainError(key + ": values must be finite");
        }
        if (i > 0 && !(s.t_start > timeline[i - 1].t_start)) {
            throw DomainError(key + ".t must be strictly after the previous segment");
        }
        if (s.t_start >= duration) throw DomainError(key + ".t must be before the duration");
    }
    for (std::size_t i = 0; i < disturbances.size(); ++i) {
        const auto& d = disturbances[i];
        const std::string key = "disturbance." + std::to_string(i);
        if (!(std::isfinite(d.t_start) && d.t_start >= 0.0 && d.t_start < d.t_end &&
              d.t_end <= duration + kTimeSlack)) {
            throw DomainError(key + ": need 0 <= t_start < t_end <= duration");
        }
        if (!std::isfinite(d.magnitude)) throw DomainError(key + ".magnitude must be finite");
        if (d.kind == DisturbanceKind::band_noise &&
            !(std::isfinite(d.noise_cutoff) && d.noise_cutoff > 0.0)) {
            throw DomainError(key + ".noise_cutoff must be positive for band_noise");
        }
    }
}

void MeasurementModel::validate() const {
    if (!(std::isfinite(theta_noise_std) && theta_noise_std >= 0.0)) {
        throw DomainError("measurement.theta_noise_std must be non-negative");
    }
    if (!(std::isfinite(rate_noise_std) && rate_noise_std >= 0.0)) {
        throw DomainError("measurement.rate_noise_std must be non-negative");
    }
}

void SimConfig::validate() const {
    plant.validate();
    control.validate();
    measurement.validate();
}

Measurement measure(const PlantState& state, const MeasurementModel& model, std::uint64_t seed,
                    std::int64_t tick) {
    Measurement m{state.theta, state.theta_dot, state.v};
    if (!model.enabled) return m;
    const auto counter = static_cast<std::uint64_t>(tick);
    m.theta += model.theta_noise_std * rng::standard_normal(seed, kThetaNoiseStream, counter);
    m.theta_dot += model.rate_noise_std * rng::standard_normal(seed, kRateNoiseStream, counter);
    return m;
}

Trajectory run(const Scenario& scenario, const SimConfig& base, const RunOptions& options) {
    scenario.validate();
    const SimConfig config = apply_overrides(base, scenario.overrides);
    const SimTiming& timing = options.timing;
    if (!(timing.physics_dt > 0.0 && timing.physics_dt <= kMaxStep) || timing.substeps < 1) {
        throw DomainError("invalid simulation timing");
    }

    const double period = timing.control_period();
    const auto ticks = static_cast<std::int64_t>(std::floor(scenario.duration / period + 1e-9));

    DisturbanceSet disturbances(scenario.disturbances, scenario.seed, timing.physics_dt);
    PlantState state;
    ControllerState controller;

    Trajectory traj;
    traj.records.reserve(static_cast<std::size_t>(ticks) + 1);

    for (std::int64_t k = 0; k <= ticks; ++k) {
        const double t = static_cast<double>(k) * period;
        const Setpoints sp = scenario.setpoints_at(t);
        const Measurement meas = measure(state, config.measurement, scenario.seed, k);
        const ControlOutput out =
            controller_step(meas, sp, period, controller, config.control, config.plant);
        controller.last_update_time = t;

        TelemetryRecord rec;
        rec.t = t;
        rec.v = state.v;
        rec.theta = state.theta;
        rec.theta_dot = state.theta_dot;
        rec.beta = state.beta;
        rec.beta_cmd = out.inputs.beta_cmd;
        rec.omega_w = state.omega_w;
        rec.u_gamma = out.inputs.u_gamma;
        rec.v_hope = sp.v_hope;
        rec.theta_hope = sp.theta_hope;
        rec.ff_saturated = out.ff_saturated;
        traj.records.push_back(rec);
        if (options.on_record) options.on_record(rec);

        if (k == ticks) break;

        for (int j = 0; j < timing.substeps; ++j) {
            const std::int64_t step = k * timing.substeps + j;
            PlantInputs inputs = out.inputs;
            inputs.d_ext = disturbances.torque(step);
            if (options.on_physics_step) options.on_physics_step(step, inputs);
            try {
                state = step_rk4(state, inputs, config.plant, timing.physics_dt);
            } catch (const CapsizeError&) {
                traj.termination = Termination::capsized;
                return traj;
            }
        }
    }
    return traj;
}

}  // namespace rotunsim
