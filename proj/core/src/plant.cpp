#include <rotunsim/plant.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

namespace rotunsim {

namespace {

void require_positive(double value, const char* key) {
    if (!(std::isfinite(value) && value > 0.0)) {
        throw DomainError(std::string(key) + " must be positive and finite");
    }
}

void require_non_negative(double value, const char* key) {
    if (!(std::isfinite(value) && value >= 0.0)) {
        throw DomainError(std::string(key) + " must be non-negative and finite");
    }
}

double saturate(double value, double limit) { return std::clamp(value, -limit, limit); }

PlantState add_scaled(const PlantState& x, const PlantStateRate& k, double h) {
    return PlantState{
        x.theta + h * k.theta,       x.theta_dot + h * k.theta_dot,
        x.beta + h * k.beta,         x.beta_dot + h * k.beta_dot,
        x.omega_w + h * k.omega_w,   x.v + h * k.v,
    };
}

}  // namespace

void PlantParams::validate() const {
    require_positive(M, "plant.M");
    require_positive(m, "plant.m");
    require_positive(R, "plant.R");
    require_positive(l, "plant.l");
    require_positive(d_w, "plant.d_w");
    require_non_negative(g, "plant.g");
    require_positive(J_roll, "plant.J_roll");
    require_positive(J_w, "plant.J_w");
    require_non_negative(c_theta, "plant.c_theta");
    require_positive(tau_v, "plant.tau_v");
    require_non_negative(k_ps, "plant.k_ps");
    require_non_negative(k_ds, "plant.k_ds");
    require_positive(beta_max, "plant.beta_max");
    require_positive(omega_w_max, "plant.omega_w_max");
    require_positive(u_gamma_max, "plant.u_gamma_max");
    require_positive(v_max, "plant.v_max");
    require_positive(theta_capsize, "plant.theta_capsize");
    if (theta_capsize >= std::numbers::pi / 2.0) {
        throw DomainError("plant.theta_capsize must be below pi/2");
    }
    if (m >= M) throw DomainError("plant.m must be smaller than plant.M");
    if (l >= R) throw DomainError("plant.l must be smaller than plant.R");
}

bool PlantState::is_finite() const {
    return std::isfinite(theta) && std::isfinite(theta_dot) && std::isfinite(beta) &&
           std::isfinite(beta_dot) && std::isfinite(omega_w) && std::isfinite(v);
}

bool PlantInputs::is_finite() const {
    return std::isfinite(v_cmd) && std::isfinite(beta_cmd) && std::isfinite(u_gamma) &&
           std::isfinite(d_ext);
}

namespace {
std::string describe_capsize(const PlantState& s) {
    std::ostringstream os;
    os << "capsize: |theta| = " << std::abs(s.theta) << " rad (theta_dot = " << s.theta_dot
       << ", v = " << s.v << ")";
    return os.str();
}
}  // namespace

CapsizeError::CapsizeError(const PlantState& state)
    : std::runtime_error(describe_capsize(state)), state_(state) {}

double applied_wheel_torque(const PlantState& state, const PlantInputs& inputs,
                            const PlantParams& params) {
    double u = saturate(inputs.u_gamma, params.u_gamma_max);
    if (std::abs(state.omega_w) >= params.omega_w_max && u * state.omega_w > 0.0) {
        u = 0.0;
    }
    return u;
}

PlantStateRate derivatives(const PlantState& state, const PlantInputs& inputs,
                           const PlantParams& params) {
    if (!state.is_finite()) throw DomainError("plant state is not finite");
    if (!inputs.is_finite()) throw DomainError("plant inputs are not finite");
    if (std::abs(state.theta) >= params.theta_capsize) throw CapsizeError(state);

    const double u_app = applied_wheel_torque(state, inputs, params);
    const double centripetal = params.M * state.v * state.v * std::tan(state.theta);
    const double pendulum = params.pendulum_moment() * std::sin(state.beta - state.theta);

    PlantStateRate rate;
    rate.theta = state.theta_dot;
    rate.theta_dot = (-centripetal + pendulum - params.c_theta * state.theta_dot - u_app +
                      inputs.d_ext) /
                     params.J_roll;
    rate.beta = state.beta_dot;
    rate.beta_dot = params.k_ps * (saturate(inputs.beta_cmd, params.beta_max) - state.beta) -
                    params.k_ds * state.beta_dot;
    rate.omega_w = u_app / params.J_w;
    rate.v = (saturate(inputs.v_cmd, params.v_max) - state.v) / params.tau_v;
    return rate;
}

PlantState step_rk4(const PlantState& state, const PlantInputs& inputs,
                    const PlantParams& params, double dt) {
    if (!(dt > 0.0 && dt <= kMaxStep)) {
        throw DomainError("integration step must lie in (0, 10 ms]");
    }
    const PlantStateRate k1 = derivatives(state, inputs, params);
    const PlantStateRate k2 = derivatives(add_scaled(state, k1, dt / 2.0), inputs, params);
    const PlantStateRate k3 = derivatives(add_scaled(state, k2, dt / 2.0), inputs, params);
    const PlantStateRate k4 = derivatives(add_scaled(state, k3, dt), inputs, params);

    PlantStateRate slope;
    slope.theta = (k1.theta + 2.0 * k2.theta + 2.0 * k3.theta + k4.theta) / 6.0;
    slope.theta_dot = (k1.theta_dot + 2.0 * k2.theta_dot + 2.0 * k3.theta_dot + k4.theta_dot) / 6.0;
    slope.beta = (k1.beta + 2.0 * k2.beta + 2.0 * k3.beta + k4.beta) / 6.0;
    slope.beta_dot = (k1.beta_dot + 2.0 * k2.beta_dot + 2.0 * k3.beta_dot + k4.beta_dot) / 6.0;
    slope.omega_w = (k1.omega_w + 2.0 * k2.omega_w + 2.0 * k3.omega_w + k4.omega_w) / 6.0;
    slope.v = (k1.v + 2.0 * k2.v + 2.0 * k3.v + k4.v) / 6.0;

    PlantState next = add_scaled(state, slope, dt);
    next.omega_w = saturate(next.omega_w, params.omega_w_max);
    if (!next.is_finite()) throw DomainError("integration produced a non-finite state");
    if (std::abs(next.theta) >= params.theta_capsize) throw CapsizeError(next);
    return next;
}

double equilibrium_beta(double theta, double v, const PlantParams& params) {
    if (!std::isfinite(theta) || !std::isfinite(v)) {
        throw DomainError("equilibrium_beta: non-finite argument");
    }
    if (std::abs(theta) >= params.theta_capsize) {
        throw DomainError("equilibrium_beta: theta beyond the capsize angle");
    }
    const double demand = params.M * v * v * std::tan(theta) / params.pendulum_moment();
    if (std::abs(demand) > 1.0) {
        throw InfeasibleLeanError("no pendulum angle balances lean " + std::to_string(theta) +
                                  " rad at " + std::to_string(v) + " m/s");
    }

    // Roll acceleration with everything but gravity and the centripetal moment
    // switched off. It increases monotonically in beta over the bracket.
    PlantParams quiet = params;
    quiet.c_theta = 0.0;
    const auto roll_accel = [&](double beta) {
        return derivatives(PlantState{theta, 0.0, beta, 0.0, 0.0, v}, PlantInputs{}, quiet)
            .theta_dot;
    };

    constexpr double kTolerance = 1e-10;
    double lo = theta - std::numbers::pi / 2.0;
    double hi = theta + std::numbers::pi / 2.0;
    if (roll_accel(lo) >= 0.0) return lo;
    if (roll_accel(hi) <= 0.0) return hi;
    while (hi - lo > kTolerance) {
        const double mid = 0.5 * (lo + hi);
        const double f = roll_accel(mid);
        if (f == 0.0) return mid;
        (f < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double roll_energy(const PlantState& state, const PlantParams& params) {
    return 0.5 * params.J_roll * state.theta_dot * state.theta_dot -
           params.pendulum_moment() * std::cos(state.beta - state.theta);
}

double roll_momentum(const PlantState& state, const PlantParams& params) {
    return params.J_roll * state.theta_dot + params.J_w * state.omega_w;
}

}  // namespace rotunsim
