#pragma once

/**
 * @file plant.hpp
 * @brief Roll-plane dynamics of a pendulum-driven spherical robot with a
 *        coaxial momentum wheel.
 *
 * State is the internal frame's roll angle from vertical (positive toward the
 * turn center), the pendulum angle relative to the main shaft, the wheel spin
 * rate and the forward speed. Equations of motion:
 *
 *     J_roll * theta_dd = -M v^2 tan(theta) + m g l sin(beta - theta)
 *                         - c_theta * theta_d - u_app + d_ext
 *     beta_dd           = k_ps (beta_cmd - beta) - k_ds * beta_d
 *     J_w * omega_w_d   = u_app
 *     v_d               = (v_cmd - v) / tau_v
 *
 * The centripetal moment M v^2 tan(theta) is the lean-dependent load of a
 * sphere turning on radius r = R / tan(theta). Setting theta_dd = 0 recovers
 * the feedforward law beta = theta + asin(M v^2 tan(theta) / (m g l)).
 *
 * The pendulum is abstracted as a second-order position servo; its reaction
 * torque on the frame is not modeled. The wheel motor torque u_app acts on the
 * wheel and, by reaction, with opposite sign on the frame.
 */

#include <rotunsim/errors.hpp>

#include <stdexcept>

namespace rotunsim {

/// Physical parameters and actuator limits. Defaults are the prototype's
/// measured masses and geometry; inertias and servo terms are estimates.
struct PlantParams {
    double M = 160.0;             ///< total mass, kg
    double m = 73.4;              ///< heavy pendulum (with battery), kg
    double R = 0.40;              ///< shell radius, m
    double l = 0.27;              ///< pendulum arm length, m
    double d_w = 0.42;            ///< momentum-wheel outer diameter, m
    double g = 9.81;              ///< m/s^2
    double J_roll = 10.0;         ///< roll inertia about the contact line, kg m^2
    double J_w = wheel_inertia_from_diameter(0.42);  ///< wheel spin inertia, kg m^2
    double c_theta = 2.0;         ///< viscous roll damping, N m s/rad
    double tau_v = 0.8;           ///< forward-speed lag, s
    double k_ps = 60.0;           ///< pendulum servo stiffness, 1/s^2
    double k_ds = 14.0;           ///< pendulum servo damping, 1/s
    double beta_max = 1.2;        ///< rad
    double omega_w_max = 600.0;   ///< rad/s
    double u_gamma_max = 60.0;    ///< N m
    double v_max = 12.0;          ///< m/s
    double theta_capsize = 1.0;   ///< rad

    /// Wheel mass used to derive J_w from d_w (solid disc).
    static constexpr double kWheelMass = 9.8;

    static constexpr double wheel_inertia_from_diameter(double diameter) {
        return 0.5 * kWheelMass * (diameter / 2.0) * (diameter / 2.0);
    }

    /// m g l, the pendulum's gravity moment scale.
    double pendulum_moment() const { return m * g * l; }

    /// Throws DomainError naming the offending config key.
    void validate() const;

    friend bool operator==(const PlantParams&, const PlantParams&) = default;
};

struct PlantState {
    double theta = 0.0;      ///< roll angle, rad
    double theta_dot = 0.0;  ///< rad/s
    double beta = 0.0;       ///< pendulum angle relative to the shaft, rad
    double beta_dot = 0.0;   ///< rad/s
    double omega_w = 0.0;    ///< wheel spin rate, rad/s
    double v = 0.0;          ///< forward speed, m/s

    bool is_finite() const;
    friend bool operator==(const PlantState&, const PlantState&) = default;
};

/// Time derivative of every PlantState field, in the same layout.
using PlantStateRate = PlantState;

struct PlantInputs {
    double v_cmd = 0.0;     ///< m/s
    double beta_cmd = 0.0;  ///< rad
    double u_gamma = 0.0;   ///< requested wheel motor torque, N m
    double d_ext = 0.0;     ///< external roll torque, N m

    bool is_finite() const;
    friend bool operator==(const PlantInputs&, const PlantInputs&) = default;
};

/// Terminal fault: the roll angle reached theta_capsize.
class CapsizeError : public std::runtime_error {
public:
    explicit CapsizeError(const PlantState& state);
    const PlantState& state() const noexcept { return state_; }

private:
    PlantState state_;
};

/// Wheel torque actually applied after the torque limit and the speed limit.
double applied_wheel_torque(const PlantState& state, const PlantInputs& inputs,
                            const PlantParams& params);

/// Throws CapsizeError if |theta| >= theta_capsize and DomainError on
/// non-finite state or inputs.
PlantStateRate derivatives(const PlantState& state, const PlantInputs& inputs,
                           const PlantParams& params);

/// Largest step accepted by step_rk4, s.
inline constexpr double kMaxStep = 0.010;

/// One classical RK4 step with inputs held constant, followed by clamping
/// omega_w to +-omega_w_max. dt must lie in (0, kMaxStep].
PlantState step_rk4(const PlantState& state, const PlantInputs& inputs,
                    const PlantParams& params, double dt);

/// Pendulum angle that zeroes the roll acceleration at (theta, v) with no
/// damping, wheel torque or disturbance. Solved by bisection on the plant's
/// own roll equation over [theta - pi/2, theta + pi/2] to 1e-10 rad.
/// Throws InfeasibleLeanError when |M v^2 tan(theta) / (m g l)| > 1.
double equilibrium_beta(double theta, double v, const PlantParams& params);

/// 1/2 J_roll theta_dot^2 - m g l cos(beta - theta). Conserved when the
/// pendulum is frozen, v = 0 and there is no damping or actuation.
double roll_energy(const PlantState& state, const PlantParams& params);

/// J_roll theta_dot + J_w omega_w. Conserved under wheel torque alone.
double roll_momentum(const PlantState& state, const PlantParams& params);

}  // namespace rotunsim
