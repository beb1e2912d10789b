#pragma once

// Numerical self-checks of the plant model, run by `rotunsim check`.

#include <rotunsim/plant.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace rotunsim {

struct CheckResult {
    std::string name;
    double value = 0.0;      ///< measured quantity
    double threshold = 0.0;  ///< pass bound (or lower bound for ranges)
    double upper = 0.0;      ///< upper bound for range checks, else 0
    bool passed = false;
    std::string detail;
};

/// Max |change in J_roll theta_dot + J_w omega_w| per 1 ms step over 10 s of
/// random wheel torque with gravity, speed and damping removed. Bound 1e-9.
CheckResult check_momentum_conservation(const PlantParams& params, std::uint64_t seed = 1);

/// Relative roll-energy drift over 10 s of free oscillation from 0.2 rad
/// with the pendulum frozen. Bound 1e-6.
CheckResult check_energy_conservation(const PlantParams& params);

/// Error ratio when halving dt from 1 ms to 0.5 ms on the free pendulum
/// servo mode, against a 1 us reference. Must fall in [12, 20].
CheckResult check_integrator_order(const PlantParams& params);

/// Max |feedforward - equilibrium_beta| over a (theta, v) grid where the asin
/// argument stays within 0.9. Bound 1e-6 rad.
CheckResult check_equilibrium_consistency(const PlantParams& params);

std::vector<CheckResult> run_invariant_checks(const PlantParams& params);

}  // namespace rotunsim
