#include <rotunsim/control.hpp>
#include <rotunsim/diagnostics.hpp>
#include <rotunsim/random.hpp>

#include <algorithm>
#include <cmath>

namespace rotunsim {

CheckResult check_momentum_conservation(const PlantParams& base, std::uint64_t seed) {
    PlantParams p = base;
    p.g = 0.0;
    p.c_theta = 0.0;
    constexpr double kDt = 1e-3;
    constexpr int kSteps = 10000;

    PlantState x;
    double worst = 0.0;
    double u = 0.0;
    for (int k = 0; k < kSteps; ++k) {
        if (k % 10 == 0) {
            const double r = rng::uniform_open(rng::hash3(seed, 0x6d6f6d, static_cast<std::uint64_t>(k)));
            u = 10.0 * (r - 0.5);
        }
        const double before = roll_momentum(x, p);
        x = step_rk4(x, PlantInputs{0.0, 0.0, u, 0.0}, p, kDt);
        worst = std::max(worst, std::abs(roll_momentum(x, p) - before));
    }
    CheckResult r{"momentum", worst, 1e-9, 0.0, worst < 1e-9, "max per-step drift"};
    return r;
}

CheckResult check_energy_conservation(const PlantParams& base) {
    PlantParams p = base;
    p.c_theta = 0.0;
    p.k_ps = 0.0;
    p.k_ds = 0.0;
    constexpr double kDt = 1e-3;
    PlantState x;
    x.theta = 0.2;
    const double e0 = roll_energy(x, p);
    double worst = 0.0;
    for (int k = 0; k < 10000; ++k) {
        x = step_rk4(x, PlantInputs{}, p, kDt);
        worst = std::max(worst, std::abs(roll_energy(x, p) - e0) / std::abs(e0));
    }
    return CheckResult{"energy", worst, 1e-6, 0.0, worst < 1e-6, "max relative drift over 10 s"};
}

namespace {

double free_pendulum_endpoint(const PlantParams& p, double dt, double horizon) {
    PlantState x;
    x.beta = 0.1;
    const auto steps = static_cast<long>(std::llround(horizon / dt));
    for (long k = 0; k < steps; ++k) x = step_rk4(x, PlantInputs{}, p, dt);
    return x.beta;
}

}  // namespace

CheckResult check_integrator_order(const PlantParams& base) {
    PlantParams p = base;
    p.g = 0.0;  // decouples roll from the pendulum
    p.k_ds = 0.0;
    constexpr double kHorizon = 2.0;
    const double reference = free_pendulum_endpoint(p, 1e-6, kHorizon);
    const double coarse = std::abs(free_pendulum_endpoint(p, 1e-3, kHorizon) - reference);
    const double fine = std::abs(free_pendulum_endpoint(p, 5e-4, kHorizon) - reference);
    const double ratio = coarse / fine;
    return CheckResult{"order", ratio, 12.0, 20.0, ratio >= 12.0 && ratio <= 20.0,
                       "error ratio for dt 1 ms -> 0.5 ms"};
}

CheckResult check_equilibrium_consistency(const PlantParams& p) {
    double worst = 0.0;
    int points = 0;
    for (int i = 0; i <= 40; ++i) {
        const double theta = -0.4 + 0.8 * i / 40.0;
        for (int j = 0; j <= 20; ++j) {
            const double v = 2.0 * j / 20.0;
            const double demand = p.M * v * v * std::tan(theta) / p.pendulum_moment();
            if (std::abs(demand) > 0.9) continue;
            const Feedforward ff = feedforward_beta(theta, v, p);
            if (ff.saturated) continue;  // beta_max clamp; no longer the balance point
            worst = std::max(worst, std::abs(ff.beta - equilibrium_beta(theta, v, p)));
            ++points;
        }
    }
    return CheckResult{"equilibrium", worst, 1e-6, 0.0, worst < 1e-6,
                       std::to_string(points) + " grid points"};
}

std::vector<CheckResult> run_invariant_checks(const PlantParams& params) {
    return {check_momentum_conservation(params), check_energy_conservation(params),
            check_integrator_order(params), check_equilibrium_consistency(params)};
}

}  // namespace rotunsim
