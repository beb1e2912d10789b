#include <rotunsim/plant.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <cstring>
#include <random>

using namespace rotunsim;

namespace {

// Steady-turn pendulum angle in closed form, independent of the plant code.
double closed_form_beta(double theta, double v, const PlantParams& p) {
    return theta + std::asin(p.M * v * v * std::tan(theta) / (p.m * p.g * p.l));
}

}  // namespace

TEST(PlantDerivatives, UprightRestIsAFixedPoint) {
    const PlantStateRate d = derivatives(PlantState{}, PlantInputs{}, PlantParams{});
    EXPECT_EQ(d, PlantStateRate{});
}

TEST(PlantDerivatives, WheelTorqueCancelsInTotalMomentum) {
    PlantParams p;
    p.g = 0.0;
    p.c_theta = 0.0;
    const PlantInputs in{0.0, 0.0, 5.0, 0.0};
    const PlantStateRate d = derivatives(PlantState{}, in, p);
    EXPECT_DOUBLE_EQ(d.theta_dot, -5.0 / p.J_roll);
    EXPECT_DOUBLE_EQ(d.omega_w, 5.0 / p.J_w);
    EXPECT_NEAR(p.J_roll * d.theta_dot + p.J_w * d.omega_w, 0.0, 1e-15);
}

TEST(PlantDerivatives, PendulumAlignedWithFrameGivesNoRollAcceleration) {
    PlantState s;
    s.theta = 0.1;
    s.beta = 0.1;
    EXPECT_DOUBLE_EQ(derivatives(s, PlantInputs{}, PlantParams{}).theta_dot, 0.0);
}

TEST(PlantDerivatives, SteadyTurnBalances) {
    const PlantParams p;
    // Closed form: 0.26 + asin(160 tan 0.26 / (73.4 * 9.81 * 0.27)).
    const double beta = closed_form_beta(0.26, 1.0, p);
    EXPECT_NEAR(beta, 0.4806, 2e-4);
    PlantState s;
    s.theta = 0.26;
    s.beta = beta;
    s.v = 1.0;
    EXPECT_NEAR(derivatives(s, PlantInputs{}, p).theta_dot, 0.0, 1e-12);
    // The rounded value leaves a small residual: mgl cos(0.22) / J_roll * 1.2e-4.
    s.beta = 0.4806;
    EXPECT_NEAR(derivatives(s, PlantInputs{}, p).theta_dot, 0.0, 5e-3);
}

TEST(PlantDerivatives, LeanIsRestoredWhenPendulumHangsPlumb) {
    PlantState s;
    s.theta = 0.2;
    EXPECT_LT(derivatives(s, PlantInputs{}, PlantParams{}).theta_dot, 0.0);
}

TEST(PlantDerivatives, RejectsCapsizeAndNonFinite) {
    const PlantParams p;
    PlantState s;
    s.theta = p.theta_capsize;
    EXPECT_THROW(derivatives(s, PlantInputs{}, p), CapsizeError);
    s.theta = -p.theta_capsize - 0.1;
    EXPECT_THROW(derivatives(s, PlantInputs{}, p), CapsizeError);

    PlantInputs bad;
    bad.u_gamma = std::nan("");
    EXPECT_THROW(derivatives(PlantState{}, bad, p), DomainError);
    PlantState bad_state;
    bad_state.v = INFINITY;
    EXPECT_THROW(derivatives(bad_state, PlantInputs{}, p), DomainError);
}

TEST(PlantDerivatives, CommandsAreSaturatedInsideThePlant) {
    const PlantParams p;
    PlantInputs in;
    in.u_gamma = 1e6;
    in.beta_cmd = 10.0;
    in.v_cmd = 100.0;
    const PlantStateRate d = derivatives(PlantState{}, in, p);
    EXPECT_DOUBLE_EQ(d.omega_w, p.u_gamma_max / p.J_w);
    EXPECT_DOUBLE_EQ(d.beta_dot, p.k_ps * p.beta_max);
    EXPECT_DOUBLE_EQ(d.v, p.v_max / p.tau_v);
}

TEST(PlantDerivatives, WheelSpeedLimitBlocksSameSignTorqueOnly) {
    const PlantParams p;
    PlantState s;
    s.omega_w = p.omega_w_max;
    const PlantStateRate idle = derivatives(s, PlantInputs{}, p);

    const PlantStateRate pushed = derivatives(s, PlantInputs{0, 0, 10.0, 0}, p);
    EXPECT_EQ(pushed.omega_w, 0.0);
    EXPECT_EQ(pushed.theta_dot, idle.theta_dot);

    const PlantStateRate braked = derivatives(s, PlantInputs{0, 0, -10.0, 0}, p);
    EXPECT_DOUBLE_EQ(braked.omega_w, -10.0 / p.J_w);
    EXPECT_DOUBLE_EQ(braked.theta_dot, idle.theta_dot + 10.0 / p.J_roll);
}

TEST(PlantStep, ZeroStateStaysZero) {
    EXPECT_EQ(step_rk4(PlantState{}, PlantInputs{}, PlantParams{}, 1e-3), PlantState{});
}

TEST(PlantStep, RejectsBadStep) {
    EXPECT_THROW(step_rk4(PlantState{}, PlantInputs{}, PlantParams{}, 0.0), DomainError);
    EXPECT_THROW(step_rk4(PlantState{}, PlantInputs{}, PlantParams{}, 0.011), DomainError);
    EXPECT_NO_THROW(step_rk4(PlantState{}, PlantInputs{}, PlantParams{}, 0.010));
}

TEST(PlantStep, IsBitwiseDeterministic) {
    PlantState s{0.1, -0.3, 0.2, 0.5, 12.0, 2.0};
    const PlantInputs in{3.0, 0.4, 7.5, -12.0};
    const PlantParams p;
    const PlantState a = step_rk4(s, in, p, 1e-3);
    const PlantState b = step_rk4(s, in, p, 1e-3);
    EXPECT_EQ(std::memcmp(&a, &b, sizeof a), 0);
}

TEST(PlantStep, ClampsWheelSpeed) {
    const PlantParams p;
    PlantState s;
    s.omega_w = p.omega_w_max - 1e-3;
    const PlantState next = step_rk4(s, PlantInputs{0, 0, p.u_gamma_max, 0}, p, 1e-2);
    EXPECT_LE(next.omega_w, p.omega_w_max);
}

TEST(PlantStep, CapsizeCarriesTheOffendingState) {
    const PlantParams p;
    PlantState s;
    s.theta = 0.99;
    s.theta_dot = 5.0;
    try {
        step_rk4(s, PlantInputs{}, p, 1e-2);
        FAIL() << "expected capsize";
    } catch (const CapsizeError& e) {
        EXPECT_GE(std::abs(e.state().theta), p.theta_capsize);
    }
}

TEST(PlantStep, FreePendulumPeriodMatchesServoStiffness) {
    PlantParams p;
    p.g = 0.0;  // roll decoupled from the pendulum
    p.k_ds = 0.0;
    PlantState s;
    s.beta = 0.05;
    constexpr double dt = 1e-3;
    std::vector<double> downward_crossings;
    double t = 0.0;
    for (int k = 0; k < 5000; ++k) {
        const PlantState next = step_rk4(s, PlantInputs{}, p, dt);
        if (s.beta > 0.0 && next.beta <= 0.0) {
            downward_crossings.push_back(t + dt * s.beta / (s.beta - next.beta));
        }
        s = next;
        t += dt;
    }
    ASSERT_GE(downward_crossings.size(), 3u);
    const double period = (downward_crossings.back() - downward_crossings.front()) /
                          static_cast<double>(downward_crossings.size() - 1);
    const double expected = 2.0 * std::numbers::pi / std::sqrt(p.k_ps);
    EXPECT_NEAR(period / expected, 1.0, 1e-3);
}

TEST(PlantStep, FourthOrderConvergence) {
    PlantParams p;
    p.g = 0.0;
    p.k_ds = 0.0;
    // Analytic solution of beta'' = -k beta from beta(0) = 0.1.
    const double horizon = 2.0;
    const double exact = 0.1 * std::cos(std::sqrt(p.k_ps) * horizon);
    const auto endpoint = [&](double dt) {
        PlantState s;
        s.beta = 0.1;
        for (long k = 0; k < std::lround(horizon / dt); ++k) s = step_rk4(s, PlantInputs{}, p, dt);
        return s.beta;
    };
    const double ratio = std::abs(endpoint(1e-3) - exact) / std::abs(endpoint(5e-4) - exact);
    EXPECT_GE(ratio, 12.0);
    EXPECT_LE(ratio, 20.0);
}

TEST(EquilibriumBeta, TrivialCases) {
    const PlantParams p;
    EXPECT_NEAR(equilibrium_beta(0.0, 3.0, p), 0.0, 1e-10);
    EXPECT_NEAR(equilibrium_beta(0.26, 0.0, p), 0.26, 1e-10);
}

TEST(EquilibriumBeta, MatchesClosedFormAndZeroesRollAcceleration) {
    const PlantParams p;
    const double beta = equilibrium_beta(0.26, 1.0, p);
    EXPECT_NEAR(beta, closed_form_beta(0.26, 1.0, p), 1e-9);
    EXPECT_NEAR(beta, 0.4806, 2e-4);
    PlantState s{0.26, 0.0, beta, 0.0, 0.0, 1.0};
    EXPECT_LT(std::abs(derivatives(s, PlantInputs{}, p).theta_dot), 1e-9);
}

TEST(EquilibriumBeta, InfeasibleLeanIsADistinctError) {
    const PlantParams p;
    EXPECT_THROW(equilibrium_beta(0.26, 3.0, p), InfeasibleLeanError);
    EXPECT_THROW(equilibrium_beta(-0.26, 3.0, p), InfeasibleLeanError);
    EXPECT_THROW(equilibrium_beta(1.2, 0.0, p), DomainError);
}

TEST(EquilibriumBeta, PropertyAgreesWithClosedFormOnFeasibleDomain) {
    const PlantParams p;
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> theta_dist(-0.6, 0.6), v_dist(0.0, 4.0);
    int checked = 0;
    while (checked < 500) {
        const double theta = theta_dist(gen), v = v_dist(gen);
        if (std::abs(p.M * v * v * std::tan(theta) / p.pendulum_moment()) > 0.9) continue;
        EXPECT_NEAR(equilibrium_beta(theta, v, p), closed_form_beta(theta, v, p), 1e-6)
            << "theta=" << theta << " v=" << v;
        ++checked;
    }
}

TEST(Diagnostics, RestValues) {
    const PlantParams p;
    EXPECT_DOUBLE_EQ(roll_energy(PlantState{}, p), -p.m * p.g * p.l);
    EXPECT_DOUBLE_EQ(roll_momentum(PlantState{}, p), 0.0);
    PlantState spin;
    spin.theta_dot = 1.0;
    EXPECT_DOUBLE_EQ(roll_momentum(spin, p), p.J_roll);
}

TEST(Conservation, MomentumUnderArbitraryWheelTorque) {
    PlantParams p;
    p.g = 0.0;
    p.c_theta = 0.0;
    for (std::uint64_t seed : {1u, 2u, 3u, 4u}) {
        std::mt19937_64 gen(seed);
        std::uniform_real_distribution<double> torque(-p.u_gamma_max, p.u_gamma_max);
        PlantState s;
        double u = 0.0;
        for (int k = 0; k < 10000; ++k) {
            // Each random pulse is followed by its mirror so the frame does not
            // wander into a capsize.
            if (k % 20 == 0) u = torque(gen) * 0.2;
            if (k % 20 == 10) u = -u;
            const double before = roll_momentum(s, p);
            s = step_rk4(s, PlantInputs{0, 0, u, 0}, p, 1e-3);
            ASSERT_LT(std::abs(roll_momentum(s, p) - before), 1e-9) << "seed " << seed;
        }
    }
}

TEST(Conservation, EnergyWithFrozenPendulum) {
    PlantParams p;
    p.c_theta = 0.0;
    p.k_ps = 0.0;
    p.k_ds = 0.0;
    PlantState s;
    s.theta = 0.3;
    s.beta = 0.05;
    const double e0 = roll_energy(s, p);
    for (int k = 0; k < 10000; ++k) {
        s = step_rk4(s, PlantInputs{}, p, 1e-3);
        ASSERT_LT(std::abs(roll_energy(s, p) - e0) / std::abs(e0), 1e-6);
    }
    EXPECT_EQ(s.beta, 0.05);
}

TEST(PlantParams, ValidationNamesTheKey) {
    PlantParams p;
    p.m = -1.0;
    try {
        p.validate();
        FAIL();
    } catch (const DomainError& e) {
        EXPECT_NE(std::string(e.what()).find("plant.m"), std::string::npos);
    }
    PlantParams q;
    q.l = 0.5;
    EXPECT_THROW(q.validate(), DomainError);
    PlantParams r;
    r.theta_capsize = 1.6;
    EXPECT_THROW(r.validate(), DomainError);
    EXPECT_NO_THROW(PlantParams{}.validate());
}

TEST(PlantParams, WheelInertiaFromDiameter) {
    EXPECT_NEAR(PlantParams{}.J_w, 0.5 * 9.8 * 0.21 * 0.21, 1e-15);
    EXPECT_NEAR(PlantParams{}.J_w, 0.216, 1e-3);
}
