#include <rotunsim/experiments.hpp>

#include <cmath>
#include <future>
#include <limits>
#include <numbers>
#include <sstream>

namespace rotunsim {

namespace {

std::string speed_label(double speed) {
    std::ostringstream os;
    os << speed;
    return os.str();
}

DisturbanceSpec band_noise(double t_start, double t_end, double magnitude, double cutoff_hz) {
    return DisturbanceSpec{DisturbanceKind::band_noise, t_start, t_end, magnitude, cutoff_hz};
}

}  // namespace

Scenario scenario_e1(double speed) {
    Scenario s;
    s.name = "e1_v" + speed_label(speed);
    s.duration = kE1Duration;
    s.timeline = {
        {0.0, speed, 0.0},
        {kE1StepWindow.t_start, speed, kE1RollStep},
        {kE1StepWindow.t_end, speed, 0.0},
    };
    return s;
}

std::vector<Scenario> scenario_e2(const PlantParams& params) {
    // Surface roughness as low-passed roll torque noise. Magnitudes are the
    // white-noise standard deviation before the filter.
    struct Surface {
        const char* name;
        double magnitude;
        double cutoff_hz;
    };
    constexpr Surface kSurfaces[] = {
        {"grass", 400.0, 3.0},
        {"track", 150.0, 5.0},
        {"slope", 200.0, 4.0},
        {"turf", 450.0, 6.0},
    };

    std::vector<Scenario> out;
    for (std::size_t i = 0; i < std::size(kSurfaces); ++i) {
        const Surface& surface = kSurfaces[i];
        Scenario s;
        s.name = std::string("e2_") + surface.name;
        s.duration = kE2Duration;
        s.seed = kDefaultSeed + i;
        s.timeline = {{0.0, kE2Speed, 0.0}};
        s.disturbances.push_back(band_noise(0.0, kE2Duration, surface.magnitude, surface.cutoff_hz));
        if (std::string_view(surface.name) == "slope") {
            // Crossing a 10 degree side slope: a steady lateral gravity moment.
            const double torque = -params.M * params.g * params.R *
                                  std::sin(10.0 * std::numbers::pi / 180.0) * kSlopeFactor;
            s.disturbances.push_back(
                DisturbanceSpec{DisturbanceKind::constant, 2.0, kE2Duration, torque, 0.0});
        }
        out.push_back(std::move(s));
    }
    return out;
}

Scenario scenario_e3(double impulse, std::uint64_t seed) {
    Scenario s;
    s.seed = seed;
    s.name = "e3";
    s.duration = kE3Duration;
    s.timeline = {{0.0, kE3Speed, 0.0}};
    s.disturbances.push_back(DisturbanceSpec{DisturbanceKind::impulse, kE3ImpulseTime,
                                             kE3ImpulseTime + 0.01, impulse, 0.0});
    return s;
}

E3Calibration calibrate_e3(const SimConfig& config, std::uint64_t seed, double target_peak,
                           double tolerance, int max_runs) {
    E3Calibration cal;
    const auto measure_peak = [&](double impulse) {
        ++cal.runs;
        Scenario s = scenario_e3(impulse, seed);
        const Trajectory traj = run(s, config);
        if (traj.termination == Termination::capsized) return std::numeric_limits<double>::infinity();
        return compute_metrics(traj, 0.0, {kE3ImpulseTime, kE3Duration + 1.0}).peak_roll;
    };

    double lo = 0.0;
    double hi = 50.0;
    // Grow the bracket until the upper end overshoots the target.
    while (cal.runs < max_runs) {
        const double peak = measure_peak(hi);
        if (peak >= target_peak) {
            if (std::abs(peak - target_peak) < tolerance) {
                cal.impulse = hi;
                cal.peak = peak;
                cal.converged = true;
                cal.scenario = scenario_e3(hi, seed);
                return cal;
            }
            break;
        }
        lo = hi;
        hi *= 2.0;
    }
    while (cal.runs < max_runs) {
        const double mid = 0.5 * (lo + hi);
        const double peak = measure_peak(mid);
        cal.impulse = mid;
        cal.peak = peak;
        if (std::abs(peak - target_peak) < tolerance) {
            cal.converged = true;
            break;
        }
        (peak < target_peak ? lo : hi) = mid;
    }
    cal.scenario = scenario_e3(cal.impulse, seed);
    return cal;
}

Scenario scenario_e4() {
    Scenario s;
    s.name = "e4";
    s.duration = kE4Duration;
    // 1 m/s per second staircase, reaching top speed at t = 9 s.
    for (int i = 0; i < static_cast<int>(kE4TopSpeed); ++i) {
        s.timeline.push_back({static_cast<double>(i), static_cast<double>(i + 1), 0.0});
    }
    // Vibration at speed: mild, higher-frequency roll noise.
    s.disturbances.push_back(band_noise(0.0, kE4Duration, 450.0, 8.0));
    return s;
}

std::vector<ComparisonRow> compare_stability(const SimConfig& config, std::uint64_t seed) {
    constexpr double kSpeeds[] = {1.0, 2.0, 3.0};
    SimConfig with_wheel = config;
    with_wheel.control.mode = ControlMode::with_wheel;
    SimConfig baseline = config;
    baseline.control.mode = ControlMode::baseline_no_wheel;

    struct Pending {
        double speed;
        std::future<Trajectory> wheel;
        std::future<Trajectory> base;
    };
    std::vector<Pending> pending;
    for (double speed : kSpeeds) {
        Scenario s = scenario_e1(speed);
        s.seed = seed;
        pending.push_back({speed, std::async(std::launch::async, [s, with_wheel] { return run(s, with_wheel); }),
                           std::async(std::launch::async, [s, baseline] { return run(s, baseline); })});
    }

    std::vector<ComparisonRow> rows;
    for (auto& p : pending) {
        const Trajectory wheel = p.wheel.get();
        const Trajectory base = p.base.get();
        ComparisonRow row;
        row.speed = p.speed;
        row.metrics_with_wheel = compute_metrics(wheel, kE1RollStep, kE1StepWindow);
        row.metrics_baseline = compute_metrics(base, kE1RollStep, kE1StepWindow);
        const MetricWindow post{kE1PostStepWindow.t_start, kE1PostStepWindow.t_end + 1e-6};
        row.post_step_with_wheel = compute_metrics(wheel, 0.0, post);
        row.post_step_baseline = compute_metrics(base, 0.0, post);
        rows.push_back(row);
    }
    return rows;
}

double recovery_time(const Trajectory& traj, double t_from, double band) {
    double recovered_at = t_from;
    for (const auto& r : traj.records) {
        if (r.t < t_from - 1e-9) continue;
        if (std::abs(r.theta) >= band) recovered_at = std::numeric_limits<double>::infinity();
        else if (std::isinf(recovered_at)) recovered_at = r.t;
    }
    return recovered_at - t_from;
}

Scenario builtin_scenario(const std::string& name, const SimConfig& config) {
    if (name.rfind("e1:", 0) == 0) {
        const std::string speed = name.substr(3);
        try {
            std::size_t used = 0;
            const double v = std::stod(speed, &used);
            if (used == speed.size()) return scenario_e1(v);
        } catch (const std::exception&) {
        }
        throw DomainError("bad e1 speed in '" + name + "'");
    }
    if (name.rfind("e2:", 0) == 0) {
        for (auto& s : scenario_e2(config.plant)) {
            if (s.name == "e2_" + name.substr(3)) return s;
        }
        throw DomainError("unknown e2 surface in '" + name + "'");
    }
    if (name == "e3") return calibrate_e3(config).scenario;
    if (name == "e4") return scenario_e4();
    throw DomainError("unknown builtin scenario '" + name + "'");
}

}  // namespace rotunsim
