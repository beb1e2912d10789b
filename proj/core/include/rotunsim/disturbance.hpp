#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace rotunsim {

enum class DisturbanceKind { impulse, band_noise, constant };

/// A roll torque applied over [t_start, t_end). For impulses `magnitude` is
/// the angular impulse in N m s, delivered during the single physics step that
/// starts at t_start; otherwise it is a torque in N m (band noise: standard
/// deviation of the white noise before the low-pass filter).
struct DisturbanceSpec {
    DisturbanceKind kind = DisturbanceKind::constant;
    double t_start = 0.0;
    double t_end = 0.0;
    double magnitude = 0.0;
    double noise_cutoff = 0.0;  ///< Hz, band_noise only

    friend bool operator==(const DisturbanceSpec&, const DisturbanceSpec&) = default;
};

const char* to_string(DisturbanceKind kind);

/// Low-passed white noise on a fixed step grid. The white samples come from
/// the counter-based generator keyed on (seed, index, step); the first-order
/// filter state starts at zero on the window's first step. Calls must visit
/// steps in increasing order.
class BandNoise {
public:
    BandNoise(const DisturbanceSpec& spec, std::uint64_t seed, std::uint64_t index, double dt);

    /// Torque for the step starting at step * dt; zero outside the window.
    double sample(std::int64_t step);

    /// Filter pole a = exp(-2 pi f_c dt).
    double pole() const { return pole_; }

private:
    DisturbanceSpec spec_;
    std::uint64_t seed_;
    std::uint64_t index_;
    std::int64_t first_step_;
    std::int64_t end_step_;
    double pole_;
    double state_ = 0.0;
    std::int64_t last_step_ = -1;
};

/// Sum of all configured disturbances, evaluated step by step.
class DisturbanceSet {
public:
    DisturbanceSet(std::span<const DisturbanceSpec> specs, std::uint64_t seed, double dt);

    /// Total roll torque, N m, for the physics step [step*dt, (step+1)*dt).
    double torque(std::int64_t step);

private:
    struct Entry {
        DisturbanceSpec spec;
        std::int64_t first_step;
        std::int64_t end_step;
        std::vector<BandNoise> noise;  // holds one generator for band_noise entries
    };
    std::vector<Entry> entries_;
    double dt_;
};

/// Step index that contains time t on a grid of width dt (round to nearest).
std::int64_t step_index(double t, double dt);

}  // namespace rotunsim
