#include <rotunsim/disturbance.hpp>
#include <rotunsim/random.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace rotunsim {

const char* to_string(DisturbanceKind kind) {
    switch (kind) {
    case DisturbanceKind::impulse: return "impulse";
    case DisturbanceKind::band_noise: return "band_noise";
    case DisturbanceKind::constant: return "constant";
    }
    return "?";
}

std::int64_t step_index(double t, double dt) { return std::llround(t / dt); }

BandNoise::BandNoise(const DisturbanceSpec& spec, std::uint64_t seed, std::uint64_t index,
                     double dt)
    : spec_(spec),
      seed_(seed),
      index_(index),
      first_step_(step_index(spec.t_start, dt)),
      end_step_(step_index(spec.t_end, dt)),
      pole_(std::exp(-2.0 * std::numbers::pi * spec.noise_cutoff * dt)) {}

double BandNoise::sample(std::int64_t step) {
    if (step < first_step_ || step >= end_step_ || spec_.magnitude == 0.0) return 0.0;
    // Catch up on any skipped steps so the stream does not depend on the
    // caller's sampling pattern.
    std::int64_t k = std::max(last_step_ + 1, first_step_);
    for (; k <= step; ++k) {
        const double white = spec_.magnitude *
                             rng::standard_normal(seed_, index_, static_cast<std::uint64_t>(k));
        state_ = pole_ * state_ + (1.0 - pole_) * white;
    }
    last_step_ = std::max(last_step_, step);
    return state_;
}

DisturbanceSet::DisturbanceSet(std::span<const DisturbanceSpec> specs, std::uint64_t seed,
                               double dt)
    : dt_(dt) {
    entries_.reserve(specs.size());
    for (std::size_t i = 0; i < specs.size(); ++i) {
        Entry e{specs[i], step_index(specs[i].t_start, dt), step_index(specs[i].t_end, dt), {}};
        if (specs[i].kind == DisturbanceKind::band_noise) {
            e.noise.emplace_back(specs[i], seed, static_cast<std::uint64_t>(i), dt);
        }
        entries_.push_back(std::move(e));
    }
}

double DisturbanceSet::torque(std::int64_t step) {
    double total = 0.0;
    for (auto& e : entries_) {
        switch (e.spec.kind) {
        case DisturbanceKind::impulse:
            if (step == e.first_step) total += e.spec.magnitude / dt_;
            break;
        case DisturbanceKind::constant:
            if (step >= e.first_step && step < e.end_step) total += e.spec.magnitude;
            break;
        case DisturbanceKind::band_noise:
            total += e.noise.front().sample(step);
            break;
        }
    }
    return total;
}

}  // namespace rotunsim
