#pragma once

#include <rotunsim/sim.hpp>

#include <limits>

namespace rotunsim {

/// Half-open time window [t_start, t_end) over trajectory records.
struct MetricWindow {
    double t_start = 0.0;
    double t_end = std::numeric_limits<double>::infinity();
};

/// Step-response summary of the roll angle inside a window. Times are
/// measured from the window start. A rise or settle that never happens is
/// reported as the window length.
struct Metrics {
    double overshoot_frac = 0.0;  ///< (peak - target) / |target| past the target, else 0
    double rise_time_90 = 0.0;    ///< first reach of 90% of the step from the window's first sample
    double settling_time = 0.0;   ///< after this, |theta - target| stays inside the band
    double peak_roll = 0.0;       ///< max |theta|
    double rms_roll_err = 0.0;    ///< sqrt(mean((theta - target)^2))
    bool capsized = false;
};

/// Settling band: 10% of a nonzero target, 0.02 rad around a zero target.
double settling_band(double target);

/// Throws DomainError if no record falls in the window.
Metrics compute_metrics(const Trajectory& traj, double target_theta, MetricWindow window = {});

}  // namespace rotunsim
