#include <rotunsim/metrics.hpp>

#include <algorithm>
#include <cmath>

namespace rotunsim {

double settling_band(double target) { return target != 0.0 ? 0.1 * std::abs(target) : 0.02; }

Metrics compute_metrics(const Trajectory& traj, double target, MetricWindow window) {
    std::vector<const TelemetryRecord*> in;
    for (const auto& r : traj.records) {
        if (r.t >= window.t_start - 1e-9 && r.t < window.t_end - 1e-9) in.push_back(&r);
    }
    if (in.empty()) throw DomainError("compute_metrics: no records in the window");

    const double t0 = window.t_start;
    const double t_last = in.back()->t;
    const double horizon = std::isfinite(window.t_end) ? window.t_end - t0 : t_last - t0;

    Metrics m;
    m.capsized = traj.termination == Termination::capsized;

    double sum_sq = 0.0;
    double extreme = in.front()->theta;  // furthest excursion in the target's direction
    for (const auto* r : in) {
        m.peak_roll = std::max(m.peak_roll, std::abs(r->theta));
        const double e = r->theta - target;
        sum_sq += e * e;
        extreme = target >= 0.0 ? std::max(extreme, r->theta) : std::min(extreme, r->theta);
    }
    m.rms_roll_err = std::sqrt(sum_sq / static_cast<double>(in.size()));

    if (target != 0.0) {
        const double past = target > 0.0 ? extreme - target : target - extreme;
        m.overshoot_frac = std::max(0.0, past / std::abs(target));
    }

    const double start_value = in.front()->theta;
    const double step = target - start_value;
    if (step == 0.0) {
        m.rise_time_90 = 0.0;
    } else {
        m.rise_time_90 = horizon;
        for (const auto* r : in) {
            if ((r->theta - start_value) / step >= 0.9) {
                m.rise_time_90 = r->t - t0;
                break;
            }
        }
    }

    const double band = settling_band(target);
    m.settling_time = 0.0;
    for (std::size_t i = in.size(); i-- > 0;) {
        if (std::abs(in[i]->theta - target) > band) {
            m.settling_time = i + 1 < in.size() ? in[i + 1]->t - t0 : horizon;
            break;
        }
    }
    return m;
}

}  // namespace rotunsim
