#include <rotunsim/config.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace rotunsim {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        parts.push_back(s.substr(start, pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return parts;
}

std::size_t parse_index(std::string_view text, std::string_view key) {
    std::size_t value = 0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end || text.empty()) {
        throw DomainError(std::string(key) + ": bad index '" + std::string(text) + "'");
    }
    return value;
}

GainSegment& segment_at(GainSchedule& schedule, std::size_t index, std::string_view key) {
    auto& segments = schedule.segments();
    if (index == segments.size()) segments.emplace_back();
    if (index > segments.size()) {
        throw DomainError(std::string(key) + ": segment index skips entries");
    }
    return segments[index];
}

void apply_schedule_key(GainSchedule& schedule, const std::vector<std::string_view>& parts,
                        std::string_view second_gain, std::string_view key,
                        std::string_view value) {
    // parts = {control, pendulum|wheel, <index>|segments, field?}
    if (parts.size() == 3 && parts[2] == "segments") {
        const std::size_t n = parse_index(trim(value), key);
        if (n == 0) throw DomainError(std::string(key) + " must be at least 1");
        schedule.segments().resize(n);
        return;
    }
    if (parts.size() != 4) throw DomainError("unknown key '" + std::string(key) + "'");
    GainSegment& seg = segment_at(schedule, parse_index(parts[2], key), key);
    const double x = parse_double(value, key);
    if (parts[3] == "threshold") {
        seg.threshold = x;
    } else if (parts[3] == "kp") {
        seg.kp = x;
    } else if (parts[3] == second_gain) {
        seg.gain2 = x;
    } else {
        throw DomainError("unknown key '" + std::string(key) + "'");
    }
}

}  // namespace

std::vector<KeyValue> parse_key_values(std::string_view text) {
    std::vector<KeyValue> out;
    std::set<std::string, std::less<>> seen;
    int line_no = 0;
    for (std::string_view raw : split(text, '\n')) {
        ++line_no;
        if (const auto hash = raw.find('#'); hash != std::string_view::npos) {
            raw = raw.substr(0, hash);
        }
        const std::string_view line = trim(raw);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ParseError(line_no, "expected 'key = value'");
        const std::string_view key = trim(line.substr(0, eq));
        const std::string_view value = trim(line.substr(eq + 1));
        if (key.empty()) throw ParseError(line_no, "empty key");
        if (!seen.insert(std::string(key)).second) {
            throw ParseError(line_no, "duplicate key '" + std::string(key) + "'");
        }
        out.push_back(KeyValue{line_no, std::string(key), std::string(value)});
    }
    return out;
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DomainError("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

double parse_double(std::string_view text, std::string_view key) {
    text = trim(text);
    if (text == "inf" || text == "+inf") return std::numeric_limits<double>::infinity();
    if (text == "-inf") return -std::numeric_limits<double>::infinity();
    double value = 0.0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end || text.empty() || std::isnan(value)) {
        throw DomainError(std::string(key) + ": expected a number, got '" + std::string(text) +
                          "'");
    }
    return value;
}

bool parse_bool(std::string_view text, std::string_view key) {
    text = trim(text);
    if (text == "true" || text == "1") return true;
    if (text == "false" || text == "0") return false;
    throw DomainError(std::string(key) + ": expected true or false");
}

const char* to_string(ControlMode mode) {
    return mode == ControlMode::with_wheel ? "with_wheel" : "baseline_no_wheel";
}

void apply_config_key(SimConfig& config, std::string_view key, std::string_view value) {
    const auto parts = split(key, '.');
    const auto unknown = [&] { return DomainError("unknown key '" + std::string(key) + "'"); };

    if (parts.size() == 2 && parts[0] == "plant") {
        PlantParams& p = config.plant;
        const std::string_view f = parts[1];
        double* target = f == "M"               ? &p.M
                         : f == "m"             ? &p.m
                         : f == "R"             ? &p.R
                         : f == "l"             ? &p.l
                         : f == "d_w"           ? &p.d_w
                         : f == "g"             ? &p.g
                         : f == "J_roll"        ? &p.J_roll
                         : f == "J_w"           ? &p.J_w
                         : f == "c_theta"       ? &p.c_theta
                         : f == "tau_v"         ? &p.tau_v
                         : f == "k_ps"          ? &p.k_ps
                         : f == "k_ds"          ? &p.k_ds
                         : f == "beta_max"      ? &p.beta_max
                         : f == "omega_w_max"   ? &p.omega_w_max
                         : f == "u_gamma_max"   ? &p.u_gamma_max
                         : f == "v_max"         ? &p.v_max
                         : f == "theta_capsize" ? &p.theta_capsize
                                                : nullptr;
        if (target == nullptr) throw unknown();
        *target = parse_double(value, key);
        return;
    }

    if (parts.size() >= 2 && parts[0] == "control") {
        ControlConfig& c = config.control;
        if (parts.size() == 2) {
            if (parts[1] == "mode") {
                const std::string_view v = trim(value);
                if (v == "with_wheel") {
                    c.mode = ControlMode::with_wheel;
                } else if (v == "baseline_no_wheel") {
                    c.mode = ControlMode::baseline_no_wheel;
                } else {
                    throw DomainError(std::string(key) +
                                      ": expected with_wheel or baseline_no_wheel");
                }
            } else if (parts[1] == "integral_clamp") {
                c.integral_clamp = parse_double(value, key);
            } else if (parts[1] == "rate_filter_alpha") {
                c.rate_filter_alpha = parse_double(value, key);
            } else if (parts[1] == "baseline_kd") {
                c.baseline_kd = parse_double(value, key);
            } else {
                throw unknown();
            }
            return;
        }
        if (parts[1] == "pendulum") {
            apply_schedule_key(c.pendulum_schedule, parts, "ki", key, value);
            return;
        }
        if (parts[1] == "wheel") {
            apply_schedule_key(c.wheel_schedule, parts, "kd", key, value);
            return;
        }
        throw unknown();
    }

    if (parts.size() == 2 && parts[0] == "measurement") {
        MeasurementModel& m = config.measurement;
        if (parts[1] == "enabled") {
            m.enabled = parse_bool(value, key);
        } else if (parts[1] == "theta_noise_std") {
            m.theta_noise_std = parse_double(value, key);
        } else if (parts[1] == "rate_noise_std") {
            m.rate_noise_std = parse_double(value, key);
        } else {
            throw unknown();
        }
        return;
    }
    throw unknown();
}

SimConfig parse_config(std::string_view text, const SimConfig& base) {
    SimConfig config = base;
    bool diameter_set = false;
    bool inertia_set = false;
    for (const auto& kv : parse_key_values(text)) {
        try {
            apply_config_key(config, kv.key, kv.value);
        } catch (const ParseError&) {
            throw;
        } catch (const DomainError& e) {
            throw ParseError(kv.line, e.what());
        }
        diameter_set = diameter_set || kv.key == "plant.d_w";
        inertia_set = inertia_set || kv.key == "plant.J_w";
    }
    if (diameter_set && !inertia_set) {
        config.plant.J_w = PlantParams::wheel_inertia_from_diameter(config.plant.d_w);
    }
    config.validate();
    return config;
}

SimConfig load_config(const std::filesystem::path& path) {
    return parse_config(read_text_file(path));
}

SimConfig apply_overrides(const SimConfig& base, std::span<const ConfigOverride> overrides) {
    SimConfig config = base;
    bool diameter_set = false;
    bool inertia_set = false;
    for (const auto& o : overrides) {
        apply_config_key(config, o.key, o.value);
        diameter_set = diameter_set || o.key == "plant.d_w";
        inertia_set = inertia_set || o.key == "plant.J_w";
    }
    if (diameter_set && !inertia_set) {
        config.plant.J_w = PlantParams::wheel_inertia_from_diameter(config.plant.d_w);
    }
    config.validate();
    return config;
}

std::string format_double(double value) {
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

std::string format_config(const SimConfig& config) {
    std::ostringstream os;
    const auto put = [&](const std::string& key, const std::string& value) {
        os << key << " = " << value << '\n';
    };
    const auto num = [&](const std::string& key, double value) { put(key, format_double(value)); };

    const PlantParams& p = config.plant;
    num("plant.M", p.M);
    num("plant.m", p.m);
    num("plant.R", p.R);
    num("plant.l", p.l);
    num("plant.d_w", p.d_w);
    num("plant.g", p.g);
    num("plant.J_roll", p.J_roll);
    num("plant.J_w", p.J_w);
    num("plant.c_theta", p.c_theta);
    num("plant.tau_v", p.tau_v);
    num("plant.k_ps", p.k_ps);
    num("plant.k_ds", p.k_ds);
    num("plant.beta_max", p.beta_max);
    num("plant.omega_w_max", p.omega_w_max);
    num("plant.u_gamma_max", p.u_gamma_max);
    num("plant.v_max", p.v_max);
    num("plant.theta_capsize", p.theta_capsize);

    const ControlConfig& c = config.control;
    put("control.mode", to_string(c.mode));
    num("control.integral_clamp", c.integral_clamp);
    num("control.rate_filter_alpha", c.rate_filter_alpha);
    num("control.baseline_kd", c.baseline_kd);
    const auto schedule = [&](const std::string& name, const GainSchedule& s, const char* g2) {
        put("control." + name + ".segments", std::to_string(s.segments().size()));
        for (std::size_t i = 0; i < s.segments().size(); ++i) {
            const std::string prefix = "control." + name + "." + std::to_string(i) + ".";
            num(prefix + "threshold", s.segments()[i].threshold);
            num(prefix + "kp", s.segments()[i].kp);
            num(prefix + g2, s.segments()[i].gain2);
        }
    };
    schedule("pendulum", c.pendulum_schedule, "ki");
    schedule("wheel", c.wheel_schedule, "kd");

    const MeasurementModel& m = config.measurement;
    put("measurement.enabled", m.enabled ? "true" : "false");
    num("measurement.theta_noise_std", m.theta_noise_std);
    num("measurement.rate_noise_std", m.rate_noise_std);
    return os.str();
}

}  // namespace rotunsim
