#include <rotunsim/config.hpp>
#include <rotunsim/scenario_io.hpp>

#include <charconv>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

namespace rotunsim {

namespace {

struct PartialSegment {
    std::optional<double> t, v_hope, theta_hope;
};

struct PartialDisturbance {
    std::optional<DisturbanceKind> kind;
    std::optional<double> t_start, t_end, magnitude;
    double noise_cutoff = 0.0;
};

std::uint64_t parse_seed(std::string_view text, int line) {
    std::uint64_t value = 0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end || text.empty()) {
        throw ParseError(line, "seed must be an unsigned 64-bit integer");
    }
    return value;
}

/// Splits "prefix.<index>.<field>"; returns false if the key is not of that shape.
bool split_indexed(std::string_view key, std::string_view prefix, std::size_t& index,
                   std::string_view& field) {
    if (key.substr(0, prefix.size()) != prefix) return false;
    const std::string_view rest = key.substr(prefix.size());
    const auto dot = rest.find('.');
    if (dot == std::string_view::npos || dot == 0) return false;
    const auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + dot, index);
    if (ec != std::errc{} || ptr != rest.data() + dot) return false;
    field = rest.substr(dot + 1);
    return true;
}

DisturbanceKind parse_kind(std::string_view text, int line) {
    if (text == "impulse") return DisturbanceKind::impulse;
    if (text == "band_noise") return DisturbanceKind::band_noise;
    if (text == "constant") return DisturbanceKind::constant;
    throw ParseError(line, "disturbance kind must be impulse, band_noise or constant");
}

template <typename Map>
void require_contiguous(const Map& map, const char* what) {
    std::size_t expected = 0;
    for (const auto& [index, _] : map) {
        if (index != expected) {
            throw DomainError(std::string(what) + "." + std::to_string(expected) + " is missing");
        }
        ++expected;
    }
}

template <typename T>
T required(const std::optional<T>& value, const std::string& key) {
    if (!value) throw DomainError("missing key '" + key + "'");
    return *value;
}

}  // namespace

Scenario parse_scenario(std::string_view text) {
    Scenario s;
    std::optional<double> duration;
    std::map<std::size_t, PartialSegment> segments;
    std::map<std::size_t, PartialDisturbance> disturbances;

    for (const auto& kv : parse_key_values(text)) {
        const std::string_view key = kv.key;
        std::size_t index = 0;
        std::string_view field;
        try {
            if (key == "name") {
                s.name = kv.value;
            } else if (key == "duration") {
                duration = parse_double(kv.value, key);
            } else if (key == "seed") {
                s.seed = parse_seed(kv.value, kv.line);
            } else if (key.substr(0, 9) == "override.") {
                const std::string config_key(key.substr(9));
                SimConfig probe;
                apply_config_key(probe, config_key, kv.value);
                s.overrides.push_back({config_key, kv.value});
            } else if (split_indexed(key, "timeline.", index, field)) {
                auto& seg = segments[index];
                const double x = parse_double(kv.value, key);
                if (field == "t") {
                    seg.t = x;
                } else if (field == "v_hope") {
                    seg.v_hope = x;
                } else if (field == "theta_hope") {
                    seg.theta_hope = x;
                } else {
                    throw DomainError("unknown key '" + kv.key + "'");
                }
            } else if (split_indexed(key, "disturbance.", index, field)) {
                auto& d = disturbances[index];
                if (field == "kind") {
                    d.kind = parse_kind(kv.value, kv.line);
                } else if (field == "t_start") {
                    d.t_start = parse_double(kv.value, key);
                } else if (field == "t_end") {
                    d.t_end = parse_double(kv.value, key);
                } else if (field == "magnitude") {
                    d.magnitude = parse_double(kv.value, key);
                } else if (field == "noise_cutoff") {
                    d.noise_cutoff = parse_double(kv.value, key);
                } else {
                    throw DomainError("unknown key '" + kv.key + "'");
                }
            } else {
                throw DomainError("unknown key '" + kv.key + "'");
            }
        } catch (const ParseError&) {
            throw;
        } catch (const DomainError& e) {
            throw ParseError(kv.line, e.what());
        }
    }

    s.duration = required(duration, "duration");
    require_contiguous(segments, "timeline");
    require_contiguous(disturbances, "disturbance");
    for (const auto& [i, seg] : segments) {
        const std::string prefix = "timeline." + std::to_string(i) + ".";
        s.timeline.push_back({required(seg.t, prefix + "t"), required(seg.v_hope, prefix + "v_hope"),
                              required(seg.theta_hope, prefix + "theta_hope")});
    }
    for (const auto& [i, d] : disturbances) {
        const std::string prefix = "disturbance." + std::to_string(i) + ".";
        s.disturbances.push_back({required(d.kind, prefix + "kind"),
                                  required(d.t_start, prefix + "t_start"),
                                  required(d.t_end, prefix + "t_end"),
                                  required(d.magnitude, prefix + "magnitude"), d.noise_cutoff});
    }
    s.validate();
    return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
    return parse_scenario(read_text_file(path));
}

std::string format_scenario(const Scenario& s) {
    std::ostringstream os;
    if (!s.name.empty()) os << "name = " << s.name << '\n';
    os << "duration = " << format_double(s.duration) << '\n';
    os << "seed = " << s.seed << '\n';
    for (std::size_t i = 0; i < s.timeline.size(); ++i) {
        const std::string p = "timeline." + std::to_string(i) + ".";
        os << p << "t = " << format_double(s.timeline[i].t_start) << '\n'
           << p << "v_hope = " << format_double(s.timeline[i].v_hope) << '\n'
           << p << "theta_hope = " << format_double(s.timeline[i].theta_hope) << '\n';
    }
    for (std::size_t i = 0; i < s.disturbances.size(); ++i) {
        const auto& d = s.disturbances[i];
        const std::string p = "disturbance." + std::to_string(i) + ".";
        os << p << "kind = " << to_string(d.kind) << '\n'
           << p << "t_start = " << format_double(d.t_start) << '\n'
           << p << "t_end = " << format_double(d.t_end) << '\n'
           << p << "magnitude = " << format_double(d.magnitude) << '\n'
           << p << "noise_cutoff = " << format_double(d.noise_cutoff) << '\n';
    }
    for (const auto& o : s.overrides) os << "override." << o.key << " = " << o.value << '\n';
    return os.str();
}

void save_scenario(const Scenario& scenario, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DomainError("cannot write '" + path.string() + "'");
    out << format_scenario(scenario);
}

}  // namespace rotunsim
