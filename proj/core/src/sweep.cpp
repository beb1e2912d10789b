#include <rotunsim/config.hpp>
#include <rotunsim/experiments.hpp>
#include <rotunsim/scenario_io.hpp>
#include <rotunsim/sweep.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <thread>

namespace rotunsim {

const char* to_string(Objective objective) {
    switch (objective) {
    case Objective::overshoot: return "overshoot";
    case Objective::settling_time: return "settling_time";
    case Objective::rms_roll_err: return "rms_roll_err";
    }
    return "?";
}

namespace {

Objective parse_objective(std::string_view text) {
    if (text == "overshoot") return Objective::overshoot;
    if (text == "settling_time") return Objective::settling_time;
    if (text == "rms_roll_err") return Objective::rms_roll_err;
    throw DomainError("objective must be overshoot, settling_time or rms_roll_err");
}

std::vector<double> parse_value_list(std::string_view text, std::string_view key) {
    std::vector<double> values;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto comma = text.find(',', start);
        const auto item = text.substr(start, comma == std::string_view::npos ? std::string_view::npos
                                                                              : comma - start);
        values.push_back(parse_double(item, key));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return values;
}

}  // namespace

SweepSpec parse_sweep_spec(std::string_view text, std::filesystem::path base_dir) {
    SweepSpec spec;
    spec.base_dir = std::move(base_dir);
    std::map<std::size_t, std::pair<std::optional<std::string>, std::optional<std::vector<double>>>>
        params;
    bool have_objective = false;

    for (const auto& kv : parse_key_values(text)) {
        const std::string_view key = kv.key;
        try {
            if (key == "scenario") {
                spec.scenario_ref = kv.value;
            } else if (key == "objective") {
                spec.objective = parse_objective(kv.value);
                have_objective = true;
            } else if (key == "target") {
                spec.target = parse_double(kv.value, key);
            } else if (key == "window.t_start") {
                spec.window.t_start = parse_double(kv.value, key);
            } else if (key == "window.t_end") {
                spec.window.t_end = parse_double(kv.value, key);
            } else if (key.substr(0, 6) == "param.") {
                const std::string_view rest = key.substr(6);
                const auto dot = rest.find('.');
                std::size_t index = 0;
                if (dot == std::string_view::npos) throw DomainError("bad key");
                const std::string digits(rest.substr(0, dot));
                if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos) {
                    throw DomainError("bad parameter index in '" + kv.key + "'");
                }
                index = std::stoul(digits);
                const std::string_view field = rest.substr(dot + 1);
                if (field == "key") {
                    SimConfig probe;
                    apply_config_key(probe, kv.value, "1");
                    params[index].first = kv.value;
                } else if (field == "values") {
                    params[index].second = parse_value_list(kv.value, key);
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

    if (spec.scenario_ref.empty()) throw DomainError("sweep spec: missing 'scenario'");
    if (!have_objective) throw DomainError("sweep spec: missing 'objective'");
    if (params.empty()) throw DomainError("sweep spec: no parameters");
    std::size_t expected = 0;
    for (auto& [index, entry] : params) {
        const std::string prefix = "param." + std::to_string(index);
        if (index != expected++) throw DomainError(prefix + ": indices must be contiguous from 0");
        if (!entry.first) throw DomainError(prefix + ".key is missing");
        if (!entry.second || entry.second->empty()) throw DomainError(prefix + ".values is empty");
        spec.parameters.push_back({*entry.first, *entry.second});
    }
    if (!(spec.window.t_end > spec.window.t_start)) {
        throw DomainError("sweep spec: window.t_end must exceed window.t_start");
    }
    return spec;
}

SweepSpec load_sweep_spec(const std::filesystem::path& path) {
    return parse_sweep_spec(read_text_file(path), path.parent_path());
}

Scenario resolve_scenario_ref(const SweepSpec& spec, const SimConfig& config) {
    constexpr std::string_view kBuiltin = "builtin:";
    if (spec.scenario_ref.rfind(kBuiltin, 0) == 0) {
        return builtin_scenario(spec.scenario_ref.substr(kBuiltin.size()), config);
    }
    std::filesystem::path path(spec.scenario_ref);
    if (path.is_relative()) path = spec.base_dir / path;
    return load_scenario(path);
}

double objective_value(const Metrics& metrics, Objective objective) {
    if (metrics.capsized) return std::numeric_limits<double>::infinity();
    switch (objective) {
    case Objective::overshoot: return metrics.overshoot_frac;
    case Objective::settling_time: return metrics.settling_time;
    case Objective::rms_roll_err: return metrics.rms_roll_err;
    }
    return std::numeric_limits<double>::infinity();
}

std::vector<SweepResult> run_sweep(const SweepSpec& spec, const Scenario& scenario,
                                   const SimConfig& config, unsigned workers) {
    // Enumerate the grid with the last parameter varying fastest.
    std::size_t total = 1;
    for (const auto& p : spec.parameters) total *= p.values.size();
    std::vector<SweepResult> results(total);
    for (std::size_t i = 0; i < total; ++i) {
        std::size_t rest = i;
        results[i].values.resize(spec.parameters.size());
        for (std::size_t j = spec.parameters.size(); j-- > 0;) {
            const auto& values = spec.parameters[j].values;
            results[i].values[j] = values[rest % values.size()];
            rest /= values.size();
        }
    }

    // Reject bad settings before spending time on any run.
    for (const auto& r : results) {
        SimConfig probe = config;
        for (std::size_t j = 0; j < r.values.size(); ++j) {
            apply_config_key(probe, spec.parameters[j].key, format_double(r.values[j]));
        }
        apply_overrides(probe, scenario.overrides);
    }

    const auto evaluate = [&](SweepResult& r) {
        SimConfig cfg = config;
        for (std::size_t j = 0; j < r.values.size(); ++j) {
            apply_config_key(cfg, spec.parameters[j].key, format_double(r.values[j]));
        }
        const Trajectory traj = run(scenario, cfg);
        r.metrics = compute_metrics(traj, spec.target, spec.window);
        r.objective = objective_value(r.metrics, spec.objective);
    };

    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, total));
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(workers);
    {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                try {
                    for (std::size_t i = next++; i < total; i = next++) evaluate(results[i]);
                } catch (...) {
                    errors[w] = std::current_exception();
                    next = total;
                }
            });
        }
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }

    std::stable_sort(results.begin(), results.end(), [](const SweepResult& a, const SweepResult& b) {
        if (a.objective != b.objective) return a.objective < b.objective;
        return a.values < b.values;
    });
    return results;
}

std::string format_sweep_csv(const SweepSpec& spec, const std::vector<SweepResult>& results) {
    std::ostringstream os;
    for (const auto& p : spec.parameters) os << p.key << ',';
    os << to_string(spec.objective) << ",capsized\n";
    char buf[32];
    for (const auto& r : results) {
        for (double v : r.values) {
            std::snprintf(buf, sizeof buf, "%.9g", v);
            os << buf << ',';
        }
        std::snprintf(buf, sizeof buf, "%.9g", r.objective);
        os << buf << ',' << (r.metrics.capsized ? 1 : 0) << '\n';
    }
    return os.str();
}

}  // namespace rotunsim
