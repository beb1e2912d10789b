#include "cli.hpp"

#include <rotunsim/config.hpp>
#include <rotunsim/diagnostics.hpp>
#include <rotunsim/experiments.hpp>
#include <rotunsim/metrics.hpp>
#include <rotunsim/scenario_io.hpp>
#include <rotunsim/sweep.hpp>
#include <rotunsim/telemetry.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>

namespace rotunsim::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct CommonOptions {
    std::string config_path;
    std::optional<std::uint64_t> seed;
};

SimConfig resolve_config(const CommonOptions& opts) {
    return opts.config_path.empty() ? SimConfig{} : load_config(opts.config_path);
}

/// --seed wins, then ROTUNSIM_SEED, then whatever the scenario carries.
std::optional<std::uint64_t> resolve_seed(const CommonOptions& opts) {
    if (opts.seed) return opts.seed;
    const char* env = std::getenv("ROTUNSIM_SEED");
    if (env == nullptr || *env == '\0') return std::nullopt;
    std::uint64_t seed = 0;
    const std::string_view text(env);
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), seed);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw DomainError("ROTUNSIM_SEED must be an unsigned integer");
    }
    return seed;
}

json to_json(const Metrics& m) {
    const auto finite_or_null = [](double x) { return std::isfinite(x) ? json(x) : json(nullptr); };
    return json{{"overshoot_frac", m.overshoot_frac},
                {"rise_time_90", finite_or_null(m.rise_time_90)},
                {"settling_time", finite_or_null(m.settling_time)},
                {"peak_roll", m.peak_roll},
                {"rms_roll_err", m.rms_roll_err},
                {"capsized", m.capsized}};
}

const char* to_string(Termination t) {
    return t == Termination::completed ? "completed" : "capsized";
}

void write_json(const json& doc, const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DomainError("cannot write '" + path.string() + "'");
    out << doc.dump(2) << '\n';
}

/// Writes <dir>/<name>.scenario and <dir>/<name>.csv and returns the trajectory.
Trajectory run_and_write(const Scenario& scenario, const SimConfig& config, const fs::path& dir) {
    save_scenario(scenario, dir / (scenario.name + ".scenario"));
    Trajectory traj = run(scenario, config);
    write_csv(traj, dir / (scenario.name + ".csv"));
    return traj;
}

int cmd_simulate(const CommonOptions& common, const std::string& scenario_path,
                 const std::string& out_path, const std::string& udp, std::ostream& out,
                 std::ostream& err) {
    const SimConfig config = resolve_config(common);
    Scenario scenario = load_scenario(scenario_path);
    if (const auto seed = resolve_seed(common)) scenario.seed = *seed;

    std::optional<UdpPublisher> publisher;
    if (!udp.empty()) publisher.emplace(udp, err);

    RunOptions options;
    if (publisher) options.on_record = [&](const TelemetryRecord& r) { publisher->publish(r); };
    const Trajectory traj = run(scenario, config, options);
    write_csv(traj, fs::path(out_path));

    out << scenario.name << ": " << traj.records.size() << " records, "
        << to_string(traj.termination) << '\n';
    return kExitOk;
}

int cmd_experiment(const CommonOptions& common, const std::string& which, const fs::path& dir,
                   std::ostream& out) {
    const SimConfig config = resolve_config(common);
    const auto seed = resolve_seed(common);
    const auto seeded = [&](Scenario s) {
        if (seed) s.seed = *seed;
        return s;
    };
    fs::create_directories(dir);
    json doc{{"experiment", which}};

    if (which == "e1") {
        json runs = json::array();
        for (double speed : {1.0, 2.0, 3.0}) {
            const Scenario s = seeded(scenario_e1(speed));
            const Trajectory traj = run_and_write(s, config, dir);
            const MetricWindow post{kE1PostStepWindow.t_start, kE1PostStepWindow.t_end + 1e-6};
            runs.push_back({{"name", s.name},
                            {"speed", speed},
                            {"termination", to_string(traj.termination)},
                            {"step", to_json(compute_metrics(traj, kE1RollStep, kE1StepWindow))},
                            {"post_step", to_json(compute_metrics(traj, 0.0, post))}});
            out << s.name << ": " << to_string(traj.termination) << '\n';
        }
        doc["runs"] = runs;
    } else if (which == "e2") {
        json runs = json::array();
        for (const Scenario& base : scenario_e2(config.plant)) {
            const Scenario s = seeded(base);
            const Trajectory traj = run_and_write(s, config, dir);
            const Metrics m = compute_metrics(traj, 0.0);
            runs.push_back({{"name", s.name},
                            {"termination", to_string(traj.termination)},
                            {"metrics", to_json(m)}});
            out << s.name << ": peak |theta| " << m.peak_roll << " rad, "
                << to_string(traj.termination) << '\n';
        }
        doc["runs"] = runs;
    } else if (which == "e3") {
        const E3Calibration cal = calibrate_e3(config, seed.value_or(kDefaultSeed));
        const Scenario& s = cal.scenario;
        const Trajectory traj = run_and_write(s, config, dir);
        const double recovery = recovery_time(traj, kE3ImpulseTime, kE3SettleBand);
        doc["impulse"] = cal.impulse;
        doc["calibration_peak"] = cal.peak;
        doc["calibration_runs"] = cal.runs;
        doc["converged"] = cal.converged;
        doc["termination"] = to_string(traj.termination);
        doc["recovery_time_0_1"] = std::isfinite(recovery) ? json(recovery) : json(nullptr);
        doc["metrics"] = to_json(compute_metrics(traj, 0.0, {kE3ImpulseTime, kE3Duration + 1.0}));
        out << "e3: impulse " << cal.impulse << " N m s, peak " << cal.peak << " rad, back under "
            << kE3SettleBand << " rad after " << recovery << " s\n";
        if (!cal.converged) {
            write_json(doc, dir / "e3_summary.json");
            throw DomainError("e3 calibration did not converge");
        }
    } else if (which == "e4") {
        const Scenario s = seeded(scenario_e4());
        const Trajectory traj = run_and_write(s, config, dir);
        const Metrics hold = compute_metrics(traj, 0.0, kE4HoldWindow);
        double v_min = std::numeric_limits<double>::infinity();
        double v_max = 0.0;
        for (const auto& r : traj.records) {
            if (r.t < kE4HoldWindow.t_start) continue;
            v_min = std::min(v_min, r.v);
            v_max = std::max(v_max, r.v);
        }
        doc["termination"] = to_string(traj.termination);
        doc["hold"] = to_json(hold);
        doc["hold_speed_min"] = v_min;
        doc["hold_speed_max"] = v_max;
        out << "e4: max |theta| over the hold " << hold.peak_roll << " rad, speed " << v_min
            << ".." << v_max << " m/s\n";
    } else {  // compare
        json rows = json::array();
        for (const ComparisonRow& row : compare_stability(config, seed.value_or(kDefaultSeed))) {
            rows.push_back({{"speed", row.speed},
                            {"with_wheel", to_json(row.metrics_with_wheel)},
                            {"baseline", to_json(row.metrics_baseline)},
                            {"post_step_with_wheel", to_json(row.post_step_with_wheel)},
                            {"post_step_baseline", to_json(row.post_step_baseline)}});
            out << row.speed << " m/s: overshoot " << row.metrics_with_wheel.overshoot_frac
                << " (wheel) vs " << row.metrics_baseline.overshoot_frac
                << " (baseline); post-step rms " << row.post_step_with_wheel.rms_roll_err << " vs "
                << row.post_step_baseline.rms_roll_err << '\n';
        }
        doc["rows"] = rows;
    }
    write_json(doc, dir / (which + "_summary.json"));
    return kExitOk;
}

int cmd_sweep(const CommonOptions& common, const std::string& spec_path, const std::string& out_path,
              unsigned jobs, std::ostream& out) {
    const SimConfig config = resolve_config(common);
    const SweepSpec spec = load_sweep_spec(spec_path);
    Scenario scenario = resolve_scenario_ref(spec, config);
    if (const auto seed = resolve_seed(common)) scenario.seed = *seed;
    const auto results = run_sweep(spec, scenario, config, jobs);

    std::ofstream file(out_path, std::ios::binary);
    if (!file) throw DomainError("cannot write '" + out_path + "'");
    file << format_sweep_csv(spec, results);
    out << results.size() << " grid points; best " << to_string(spec.objective) << " = "
        << results.front().objective << '\n';
    return kExitOk;
}

int cmd_check(const CommonOptions& common, std::ostream& out) {
    const SimConfig config = resolve_config(common);
    bool all = true;
    for (const CheckResult& r : run_invariant_checks(config.plant)) {
        all = all && r.passed;
        out << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << r.detail << " = " << r.value;
        if (r.upper > 0.0) {
            out << " (expected in [" << r.threshold << ", " << r.upper << "])\n";
        } else {
            out << " (bound " << r.threshold << ")\n";
        }
    }
    return all ? kExitOk : kExitDomainError;
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Spherical robot roll-control simulator", "rotunsim"};
    app.require_subcommand(1);

    CommonOptions common;
    std::uint64_t seed_value = 0;
    const auto add_common = [&](CLI::App* sub, bool with_seed) {
        sub->add_option("--config", common.config_path, "Config file (defaults if omitted)");
        if (with_seed) {
            sub->add_option("--seed", seed_value, "Random seed (overrides ROTUNSIM_SEED)");
        }
    };

    std::string scenario_path, out_path, udp;
    auto* simulate = app.add_subcommand("simulate", "Run one scenario file and write CSV telemetry");
    simulate->add_option("--scenario", scenario_path, "Scenario file")->required();
    simulate->add_option("--out", out_path, "Output CSV")->required();
    simulate->add_option("--udp", udp, "Also stream RTB1 datagrams to host:port");
    add_common(simulate, true);

    std::string which, out_dir;
    auto* experiment = app.add_subcommand("experiment", "Run a canned experiment");
    experiment->add_option("name", which, "e1, e2, e3, e4 or compare")
        ->required()
        ->check(CLI::IsMember({"e1", "e2", "e3", "e4", "compare"}));
    experiment->add_option("--out", out_dir, "Output directory")->required();
    add_common(experiment, true);

    std::string spec_path;
    unsigned jobs = 0;
    auto* sweep = app.add_subcommand("sweep", "Evaluate a parameter grid");
    sweep->add_option("--spec", spec_path, "Sweep spec file")->required();
    sweep->add_option("--out", out_path, "Output CSV")->required();
    sweep->add_option("--jobs", jobs, "Worker threads (0 = all cores)");
    add_common(sweep, true);

    auto* check = app.add_subcommand("check", "Run the plant invariant checks");
    add_common(check, false);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return kExitOk;
        }
        err << "error: " << e.what() << '\n' << "run with --help for usage\n";
        return kExitUsage;
    }

    for (auto* sub : {simulate, experiment, sweep}) {
        if (sub->parsed() && sub->count("--seed") > 0) common.seed = seed_value;
    }

    try {
        if (simulate->parsed()) return cmd_simulate(common, scenario_path, out_path, udp, out, err);
        if (experiment->parsed()) return cmd_experiment(common, which, out_dir, out);
        if (sweep->parsed()) return cmd_sweep(common, spec_path, out_path, jobs, out);
        if (check->parsed()) return cmd_check(common, out);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitDomainError;
    }
    return kExitUsage;
}

}  // namespace rotunsim::cli
