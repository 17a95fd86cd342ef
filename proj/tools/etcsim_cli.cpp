#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "etcsim/acceptance.hpp"
#include "etcsim/calibration.hpp"
#include "etcsim/experiments.hpp"
#include "etcsim/simulation.hpp"

using namespace etcsim;

namespace {

constexpr int kUsage = 2;
constexpr int kCalibration = 3;
constexpr int kSelfTest = 4;

struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct Flags {
    std::size_t n = 3;
    std::string scenario = "b";
    std::string trigger = "periodic-sync";
    std::string rule = "average";
    double fixed_point = 0.0;
    double dt = 2e-3;
    double horizon = 2000.0;
    std::size_t trials = 8;
    std::uint64_t seed = 1;
    std::optional<double> delta;
    std::optional<double> period;
    std::vector<double> offsets;
    double target_t = 0.5;
    std::string bridge = "on";
    std::string method = "scaling";
    std::size_t samples = 100'000;
    std::string out;
    std::vector<std::size_t> n_list{3, 10, 50};
    std::size_t stride = 1;
};

void add_output(CLI::App* app, Flags& f) {
    app->add_option("--out", f.out, "CSV output path (a .manifest sidecar is written next to it)");
}

void add_run_flags(CLI::App* app, Flags& f) {
    app->add_option("--dt", f.dt, "Integration step [s]")->check(CLI::PositiveNumber);
    app->add_option("--horizon", f.horizon, "Simulated time per trial [s]")->check(CLI::PositiveNumber);
    app->add_option("--trials", f.trials, "Independent trials")->check(CLI::PositiveNumber);
    app->add_option("--seed", f.seed, "Master seed");
}

void add_calibration_flags(CLI::App* app, Flags& f) {
    app->add_option("--bridge-correction", f.bridge, "Crossing correction during calibration")
        ->check(CLI::IsMember({"on", "off"}));
    app->add_option("--method", f.method, "Calibration method")->check(CLI::IsMember({"scaling", "bisection"}));
    app->add_option("--samples", f.samples, "Passages for the exit-time estimate")->check(CLI::PositiveNumber);
}

void add_config_flags(CLI::App* app, Flags& f) {
    app->add_option("--n", f.n, "Number of agents")->check(CLI::PositiveNumber);
    app->add_option("--scenario", f.scenario, "Information available to the controllers")
        ->check(CLI::IsMember({"b", "bl"}));
    app->add_option("--trigger", f.trigger, "Triggering scheme")
        ->check(CLI::IsMember({"periodic-sync", "periodic-async", "level"}));
    app->add_option("--rule", f.rule, "Consensus point")->check(CLI::IsMember({"average", "leader", "fixed"}));
    app->add_option("--fixed-point", f.fixed_point, "Consensus point for --rule fixed");
    app->add_option("--delta", f.delta, "Level threshold")->check(CLI::PositiveNumber);
    app->add_option("--period", f.period, "Period of a periodic scheme [s]")->check(CLI::PositiveNumber);
    app->add_option("--offsets", f.offsets, "Per-agent phase offsets (comma list)")->delimiter(',');
    app->add_option("--target-t", f.target_t,
                    "Global mean inter-event time used to derive missing periods and thresholds")
        ->check(CLI::PositiveNumber);
    add_run_flags(app, f);
    add_calibration_flags(app, f);
}

CalibrationOptions calibration_options(const Flags& f) {
    CalibrationOptions o;
    o.method = f.method == "scaling" ? CalibrationMethod::ScalingLaw : CalibrationMethod::Bisection;
    o.bridge_correction = f.bridge == "on";
    o.samples = f.samples;
    o.max_samples = std::max(o.max_samples, 4 * f.samples);
    return o;
}

ExperimentOptions experiment_options(const Flags& f) {
    ExperimentOptions o;
    o.seed = f.seed;
    o.trials = f.trials;
    o.dt = f.dt;
    o.horizon = f.horizon;
    o.calibration = calibration_options(f);
    return o;
}

ScenarioConfig build_config(const Flags& f, bool calibrate_missing) {
    ScenarioConfig c;
    c.n = f.n;
    c.scenario = f.scenario == "b" ? InfoScenario::BroadcastOnly : InfoScenario::BroadcastPlusLocal;
    const bool b = c.scenario == InfoScenario::BroadcastOnly;
    // periods are per agent under b, so the target global rate is spread over n agents
    const double default_period = b ? rate_match_global_to_local(f.n, f.target_t) : f.target_t;
    if (f.trigger == "periodic-sync") {
        c.scheme = PeriodicSync{f.period.value_or(default_period)};
    } else if (f.trigger == "periodic-async") {
        const double period = f.period.value_or(default_period);
        std::vector<double> offsets = f.offsets;
        if (offsets.empty()) {
            for (std::size_t i = 0; i < f.n; ++i) offsets.push_back(period * i / static_cast<double>(f.n));
        }
        c.scheme = PeriodicAsync{period, offsets};
    } else if (b) {
        c.scheme = LevelBroadcast{f.delta.value_or(std::sqrt(default_period))};
    } else if (f.delta) {
        c.scheme = LevelGlobal{*f.delta};
    } else if (calibrate_missing) {
        const NoiseStream stream = NoiseStream(f.seed, 0xCA11B7A7E).split(f.n);
        c.scheme = LevelGlobal{calibrate_delta_bl(f.n, f.target_t, stream, calibration_options(f)).delta_star};
    } else {
        throw UsageError("--trigger level with --scenario bl needs --delta");
    }
    if (f.rule == "average") c.rule = AverageRule{};
    else if (f.rule == "leader") c.rule = LeaderRule{};
    else c.rule = FixedRule{f.fixed_point};
    c.dt = f.dt;
    c.horizon = f.horizon;
    c.trials = f.trials;
    c.seed = f.seed;
    c.trajectory_stride = f.stride;
    for (const auto& warning : validate_config(c)) std::cerr << "warning: " << warning << '\n';
    return c;
}

std::string iso_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void emit(const Flags& f, const std::string& command, const Table& table, Manifest manifest,
          const std::string& argv_line) {
    if (f.out.empty()) {
        write_csv(std::cout, table);
        return;
    }
    std::ofstream csv(f.out);
    if (!csv) throw std::runtime_error("cannot write " + f.out);
    write_csv(csv, table);

    Manifest head{{"command", command},
                  {"version", ETCSIM_VERSION},
                  {"timestamp", iso_timestamp()},
                  {"argv", argv_line},
                  {"csv", f.out}};
    head.insert(head.end(), manifest.begin(), manifest.end());
    std::ofstream side(f.out + ".manifest");
    if (!side) throw std::runtime_error("cannot write " + f.out + ".manifest");
    write_manifest(side, head);
}

Manifest run_manifest(const Flags& f) {
    return {{"seed", std::to_string(f.seed)},
            {"trials", std::to_string(f.trials)},
            {"dt", format_number(f.dt)},
            {"horizon", format_number(f.horizon)},
            {"bridge_correction", f.bridge},
            {"calibration_method", f.method},
            {"calibration_samples", std::to_string(f.samples)}};
}

std::string join_n_list(const std::vector<std::size_t>& n_list) {
    std::string s;
    for (std::size_t i = 0; i < n_list.size(); ++i) s += (i ? "," : "") + std::to_string(n_list[i]);
    return s;
}

Table simulate_table(const ScenarioConfig& config) {
    const CostReport r = run_batch(config);
    const auto analytic = analytic_cost(config);
    Table t;
    t.header = {"n",     "scenario", "scheme",    "rule",         "trials",        "j_sim",
                "ci",    "j_renewal", "renewal_ci", "j_analytic", "mean_global_T", "mean_local_T"};
    t.rows.push_back({std::to_string(r.n), scenario_name(config.scenario), scheme_name(config.scheme),
                      rule_name(config.rule), std::to_string(r.trials), format_number(r.j_time_avg),
                      format_number(r.ci_halfwidth), format_number(r.j_renewal),
                      format_number(r.j_renewal_ci), analytic ? format_number(*analytic) : "",
                      format_number(r.mean_global_interevent), format_number(r.mean_local_interevent)});
    return t;
}

bool has_failed_row(const Table& table) {
    for (const auto& row : table.rows)
        if (row.back().rfind("calibration-failed", 0) == 0) return true;
    return false;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Simulation of triggered impulsive consensus control for noisy integrator agents"};
    app.set_version_flag("--version", ETCSIM_VERSION);
    app.require_subcommand(1);

    Flags f;
    std::optional<double> sweep_target;

    auto* simulate = app.add_subcommand("simulate", "Run a batch of trials and report the cost");
    add_config_flags(simulate, f);
    add_output(simulate, f);

    auto* calibrate = app.add_subcommand("calibrate", "Find the global level threshold for a target rate");
    calibrate->add_option("--n", f.n, "Number of agents")->check(CLI::PositiveNumber);
    calibrate->add_option("--target-t", f.target_t, "Target global mean inter-event time [s]")
        ->check(CLI::PositiveNumber);
    calibrate->add_option("--seed", f.seed, "Master seed");
    add_calibration_flags(calibrate, f);
    add_output(calibrate, f);

    auto* table1 = app.add_subcommand("table1", "Cost of the four schemes at four settings");
    add_run_flags(table1, f);
    add_calibration_flags(table1, f);
    add_output(table1, f);

    auto* sweep = app.add_subcommand("sweep-n", "One batch per agent count");
    add_config_flags(sweep, f);
    sweep->add_option("--n-list", f.n_list, "Agent counts (comma list)")->delimiter(',');
    add_output(sweep, f);

    auto* ratio = app.add_subcommand("ratio-curve", "Level over periodic cost at matched global rates");
    add_run_flags(ratio, f);
    add_calibration_flags(ratio, f);
    ratio->add_option("--n-list", f.n_list, "Agent counts (comma list)")->delimiter(',');
    ratio->add_option("--target-t", f.target_t, "Global mean inter-event time [s]")->check(CLI::PositiveNumber);
    add_output(ratio, f);

    auto* traj = app.add_subcommand("trajectory", "Sampled path of one trial");
    add_config_flags(traj, f);
    traj->add_option("--duration", f.horizon, "Simulated time [s]")->check(CLI::PositiveNumber);
    traj->add_option("--stride", f.stride, "Record every stride-th step")->check(CLI::PositiveNumber);
    add_output(traj, f);

    auto* self_test = app.add_subcommand("self-test", "Run the acceptance criteria");
    self_test->add_option("--seed", f.seed, "Master seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kUsage;
    }

    std::string argv_line;
    for (int i = 0; i < argc; ++i) argv_line += (i ? " " : "") + std::string(argv[i]);

    try {
        if (*simulate) {
            const auto config = build_config(f, true);
            Manifest m;
            describe_config(config, m);
            m.emplace_back("bridge_correction", f.bridge);
            emit(f, "simulate", simulate_table(config), m, argv_line);
        } else if (*calibrate) {
            const NoiseStream stream = NoiseStream(f.seed, 0xCA11B7A7E).split(f.n);
            Table t;
            t.header = {"n", "target_T", "delta", "achieved_T", "ci", "samples", "method", "unit_exit_time",
                        "iterations"};
            const auto r = calibrate_delta_bl(f.n, f.target_t, stream, calibration_options(f));
            t.rows.push_back({std::to_string(f.n), format_number(r.target_T), format_number(r.delta_star),
                              format_number(r.achieved_T), format_number(r.ci_halfwidth),
                              std::to_string(r.samples_used), f.method, format_number(r.unit_exit_time),
                              std::to_string(r.iterations)});
            Manifest m{{"n", std::to_string(f.n)},
                       {"target_t", format_number(f.target_t)},
                       {"seed", std::to_string(f.seed)},
                       {"bridge_correction", f.bridge},
                       {"calibration_method", f.method},
                       {"calibration_samples", std::to_string(f.samples)}};
            emit(f, "calibrate", t, m, argv_line);
        } else if (*table1) {
            const auto t = etcsim::table1(experiment_options(f));
            emit(f, "table1", t, run_manifest(f), argv_line);
            if (has_failed_row(t)) return kCalibration;
        } else if (*sweep) {
            // without an explicit --delta or --period, every n is matched to --target-t
            if (!f.delta && !f.period) {
                sweep_target = f.target_t;
                f.delta = 1.0;
            }
            const auto config = build_config(f, false);
            Manifest m;
            describe_config(config, m);
            m.emplace_back("n_list", join_n_list(f.n_list));
            if (sweep_target) m.emplace_back("target_t", format_number(*sweep_target));
            emit(f, "sweep-n", sweep_n(config, f.n_list, sweep_target, experiment_options(f)), m, argv_line);
        } else if (*ratio) {
            const auto t = ratio_curve(f.n_list, f.target_t, experiment_options(f));
            Manifest m = run_manifest(f);
            m.emplace_back("n_list", join_n_list(f.n_list));
            m.emplace_back("target_t", format_number(f.target_t));
            emit(f, "ratio-curve", t, m, argv_line);
            if (has_failed_row(t)) return kCalibration;
        } else if (*traj) {
            if (traj->count("--duration") == 0) f.horizon = 2.5;
            auto config = build_config(f, true);
            config.trials = 1;
            Manifest m;
            describe_config(config, m);
            m.emplace_back("stride", std::to_string(f.stride));
            emit(f, "trajectory", trajectory(config), m, argv_line);
        } else if (*self_test) {
            AcceptanceOptions o;
            o.seed = f.seed;
            const auto results = run_acceptance(o, &std::cout);
            for (const auto& r : results)
                if (!r.pass) return kSelfTest;
        }
    } catch (const CalibrationError& e) {
        std::cerr << "calibration failed: " << e.what() << " (last delta "
                  << format_number(e.diagnostics().delta_star) << ", achieved "
                  << format_number(e.diagnostics().achieved_T) << ")\n";
        return kCalibration;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
