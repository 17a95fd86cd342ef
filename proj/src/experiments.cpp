#include "etcsim/experiments.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "etcsim/cost.hpp"

namespace etcsim {
namespace {

// trial index reserved for calibration streams, far from any batch index
constexpr std::uint64_t kCalibrationTrial = 0xCA11B7A7E;

std::string quote_cell(const std::string& cell) {
    if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
    std::string quoted = "\"";
    for (char c : cell) {
        if (c == '"') quoted += '"';
        quoted += c;
    }
    return quoted + "\"";
}

NoiseStream calibration_stream(std::uint64_t seed, std::size_t n) {
    return NoiseStream(seed, kCalibrationTrial).split(n);
}

ScenarioConfig base_config(const ExperimentOptions& options, std::size_t n, InfoScenario scenario,
                           TriggerScheme scheme) {
    ScenarioConfig config;
    config.n = n;
    config.scenario = scenario;
    config.scheme = std::move(scheme);
    config.rule = AverageRule{};
    config.dt = options.dt;
    config.horizon = options.horizon;
    config.trials = options.trials;
    config.seed = options.seed;
    return config;
}

std::vector<double> staggered_offsets(std::size_t n, double period) {
    std::vector<double> offsets(n);
    for (std::size_t i = 0; i < n; ++i) offsets[i] = period * static_cast<double>(i) / static_cast<double>(n);
    return offsets;
}

std::optional<double> threshold_of(const TriggerScheme& scheme) {
    if (const auto* b = std::get_if<LevelBroadcast>(&scheme)) return b->threshold;
    if (const auto* g = std::get_if<LevelGlobal>(&scheme)) return g->threshold;
    return std::nullopt;
}

std::string threshold_cell(const TriggerScheme& scheme) {
    const auto threshold = threshold_of(scheme);
    return threshold ? format_number(*threshold) : "";
}

std::string period_cell(const TriggerScheme& scheme) {
    if (const auto* s = std::get_if<PeriodicSync>(&scheme)) return format_number(s->period);
    if (const auto* a = std::get_if<PeriodicAsync>(&scheme)) return format_number(a->period);
    return "";
}

}  // namespace

std::string format_number(double value) {
    if (!std::isfinite(value)) return "";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", value);
    return buf;
}

void write_csv(std::ostream& out, const Table& table) {
    auto line = [&out](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out << ',';
            out << quote_cell(cells[i]);
        }
        out << '\n';
    };
    line(table.header);
    for (const auto& row : table.rows) line(row);
}

void write_manifest(std::ostream& out, const Manifest& manifest) {
    for (const auto& [key, value] : manifest) out << key << '=' << value << '\n';
}

std::string scenario_name(InfoScenario scenario) {
    return scenario == InfoScenario::BroadcastOnly ? "b" : "bl";
}

std::string scheme_name(const TriggerScheme& scheme) {
    switch (scheme.index()) {
        case 0: return "periodic-sync";
        case 1: return "periodic-async";
        case 2: return "level-broadcast";
        default: return "level-global";
    }
}

std::string rule_name(const ConsensusRule& rule) {
    if (std::holds_alternative<AverageRule>(rule)) return "average";
    if (std::holds_alternative<LeaderRule>(rule)) return "leader";
    return "fixed";
}

void describe_config(const ScenarioConfig& config, Manifest& manifest) {
    manifest.emplace_back("n", std::to_string(config.n));
    manifest.emplace_back("scenario", scenario_name(config.scenario));
    manifest.emplace_back("trigger", scheme_name(config.scheme));
    if (const auto cell = threshold_cell(config.scheme); !cell.empty()) manifest.emplace_back("delta", cell);
    if (const auto cell = period_cell(config.scheme); !cell.empty()) manifest.emplace_back("period", cell);
    if (const auto* a = std::get_if<PeriodicAsync>(&config.scheme)) {
        std::string offsets;
        for (std::size_t i = 0; i < a->offsets.size(); ++i) {
            if (i) offsets += ',';
            offsets += format_number(a->offsets[i]);
        }
        manifest.emplace_back("offsets", offsets);
    }
    manifest.emplace_back("rule", rule_name(config.rule));
    if (const auto* f = std::get_if<FixedRule>(&config.rule))
        manifest.emplace_back("fixed_point", format_number(f->point));
    manifest.emplace_back("dt", format_number(config.dt));
    manifest.emplace_back("horizon", format_number(config.horizon));
    manifest.emplace_back("trials", std::to_string(config.trials));
    manifest.emplace_back("seed", std::to_string(config.seed));
    manifest.emplace_back("noise_scale", format_number(config.noise_scale));
}

std::optional<double> analytic_cost(const ScenarioConfig& config) {
    const double var = config.noise_scale * config.noise_scale;
    const bool b = config.scenario == InfoScenario::BroadcastOnly;
    if (const auto* s = std::get_if<PeriodicSync>(&config.scheme))
        return var * (b ? j_tt_b(config.n, s->period) : j_tt_bl(config.n, s->period));
    if (const auto* a = std::get_if<PeriodicAsync>(&config.scheme)) return var * j_tt_b(config.n, a->period);
    if (const auto* l = std::get_if<LevelBroadcast>(&config.scheme))
        return var * j_et_b(config.n, l->threshold);
    return std::nullopt;
}

Crossover compare_bl_at_matched_rate(std::size_t n, double delta, const ExperimentOptions& options) {
    Crossover out;
    out.n = n;
    out.delta = delta;
    out.et = run_batch(base_config(options, n, InfoScenario::BroadcastPlusLocal, LevelGlobal{delta}));
    out.matched_T = out.et.mean_global_interevent;
    if (!std::isfinite(out.matched_T)) throw std::runtime_error("level scheme never triggered");
    out.tt = run_batch(
        base_config(options, n, InfoScenario::BroadcastPlusLocal, PeriodicSync{out.matched_T}));
    out.difference = out.et.j_time_avg - out.tt.j_time_avg;
    out.difference_ci = std::hypot(out.et.ci_halfwidth, out.tt.ci_halfwidth);
    out.ratio = out.tt.j_time_avg > 0.0 ? out.et.j_time_avg / out.tt.j_time_avg : 0.0;
    return out;
}

Table table1(const ExperimentOptions& options) {
    struct Setting {
        std::size_t n;
        double target;
    };
    const Setting settings[] = {{3, 0.25}, {3, 0.5}, {10, 0.5}, {50, 0.5}};

    Table table;
    table.header = {"n", "target_global_T", "scheme", "scenario", "delta", "period", "j_sim",
                    "j_analytic", "mean_global_T", "ci", "status"};
    auto emit = [&](const Setting& s, const std::string& scheme, const ScenarioConfig& config) {
        const CostReport report = run_batch(config);
        const auto analytic = analytic_cost(config);
        const double global_T = report.mean_global_interevent;
        table.rows.push_back({std::to_string(s.n), format_number(s.target), scheme,
                              scenario_name(config.scenario), threshold_cell(config.scheme),
                              period_cell(config.scheme), format_number(report.j_time_avg),
                              analytic ? format_number(*analytic) : "", format_number(global_T),
                              format_number(report.ci_halfwidth), "ok"});
    };

    for (const auto& s : settings) {
        const double t_local = rate_match_global_to_local(s.n, s.target);
        emit(s, "TT", base_config(options, s.n, InfoScenario::BroadcastOnly, PeriodicSync{t_local}));
        emit(s, "ET",
             base_config(options, s.n, InfoScenario::BroadcastOnly, LevelBroadcast{std::sqrt(t_local)}));
        emit(s, "TT", base_config(options, s.n, InfoScenario::BroadcastPlusLocal, PeriodicSync{s.target}));
        try {
            const auto cal = calibrate_delta_bl(s.n, s.target, calibration_stream(options.seed, s.n),
                                                options.calibration);
            emit(s, "ET",
                 base_config(options, s.n, InfoScenario::BroadcastPlusLocal, LevelGlobal{cal.delta_star}));
        } catch (const CalibrationError& e) {
            table.rows.push_back({std::to_string(s.n), format_number(s.target), "ET", "bl",
                                  format_number(e.diagnostics().delta_star), "", "", "", "", "",
                                  std::string("calibration-failed: ") + e.what()});
        }
    }
    return table;
}

Table ratio_curve(const std::vector<std::size_t>& n_list, double target_global_T,
                  const ExperimentOptions& options) {
    if (n_list.empty()) throw std::invalid_argument("ratio-curve: empty n list");
    Table table;
    table.header = {"n",        "target_global_T", "analytic_et_b_over_tt_bl", "delta_bl",
                    "mc_et_bl_over_tt_bl", "ratio_ci", "j_et_bl", "j_tt_bl", "matched_T", "status"};
    for (auto n : n_list) {
        const double analytic = static_cast<double>(n) / 3.0;
        try {
            const auto cal = calibrate_delta_bl(n, target_global_T, calibration_stream(options.seed, n),
                                                options.calibration);
            const auto cmp = compare_bl_at_matched_rate(n, cal.delta_star, options);
            const double rel = std::hypot(cmp.et.ci_halfwidth / cmp.et.j_time_avg,
                                          cmp.tt.ci_halfwidth / cmp.tt.j_time_avg);
            table.rows.push_back({std::to_string(n), format_number(target_global_T),
                                  format_number(analytic), format_number(cal.delta_star),
                                  format_number(cmp.ratio), format_number(cmp.ratio * rel),
                                  format_number(cmp.et.j_time_avg), format_number(cmp.tt.j_time_avg),
                                  format_number(cmp.matched_T), "ok"});
        } catch (const CalibrationError& e) {
            table.rows.push_back({std::to_string(n), format_number(target_global_T),
                                  format_number(analytic), format_number(e.diagnostics().delta_star),
                                  "", "", "", "", "", std::string("calibration-failed: ") + e.what()});
        }
    }
    return table;
}

Table sweep_n(const ScenarioConfig& base, const std::vector<std::size_t>& n_list,
              std::optional<double> target_global_T, const ExperimentOptions& options) {
    if (n_list.empty()) throw std::invalid_argument("sweep-n: empty n list");
    Table table;
    table.header = {"n",          "scenario", "scheme",    "rule",          "delta",
                    "period",     "j_sim",    "ci",        "j_renewal",     "j_analytic",
                    "mean_global_T", "mean_local_T"};
    for (auto n : n_list) {
        ScenarioConfig config = base;
        config.n = n;
        if (auto* a = std::get_if<PeriodicAsync>(&config.scheme)) {
            if (target_global_T) a->period = rate_match_global_to_local(n, *target_global_T);
            if (a->offsets.size() != n || target_global_T) a->offsets = staggered_offsets(n, a->period);
        } else if (target_global_T) {
            const double t = *target_global_T;
            const bool b = config.scenario == InfoScenario::BroadcastOnly;
            if (auto* s = std::get_if<PeriodicSync>(&config.scheme)) {
                s->period = b ? rate_match_global_to_local(n, t) : t;
            } else if (auto* l = std::get_if<LevelBroadcast>(&config.scheme)) {
                l->threshold = std::sqrt(rate_match_global_to_local(n, t));
            } else if (auto* g = std::get_if<LevelGlobal>(&config.scheme)) {
                g->threshold = calibrate_delta_bl(n, t, calibration_stream(config.seed, n),
                                                  options.calibration)
                                   .delta_star;
            }
        }
        const CostReport report = run_batch(config);
        const auto analytic = analytic_cost(config);
        table.rows.push_back({std::to_string(n), scenario_name(config.scenario), scheme_name(config.scheme),
                              rule_name(config.rule), threshold_cell(config.scheme),
                              period_cell(config.scheme), format_number(report.j_time_avg),
                              format_number(report.ci_halfwidth), format_number(report.j_renewal),
                              analytic ? format_number(*analytic) : "",
                              format_number(report.mean_global_interevent),
                              format_number(report.mean_local_interevent)});
    }
    return table;
}

Table trajectory(const ScenarioConfig& config) {
    ScenarioConfig run = config;
    run.record_trajectory = true;
    const auto result = run_trial(run, 0);
    const std::size_t n = config.n;
    const auto threshold = threshold_of(config.scheme);

    Table table;
    table.header.push_back("t");
    for (std::size_t i = 1; i <= n; ++i) table.header.push_back("x_" + std::to_string(i));
    for (std::size_t i = 1; i <= n; ++i) table.header.push_back("xhat_" + std::to_string(i));
    table.header.push_back("event");
    for (std::size_t i = 1; i <= n; ++i) table.header.push_back("trig_" + std::to_string(i));
    for (std::size_t i = 1; i <= n; ++i) {
        table.header.push_back("lower_" + std::to_string(i));
        table.header.push_back("upper_" + std::to_string(i));
    }
    for (const auto& s : *result.trajectory) {
        std::vector<std::string> row;
        row.push_back(format_number(s.t));
        for (double v : s.x) row.push_back(format_number(v));
        for (double v : s.xhat) row.push_back(format_number(v));
        row.push_back(s.event ? "1" : "0");
        for (auto f : s.triggered) row.push_back(f ? "1" : "0");
        for (std::size_t i = 0; i < n; ++i) {
            // trigger band around the reference each agent is measured against
            row.push_back(threshold ? format_number(s.xhat[i] - *threshold) : "");
            row.push_back(threshold ? format_number(s.xhat[i] + *threshold) : "");
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

}  // namespace etcsim
