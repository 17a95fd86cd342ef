#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "etcsim/calibration.hpp"
#include "etcsim/simulation.hpp"

namespace etcsim {

/// A CSV table: header plus rows of preformatted cells.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

void write_csv(std::ostream& out, const Table& table);

/// Shortest round-trippable-enough decimal form ("%.10g"); NaN and inf print
/// as empty cells.
std::string format_number(double value);

/// Ordered key=value pairs written as a sidecar manifest.
using Manifest = std::vector<std::pair<std::string, std::string>>;

void write_manifest(std::ostream& out, const Manifest& manifest);

/// Flattens a config into manifest entries.
void describe_config(const ScenarioConfig& config, Manifest& manifest);

std::string scenario_name(InfoScenario scenario);
std::string scheme_name(const TriggerScheme& scheme);
std::string rule_name(const ConsensusRule& rule);

/// Analytic cost for the config, if a closed form exists.
std::optional<double> analytic_cost(const ScenarioConfig& config);

struct ExperimentOptions {
    std::uint64_t seed = 1;
    std::size_t trials = 8;
    double dt = 2e-3;
    double horizon = 2000.0;
    CalibrationOptions calibration;
};

/// The 16-cell comparison (4 settings x 4 schemes), calibrating the global
/// level threshold per setting. A failed calibration yields an error row.
Table table1(const ExperimentOptions& options);

/// Per n: analytic J_ET^b/J_TT^bl = n/3 and the simulated J_ET^bl/J_TT^bl at
/// matched global rates.
Table ratio_curve(const std::vector<std::size_t>& n_list, double target_global_T,
                  const ExperimentOptions& options);

/// One batch per n with the base config; when target_global_T is set, level
/// thresholds and periods are derived from it per n.
Table sweep_n(const ScenarioConfig& base, const std::vector<std::size_t>& n_list,
              std::optional<double> target_global_T, const ExperimentOptions& options);

/// Trajectory of trial 0: t, x, xhat, event flags and the
/// trigger reference band for level schemes.
Table trajectory(const ScenarioConfig& config);

struct Crossover {
    std::size_t n = 0;
    double delta = 0.0;
    CostReport et;
    CostReport tt;
    /// Measured mean global inter-event time of the level scheme (TT period).
    double matched_T = 0.0;
    double difference = 0.0;
    double difference_ci = 0.0;
    double ratio = 0.0;
};

/// Scenario bl: level scheme at threshold delta, then the periodic scheme at
/// the measured global rate of the level scheme (same seeds).
Crossover compare_bl_at_matched_rate(std::size_t n, double delta,
                                     const ExperimentOptions& options);

}  // namespace etcsim
