#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "etcsim/control.hpp"
#include "etcsim/cost.hpp"
#include "etcsim/triggering.hpp"

namespace etcsim {

struct ScenarioConfig {
    std::size_t n = 3;
    InfoScenario scenario = InfoScenario::BroadcastOnly;
    TriggerScheme scheme = PeriodicSync{0.5};
    ConsensusRule rule = AverageRule{};
    double dt = 2e-3;
    double horizon = 2000.0;
    std::size_t trials = 8;
    std::uint64_t seed = 1;
    bool record_events = false;
    bool record_trajectory = false;
    std::size_t trajectory_stride = 50;
    double noise_scale = 1.0;
};

/// Throws std::invalid_argument for inconsistent configs (including
/// scheme/scenario mismatches). Returns soft warnings, e.g. a horizon shorter
/// than 100 expected inter-event times.
std::vector<std::string> validate_config(const ScenarioConfig& config);

struct TrajectorySample {
    double t = 0.0;
    std::vector<double> x;
    std::vector<double> xhat;
    /// 1 for agents that initiated an event at t.
    std::vector<std::uint8_t> triggered;
    bool event = false;
};

struct TrialResult {
    CostAccumulator accumulator;
    std::optional<std::vector<TriggerEvent>> event_log;
    std::optional<std::vector<TrajectorySample>> trajectory;
};

/// One closed-loop trial; a pure function of (config, trial_index).
TrialResult run_trial(const ScenarioConfig& config, std::size_t trial_index);

/// Trials 0..config.trials-1, run on a worker pool (THREADS overrides the
/// worker count), returned in trial order.
std::vector<TrialResult> run_trials(const ScenarioConfig& config);

CostReport run_batch(const ScenarioConfig& config);

/// Worker count: THREADS if set and positive, otherwise hardware concurrency.
std::size_t worker_count();

}  // namespace etcsim
