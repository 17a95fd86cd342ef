#include "etcsim/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <stdexcept>
#include <thread>

#include "etcsim/graph.hpp"
#include "etcsim/noise.hpp"
#include "etcsim/state.hpp"

namespace etcsim {
namespace {

std::size_t step_count(const ScenarioConfig& config) {
    return static_cast<std::size_t>(std::llround(config.horizon / config.dt));
}

double expected_interevent(const ScenarioConfig& config) {
    return std::visit(
        [&config](const auto& s) -> double {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, LevelBroadcast>) {
                return s.threshold * s.threshold;
            } else if constexpr (std::is_same_v<S, LevelGlobal>) {
                // lower bound: the cube exit time is at least 1/n of the single-agent one
                return s.threshold * s.threshold / static_cast<double>(config.n);
            } else {
                return s.period;
            }
        },
        config.scheme);
}

}  // namespace

std::vector<std::string> validate_config(const ScenarioConfig& config) {
    if (config.n == 0) throw std::invalid_argument("config: n must be >= 1");
    if (!(config.dt > 0.0) || !std::isfinite(config.dt))
        throw std::invalid_argument("config: dt must be positive");
    if (!(config.horizon >= config.dt) || !std::isfinite(config.horizon))
        throw std::invalid_argument("config: horizon must be at least one step");
    if (config.trials == 0) throw std::invalid_argument("config: trials must be >= 1");
    if (config.trajectory_stride == 0)
        throw std::invalid_argument("config: trajectory stride must be >= 1");
    if (!std::isfinite(config.noise_scale))
        throw std::invalid_argument("config: noise scale must be finite");
    validate_scheme(config.scheme, config.n);

    const bool broadcast_only = config.scenario == InfoScenario::BroadcastOnly;
    if (std::holds_alternative<LevelBroadcast>(config.scheme) && !broadcast_only)
        throw std::invalid_argument("config: the per-agent level rule needs the broadcast-only scenario");
    if (std::holds_alternative<LevelGlobal>(config.scheme) && broadcast_only)
        throw std::invalid_argument("config: the global level rule needs the broadcast-plus-local scenario");
    if (std::holds_alternative<PeriodicAsync>(config.scheme) && !broadcast_only)
        throw std::invalid_argument("config: asynchronous periodic triggering needs the broadcast-only scenario");

    std::vector<std::string> warnings;
    if (config.horizon < 100.0 * expected_interevent(config)) {
        warnings.push_back("horizon covers fewer than 100 expected inter-event times");
    }
    return warnings;
}

TrialResult run_trial(const ScenarioConfig& config, std::size_t trial_index) {
    validate_config(config);
    const std::size_t n = config.n;
    const double dt = config.dt;
    const CompleteGraph graph(n);
    SimState state(n);
    NoiseStream stream(config.seed, trial_index, config.noise_scale);
    TrialResult result{CostAccumulator(n), std::nullopt, std::nullopt};
    CostAccumulator& acc = result.accumulator;
    if (config.record_events) result.event_log.emplace();
    if (config.record_trajectory) {
        result.trajectory.emplace();
        result.trajectory->push_back({0.0, state.x, state.xhat, std::vector<std::uint8_t>(n, 0), false});
    }

    std::optional<PeriodicClock> clock;
    if (is_periodic(config.scheme)) clock.emplace(config.scheme, n);

    std::vector<double> dw(n);
    std::vector<double> deviation(n);
    const std::size_t steps = step_count(config);
    for (std::size_t step = 1; step <= steps; ++step) {
        stream.wiener_increments(dt, dw);
        drift_step(state, dw, dt);
        state.t = static_cast<double>(step) * dt;

        AgentSet initiators;
        if (clock) {
            initiators = clock->due(state.t, dt);
        } else if (const auto* level = std::get_if<LevelBroadcast>(&config.scheme)) {
            initiators = check_level_broadcast(state, level->threshold);
        } else {
            initiators = check_level_global(state, std::get<LevelGlobal>(config.scheme).threshold);
        }

        // cost of the step is charged to the pre-jump state
        acc.accumulate(consensus_cost(graph, state.x), dt);
        for (std::size_t i = 0; i < n; ++i) deviation[i] = state.x[i] - state.xhat[i];
        acc.accumulate_deviation(deviation, dt);

        if (!initiators.empty()) {
            TriggerEvent event;
            if (result.event_log) {
                event.x_pre = state.x;
                event.xhat_pre = state.xhat;
            }
            const double c = consensus_point(state, initiators, config.rule, config.scenario);
            const auto jumps = config.scenario == InfoScenario::BroadcastOnly
                                   ? impulse_broadcast(state, initiators, c)
                                   : impulse_local(state, c);
            apply_impulse(state, jumps);
            commit_event(state, initiators, c, config.scenario);

            acc.count_event(initiators);
            if (config.scenario == InfoScenario::BroadcastOnly) {
                for (auto i : initiators) acc.close_cycle(i, state.t);
            } else {
                for (std::size_t i = 0; i < n; ++i) acc.close_cycle(i, state.t);
            }

            if (result.event_log) {
                event.time = state.t;
                event.initiators = initiators;
                event.consensus_point = c;
                event.is_global = true;
                event.x_post = state.x;
                event.xhat_post = state.xhat;
                result.event_log->push_back(std::move(event));
            }
        }

        if (result.trajectory && (!initiators.empty() || step % config.trajectory_stride == 0)) {
            std::vector<std::uint8_t> flags(n, 0);
            for (auto i : initiators) flags[i] = 1;
            result.trajectory->push_back(
                {state.t, state.x, state.xhat, std::move(flags), !initiators.empty()});
        }
    }
    return result;
}

std::size_t worker_count() {
    if (const char* env = std::getenv("THREADS")) {
        const long value = std::strtol(env, nullptr, 10);
        if (value > 0) return static_cast<std::size_t>(value);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<TrialResult> run_trials(const ScenarioConfig& config) {
    validate_config(config);
    const std::size_t trials = config.trials;
    std::vector<std::optional<TrialResult>> slots(trials);
    std::vector<std::exception_ptr> errors(trials);
    std::atomic<std::size_t> next{0};

    auto work = [&] {
        for (std::size_t k = next++; k < trials; k = next++) {
            try {
                slots[k].emplace(run_trial(config, k));
            } catch (...) {
                errors[k] = std::current_exception();
            }
        }
    };
    const std::size_t workers = std::min(worker_count(), trials);
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    }

    std::vector<TrialResult> results;
    results.reserve(trials);
    for (std::size_t k = 0; k < trials; ++k) {
        if (errors[k]) std::rethrow_exception(errors[k]);
        results.push_back(std::move(*slots[k]));
    }
    return results;
}

CostReport run_batch(const ScenarioConfig& config) {
    auto results = run_trials(config);
    std::vector<CostAccumulator> accs;
    accs.reserve(results.size());
    for (auto& r : results) accs.push_back(std::move(r.accumulator));
    return finalize(accs);
}

}  // namespace etcsim
