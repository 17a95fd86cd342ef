#include "etcsim/control.hpp"

#include <algorithm>
#include <stdexcept>

namespace etcsim {
namespace {

bool contains(std::span<const std::size_t> set, std::size_t agent) {
    return std::find(set.begin(), set.end(), agent) != set.end();
}

std::size_t leader_of(std::span<const std::size_t> initiators) {
    return *std::min_element(initiators.begin(), initiators.end());
}

}  // namespace

double consensus_point(const SimState& state, std::span<const std::size_t> initiators,
                       const ConsensusRule& rule, InfoScenario scenario) {
    if (initiators.empty()) throw std::invalid_argument("consensus_point: no initiators");
    for (auto i : initiators) {
        if (i >= state.size()) throw std::invalid_argument("consensus_point: agent out of range");
    }
    if (const auto* fixed = std::get_if<FixedRule>(&rule)) return fixed->point;
    if (std::holds_alternative<LeaderRule>(rule)) return state.x[leader_of(initiators)];

    const std::size_t n = state.size();
    double sum = 0.0;
    if (scenario == InfoScenario::BroadcastPlusLocal) {
        for (double v : state.x) sum += v;
    } else {
        // initiators reveal their state, everyone else is still believed at
        // the previous consensus point
        for (std::size_t i = 0; i < n; ++i) sum += contains(initiators, i) ? state.x[i] : state.xhat[i];
    }
    return sum / static_cast<double>(n);
}

std::vector<double> impulse_broadcast(const SimState& state,
                                      std::span<const std::size_t> initiators, double c) {
    std::vector<double> jumps(state.size());
    for (std::size_t i = 0; i < state.size(); ++i) {
        const double estimate = contains(initiators, i) ? state.x[i] : state.xhat[i];
        jumps[i] = c - estimate;
    }
    return jumps;
}

std::vector<double> impulse_local(const SimState& state, double c) {
    std::vector<double> jumps(state.size());
    for (std::size_t i = 0; i < state.size(); ++i) jumps[i] = c - state.x[i];
    return jumps;
}

void commit_event(SimState& state, std::span<const std::size_t> initiators, double c,
                  InfoScenario scenario) {
    if (scenario == InfoScenario::BroadcastPlusLocal) {
        std::fill(state.x.begin(), state.x.end(), c);
    } else {
        for (auto i : initiators) state.x[i] = c;
    }
    std::fill(state.xhat.begin(), state.xhat.end(), c);
    state.x_at_last_global = state.x;
    for (auto i : initiators) state.last_local_trigger[i] = state.t;
    state.last_global_trigger = state.t;
    state.last_consensus_point = c;
}

}  // namespace etcsim
