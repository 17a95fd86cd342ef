#pragma once

#include <cstddef>
#include <span>
#include <variant>
#include <vector>

#include "etcsim/state.hpp"
#include "etcsim/triggering.hpp"

namespace etcsim {

enum class InfoScenario {
    BroadcastOnly,       ///< controllers see broadcast information only
    BroadcastPlusLocal,  ///< plus their own state at every global trigger
};

/// Mean of the current estimates (initiators contribute their true state).
struct AverageRule {};
/// State of the smallest-index initiator.
struct LeaderRule {};
/// Constant consensus point. Needs no communication; for tests only.
struct FixedRule {
    double point = 0.0;
};

using ConsensusRule = std::variant<AverageRule, LeaderRule, FixedRule>;

/// Common consensus point at a triggering instant. Throws
/// std::invalid_argument on an empty initiator set.
double consensus_point(const SimState& state, std::span<const std::size_t> initiators,
                       const ConsensusRule& rule, InfoScenario scenario);

/// Broadcast-only jumps c - xhat_i, where initiators use their true state.
std::vector<double> impulse_broadcast(const SimState& state,
                                      std::span<const std::size_t> initiators, double c);

/// Jumps c - x_i that move every agent onto c.
std::vector<double> impulse_local(const SimState& state, double c);

/// Post-impulse bookkeeping at time state.t: estimates, snapshots, latest
/// trigger times. Snaps the states that the controller places exactly on c
/// (all agents with local information, initiators otherwise).
void commit_event(SimState& state, std::span<const std::size_t> initiators, double c,
                  InfoScenario scenario);

}  // namespace etcsim
