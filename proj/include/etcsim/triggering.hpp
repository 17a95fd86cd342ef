#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "etcsim/noise.hpp"
#include "etcsim/state.hpp"

namespace etcsim {

/// Agent indices, ascending, no duplicates.
using AgentSet = std::vector<std::size_t>;

/// Every agent triggers at k*period.
struct PeriodicSync {
    double period = 0.0;
};

/// Agent i triggers at offsets[i] + k*period.
struct PeriodicAsync {
    double period = 0.0;
    std::vector<double> offsets;
};

/// Agent i triggers when |x_i - xhat_i| >= threshold (broadcast-only scenario).
struct LevelBroadcast {
    double threshold = 0.0;
};

/// A global event fires when some |x_i - x_i(t_k)| >= threshold, measured
/// from the latest global reset (broadcast-plus-local scenario).
struct LevelGlobal {
    double threshold = 0.0;
};

using TriggerScheme = std::variant<PeriodicSync, PeriodicAsync, LevelBroadcast, LevelGlobal>;

/// Checks parameter ranges; throws std::invalid_argument.
void validate_scheme(const TriggerScheme& scheme, std::size_t n);

bool is_periodic(const TriggerScheme& scheme) noexcept;

struct TriggerEvent {
    double time = 0.0;
    AgentSet initiators;
    double consensus_point = 0.0;
    bool is_global = true;
    // Snapshots around the impulse.
    std::vector<double> x_pre;
    std::vector<double> x_post;
    std::vector<double> xhat_pre;
    std::vector<double> xhat_post;
};

AgentSet check_level_broadcast(const SimState& state, double threshold);

AgentSet check_level_global(const SimState& state, double threshold);

/// Agents whose schedule has a deadline in (t - dt/2, t + dt/2], i.e. the
/// deadlines that round to the grid point t. t = 0 never triggers.
AgentSet check_periodic(double t, const TriggerScheme& scheme, double dt, std::size_t n);

/// Incremental form of check_periodic used by the step loop: one pending
/// deadline per agent, advanced by the period after it fires.
class PeriodicClock {
public:
    PeriodicClock(const TriggerScheme& scheme, std::size_t n);

    AgentSet due(double t, double dt);

private:
    double period_;
    std::vector<double> next_deadline_;
};

/// Probability that a Brownian bridge from a to b over a step of length dt
/// touches +threshold or -threshold. Both endpoints must lie strictly inside.
double bridge_exit_probability(double a, double b, double threshold, double dt);

/// One sampled exit time of a standard Brownian motion started at 0 from
/// [-threshold, threshold], monitored on the dt grid. With bridge_correction
/// a crossing between grid points is detected with its bridge probability.
double sample_first_passage_single(NoiseStream& stream, double threshold, double dt,
                                   bool bridge_correction);

/// One sampled exit time of n independent Brownian motions from the cube
/// [-threshold, threshold]^n.
double sample_first_passage_min(NoiseStream& stream, std::size_t n, double threshold, double dt,
                                bool bridge_correction);

struct PassageStats {
    double mean = 0.0;
    double stddev = 0.0;
    double ci_halfwidth = 0.0;
    std::size_t samples = 0;
};

/// Sample mean of the cube exit time. Sample k draws from base.split(k), so
/// calls that differ only in threshold use common random numbers and their
/// sample means are pathwise monotone in the threshold.
PassageStats mean_first_passage(const NoiseStream& base, std::size_t n, double threshold,
                                double dt, bool bridge_correction, std::size_t samples);

}  // namespace etcsim
