#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace etcsim {

/// Fleet state plus triggering bookkeeping. Everything starts at zero: the
/// agents begin in consensus at the origin and t = 0 counts as a global
/// triggering instant.
struct SimState {
    explicit SimState(std::size_t n);

    std::size_t size() const noexcept { return x.size(); }

    double t = 0.0;
    std::vector<double> x;
    /// Estimate of each agent's state right before a potential trigger.
    std::vector<double> xhat;
    std::vector<double> last_local_trigger;
    double last_global_trigger = 0.0;
    double last_consensus_point = 0.0;
    /// x at the latest global trigger (the reference of the global level rule).
    std::vector<double> x_at_last_global;
};

/// One Euler-Maruyama step of dx = u dt + dv with u = 0 between impulses:
/// x += dw, t += dt. Estimates are left alone.
void drift_step(SimState& state, std::span<const double> dw, double dt);

/// Instantaneous jump x += jumps at fixed t. Bookkeeping is the caller's job.
void apply_impulse(SimState& state, std::span<const double> jumps);

}  // namespace etcsim
