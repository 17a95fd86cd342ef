#include "etcsim/state.hpp"

#include <stdexcept>
#include <string>

namespace etcsim {
namespace {

void require_size(const SimState& state, std::size_t got, const char* what) {
    if (got != state.size()) throw std::invalid_argument(std::string(what) + ": dimension mismatch");
}

}  // namespace

SimState::SimState(std::size_t n)
    : x(n, 0.0), xhat(n, 0.0), last_local_trigger(n, 0.0), x_at_last_global(n, 0.0) {
    if (n == 0) throw std::invalid_argument("SimState: need at least one agent");
}

void drift_step(SimState& state, std::span<const double> dw, double dt) {
    require_size(state, dw.size(), "drift_step");
    if (!(dt > 0.0)) throw std::invalid_argument("drift_step: dt must be positive");
    for (std::size_t i = 0; i < dw.size(); ++i) state.x[i] += dw[i];
    state.t += dt;
}

void apply_impulse(SimState& state, std::span<const double> jumps) {
    require_size(state, jumps.size(), "apply_impulse");
    for (std::size_t i = 0; i < jumps.size(); ++i) state.x[i] += jumps[i];
}

}  // namespace etcsim
