#include "etcsim/triggering.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace etcsim {
namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_positive(double value, const char* what) {
    if (!(value > 0.0) || !std::isfinite(value))
        throw std::invalid_argument(std::string(what) + " must be positive and finite");
}

double period_of(const TriggerScheme& scheme) {
    if (const auto* s = std::get_if<PeriodicSync>(&scheme)) return s->period;
    if (const auto* a = std::get_if<PeriodicAsync>(&scheme)) return a->period;
    throw std::invalid_argument("periodic trigger check on a level scheme");
}

double offset_of(const TriggerScheme& scheme, std::size_t agent) {
    if (const auto* a = std::get_if<PeriodicAsync>(&scheme)) return a->offsets.at(agent);
    return 0.0;
}

}  // namespace

void validate_scheme(const TriggerScheme& scheme, std::size_t n) {
    std::visit(overloaded{
                   [](const PeriodicSync& s) { require_positive(s.period, "period"); },
                   [n](const PeriodicAsync& s) {
                       require_positive(s.period, "period");
                       if (s.offsets.size() != n)
                           throw std::invalid_argument("periodic-async: need one offset per agent");
                       for (double o : s.offsets) {
                           if (!(o >= 0.0 && o < s.period))
                               throw std::invalid_argument("periodic-async: offsets must lie in [0, period)");
                       }
                   },
                   [](const LevelBroadcast& s) { require_positive(s.threshold, "threshold"); },
                   [](const LevelGlobal& s) { require_positive(s.threshold, "threshold"); },
               },
               scheme);
}

bool is_periodic(const TriggerScheme& scheme) noexcept {
    return std::holds_alternative<PeriodicSync>(scheme) ||
           std::holds_alternative<PeriodicAsync>(scheme);
}

AgentSet check_level_broadcast(const SimState& state, double threshold) {
    AgentSet hit;
    for (std::size_t i = 0; i < state.size(); ++i) {
        if (std::abs(state.x[i] - state.xhat[i]) >= threshold) hit.push_back(i);
    }
    return hit;
}

AgentSet check_level_global(const SimState& state, double threshold) {
    AgentSet hit;
    for (std::size_t i = 0; i < state.size(); ++i) {
        if (std::abs(state.x[i] - state.x_at_last_global[i]) >= threshold) hit.push_back(i);
    }
    return hit;
}

AgentSet check_periodic(double t, const TriggerScheme& scheme, double dt, std::size_t n) {
    const double period = period_of(scheme);
    const double half = 0.5 * dt;
    AgentSet hit;
    for (std::size_t i = 0; i < n; ++i) {
        const double offset = offset_of(scheme, i);
        const double k = std::floor((t + half - offset) / period);
        if (k < 0.0) continue;
        const double deadline = offset + k * period;
        if (deadline > t - half && deadline > 0.0) hit.push_back(i);
    }
    return hit;
}

PeriodicClock::PeriodicClock(const TriggerScheme& scheme, std::size_t n)
    : period_(period_of(scheme)), next_deadline_(n) {
    for (std::size_t i = 0; i < n; ++i) {
        const double offset = offset_of(scheme, i);
        // t = 0 is already a triggering instant for everyone
        next_deadline_[i] = offset > 0.0 ? offset : period_;
    }
}

AgentSet PeriodicClock::due(double t, double dt) {
    const double edge = t + 0.5 * dt;
    AgentSet hit;
    for (std::size_t i = 0; i < next_deadline_.size(); ++i) {
        if (next_deadline_[i] <= edge) {
            hit.push_back(i);
            while (next_deadline_[i] <= edge) next_deadline_[i] += period_;
        }
    }
    return hit;
}

double bridge_exit_probability(double a, double b, double threshold, double dt) {
    // exponents beyond the resolution of a double-precision uniform count as 0
    constexpr double negligible = 40.0;
    const double up_exp = 2.0 * (threshold - a) * (threshold - b) / dt;
    const double down_exp = 2.0 * (threshold + a) * (threshold + b) / dt;
    const double up = up_exp > negligible ? 0.0 : std::exp(-up_exp);
    const double down = down_exp > negligible ? 0.0 : std::exp(-down_exp);
    return std::min(1.0, up + down - up * down);
}

double sample_first_passage_min(NoiseStream& stream, std::size_t n, double threshold, double dt,
                                bool bridge_correction) {
    if (n == 0) throw std::invalid_argument("sample_first_passage_min: n must be >= 1");
    require_positive(threshold, "threshold");
    require_positive(dt, "dt");
    if (stream.scale() == 0.0)
        throw std::invalid_argument("first passage sampling needs a noisy stream");
    // crossing probabilities use the per-step variance of the scaled stream
    const double step_var = dt * stream.scale() * stream.scale();

    std::vector<double> x(n, 0.0);
    std::vector<double> dw(n);
    std::vector<double> u(n);
    double t = 0.0;
    for (std::size_t step = 1;; ++step) {
        stream.wiener_increments(dt, dw);
        // uniforms are drawn every step so the draw sequence does not depend
        // on the threshold (common random numbers stay aligned)
        if (bridge_correction) {
            for (double& v : u) v = stream.uniform();
        }
        t = static_cast<double>(step) * dt;
        bool exited = false;
        for (std::size_t i = 0; i < n; ++i) {
            const double prev = x[i];
            x[i] += dw[i];
            if (std::abs(x[i]) >= threshold) {
                exited = true;
            } else if (bridge_correction &&
                       u[i] < bridge_exit_probability(prev, x[i], threshold, step_var)) {
                exited = true;
            }
        }
        if (exited) return t;
    }
}

double sample_first_passage_single(NoiseStream& stream, double threshold, double dt,
                                   bool bridge_correction) {
    return sample_first_passage_min(stream, 1, threshold, dt, bridge_correction);
}

PassageStats mean_first_passage(const NoiseStream& base, std::size_t n, double threshold,
                                double dt, bool bridge_correction, std::size_t samples) {
    if (samples == 0) throw std::invalid_argument("mean_first_passage: samples must be >= 1");
    double mean = 0.0;
    double m2 = 0.0;
    for (std::size_t k = 0; k < samples; ++k) {
        NoiseStream stream = base.split(k);
        const double t = sample_first_passage_min(stream, n, threshold, dt, bridge_correction);
        const double delta = t - mean;
        mean += delta / static_cast<double>(k + 1);
        m2 += delta * (t - mean);
    }
    PassageStats stats;
    stats.mean = mean;
    stats.samples = samples;
    stats.stddev = samples > 1 ? std::sqrt(m2 / static_cast<double>(samples - 1)) : 0.0;
    stats.ci_halfwidth = 1.96 * stats.stddev / std::sqrt(static_cast<double>(samples));
    return stats;
}

}  // namespace etcsim
