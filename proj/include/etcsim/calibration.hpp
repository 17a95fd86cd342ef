#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

#include "etcsim/noise.hpp"
#include "etcsim/triggering.hpp"

namespace etcsim {

enum class CalibrationMethod { ScalingLaw, Bisection };

struct CalibrationResult {
    double delta_star = 0.0;
    double target_T = 0.0;
    double achieved_T = 0.0;
    double ci_halfwidth = 0.0;
    std::size_t samples_used = 0;
    CalibrationMethod method = CalibrationMethod::ScalingLaw;
    /// Mean unit-cube exit time m_n (ScalingLaw only, 0 otherwise).
    double unit_exit_time = 0.0;
    std::size_t iterations = 0;
};

class CalibrationError : public std::runtime_error {
public:
    CalibrationError(const std::string& what, CalibrationResult diagnostics)
        : std::runtime_error(what), diagnostics_(diagnostics) {}

    const CalibrationResult& diagnostics() const noexcept { return diagnostics_; }

private:
    CalibrationResult diagnostics_;
};

struct CalibrationOptions {
    CalibrationMethod method = CalibrationMethod::ScalingLaw;
    double dt = 1e-3;
    double tolerance = 0.03;
    bool bridge_correction = true;
    /// Passages used to estimate m_n.
    std::size_t samples = 100'000;
    /// Passages of the independent verification run.
    std::size_t verify_samples = 25'000;
    /// m_n is re-estimated with doubled samples until this budget is spent.
    std::size_t max_samples = 400'000;
    /// Passages per bisection iterate (common random numbers across iterates).
    std::size_t bisection_samples = 20'000;
    double bisection_rel_width = 1e-3;
    std::size_t bisection_max_iter = 60;
};

/// Broadcast-only threshold for a target local mean inter-event time:
/// sqrt(target), since E[T] = threshold^2 for one agent. achieved_T is an MC
/// check with options.verify_samples passages.
CalibrationResult calibrate_delta_b(double target_T_local, const NoiseStream& stream,
                                    const CalibrationOptions& options = {});

/// Global level threshold for n agents and a target global mean inter-event
/// time. Throws CalibrationError when the verification run misses the target
/// by more than options.tolerance.
CalibrationResult calibrate_delta_bl(std::size_t n, double target_T_global,
                                     const NoiseStream& stream,
                                     const CalibrationOptions& options = {});

}  // namespace etcsim
