#include "etcsim/calibration.hpp"

#include <cmath>
#include <sstream>

namespace etcsim {
namespace {

// substream keys, one per role
constexpr std::uint64_t kUnitExitKey = 1;
constexpr std::uint64_t kVerifyKey = 2;
constexpr std::uint64_t kBisectionKey = 3;

void check_inputs(std::size_t n, double target, const CalibrationOptions& options) {
    if (n == 0) throw std::invalid_argument("calibration: n must be >= 1");
    if (!(target > 0.0)) throw std::invalid_argument("calibration: target must be positive");
    if (!(options.tolerance > 0.0 && options.tolerance <= 0.2))
        throw std::invalid_argument("calibration: tolerance must lie in (0, 0.2]");
    if (!(options.dt > 0.0)) throw std::invalid_argument("calibration: dt must be positive");
    if (options.samples == 0 || options.verify_samples == 0)
        throw std::invalid_argument("calibration: sample budgets must be positive");
}

bool within(double achieved, double target, double tolerance) {
    return std::abs(achieved - target) <= tolerance * target;
}

std::string describe_failure(const CalibrationResult& r, double tolerance) {
    std::ostringstream msg;
    msg << "calibration failed: threshold " << r.delta_star << " gives mean inter-event time "
        << r.achieved_T << " (+/- " << r.ci_halfwidth << ") for target " << r.target_T
        << ", tolerance " << tolerance * 100.0 << "% after " << r.samples_used << " samples";
    return msg.str();
}

PassageStats verify(const NoiseStream& stream, std::size_t round, std::size_t n, double delta,
                    const CalibrationOptions& options) {
    return mean_first_passage(stream.split(kVerifyKey).split(round), n, delta, options.dt,
                              options.bridge_correction, options.verify_samples);
}

CalibrationResult scaling_law(std::size_t n, double target, const NoiseStream& stream,
                              const CalibrationOptions& options) {
    CalibrationResult result;
    result.method = CalibrationMethod::ScalingLaw;
    result.target_T = target;

    // E[T(delta)] = delta^2 * m_n by Brownian scaling, so one estimate of the
    // unit-cube exit time serves every target
    double unit_sum = 0.0;
    std::size_t unit_samples = 0;
    std::size_t batch = options.samples;
    for (std::size_t round = 0;; ++round) {
        const auto unit = mean_first_passage(stream.split(kUnitExitKey).split(round), n, 1.0,
                                             options.dt, options.bridge_correction, batch);
        unit_sum += unit.mean * static_cast<double>(batch);
        unit_samples += batch;
        result.unit_exit_time = unit_sum / static_cast<double>(unit_samples);
        result.delta_star = std::sqrt(target / result.unit_exit_time);

        const auto check = verify(stream, round, n, result.delta_star, options);
        result.achieved_T = check.mean;
        result.ci_halfwidth = check.ci_halfwidth;
        result.samples_used += batch + check.samples;
        result.iterations = round + 1;
        if (within(check.mean, target, options.tolerance)) return result;
        if (unit_samples >= options.max_samples) break;
        batch = unit_samples;
    }
    throw CalibrationError(describe_failure(result, options.tolerance), result);
}

CalibrationResult bisection(std::size_t n, double target, const NoiseStream& stream,
                            const CalibrationOptions& options) {
    CalibrationResult result;
    result.method = CalibrationMethod::Bisection;
    result.target_T = target;

    // the same base stream for every iterate: common random numbers make the
    // estimated map delta -> E[T] monotone pathwise
    const NoiseStream base = stream.split(kBisectionKey);
    auto mean_at = [&](double delta) {
        result.samples_used += options.bisection_samples;
        ++result.iterations;
        return mean_first_passage(base, n, delta, options.dt, options.bridge_correction,
                                  options.bisection_samples)
            .mean;
    };

    double lo = std::sqrt(target);
    while (mean_at(lo) > target) lo *= 0.5;
    double hi = 2.0 * lo;
    while (mean_at(hi) < target) hi *= 2.0;
    for (std::size_t iter = 0; iter < options.bisection_max_iter; ++iter) {
        if ((hi - lo) <= options.bisection_rel_width * hi) break;
        const double mid = 0.5 * (lo + hi);
        (mean_at(mid) < target ? lo : hi) = mid;
    }
    result.delta_star = 0.5 * (lo + hi);

    const auto check = verify(stream, 0, n, result.delta_star, options);
    result.achieved_T = check.mean;
    result.ci_halfwidth = check.ci_halfwidth;
    result.samples_used += check.samples;
    if (!within(check.mean, target, options.tolerance))
        throw CalibrationError(describe_failure(result, options.tolerance), result);
    return result;
}

}  // namespace

CalibrationResult calibrate_delta_b(double target_T_local, const NoiseStream& stream,
                                    const CalibrationOptions& options) {
    check_inputs(1, target_T_local, options);
    CalibrationResult result;
    result.method = CalibrationMethod::ScalingLaw;
    result.target_T = target_T_local;
    result.unit_exit_time = 1.0;
    result.delta_star = std::sqrt(target_T_local);
    const auto check = verify(stream, 0, 1, result.delta_star, options);
    result.achieved_T = check.mean;
    result.ci_halfwidth = check.ci_halfwidth;
    result.samples_used = check.samples;
    result.iterations = 1;
    return result;
}

CalibrationResult calibrate_delta_bl(std::size_t n, double target_T_global,
                                     const NoiseStream& stream,
                                     const CalibrationOptions& options) {
    check_inputs(n, target_T_global, options);
    if (options.method == CalibrationMethod::Bisection)
        return bisection(n, target_T_global, stream, options);
    return scaling_law(n, target_T_global, stream, options);
}

}  // namespace etcsim
