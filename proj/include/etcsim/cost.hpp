#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace etcsim {

/// Per-trial cost bookkeeping.
///
/// Besides the time integral of x^T L x it keeps a renewal decomposition: for
/// every agent, the integral of its squared deviation from its estimate over
/// each completed renewal cycle, together with the cycle length.
class CostAccumulator {
public:
    explicit CostAccumulator(std::size_t n);

    /// Left-endpoint rectangle: integral += cost_value * dt, elapsed += dt.
    void accumulate(double cost_value, double dt);

    /// Adds deviation_i^2 * dt to each agent's open cycle.
    void accumulate_deviation(std::span<const double> deviation, double dt);

    /// Closes the open cycle of agent at time now and opens the next one.
    void close_cycle(std::size_t agent, double now);

    void count_event(std::span<const std::size_t> initiators);

    /// Merging equals accumulating the concatenated data. Open cycles of the
    /// merged-in accumulator are dropped.
    void merge(const CostAccumulator& other);

    std::size_t agents() const noexcept { return n_; }
    double integral_sum() const noexcept { return integral_sum_; }
    double elapsed() const noexcept { return elapsed_; }
    const std::vector<double>& per_renewal_costs() const noexcept { return renewal_costs_; }
    const std::vector<double>& per_renewal_lengths() const noexcept { return renewal_lengths_; }
    const std::vector<std::size_t>& local_event_counts() const noexcept { return local_counts_; }
    std::size_t global_event_count() const noexcept { return global_count_; }

private:
    std::size_t n_;
    double integral_sum_ = 0.0;
    double elapsed_ = 0.0;
    std::vector<double> renewal_costs_;
    std::vector<double> renewal_lengths_;
    std::vector<std::size_t> local_counts_;
    std::size_t global_count_ = 0;
    std::vector<double> open_cost_;
    std::vector<double> open_start_;
};

struct CostReport {
    std::size_t n = 0;
    std::size_t trials = 0;
    double j_time_avg = 0.0;
    /// 95% Student-t half-width across trials (0 for a single trial).
    double ci_halfwidth = 0.0;
    double j_renewal = 0.0;
    double j_renewal_ci = 0.0;
    double mean_local_interevent = 0.0;
    double mean_global_interevent = 0.0;
    std::vector<double> per_trial_j;
    std::vector<double> per_trial_global_interevent;
};

/// Combines per-trial accumulators. Throws std::logic_error when a trial has
/// zero elapsed time, std::invalid_argument on an empty list.
CostReport finalize(std::span<const CostAccumulator> trials);

/// 95% two-sided Student-t half-width of the mean of values (0 if fewer than 2).
double ci_halfwidth_95(std::span<const double> values);

// Closed-form costs for the optimal controllers.

/// Periodic, broadcast-only, local period T_local: n(n-1) T_local / 2.
double j_tt_b(std::size_t n, double t_local);
/// Level-triggered, broadcast-only: n(n-1) threshold^2 / 6.
double j_et_b(std::size_t n, double threshold);
/// Periodic, broadcast plus local, global period: n(n-1) T_global / 2.
double j_tt_bl(std::size_t n, double t_global);

/// Equal global triggering rates: n local schedules of period T_local merge
/// into one global schedule of period T_local / n.
double rate_match_local_to_global(std::size_t n, double t_local);
double rate_match_global_to_local(std::size_t n, double t_global);

/// Cost gap between the two periodic schemes at equal global rates (= n).
double tt_information_gap(std::size_t n);
/// The same gap evaluated as j_tt_b(n, n T) / j_tt_bl(n, T).
double tt_information_gap(std::size_t n, double t_global);

/// E[int_0^T B(t)^2 dt] for the first exit T of a standard Brownian motion
/// from [-threshold, threshold]: threshold^4 / 6.
double expected_occupation_integral(double threshold);

}  // namespace etcsim
