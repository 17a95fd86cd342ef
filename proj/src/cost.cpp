#include "etcsim/cost.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include <boost/math/distributions/students_t.hpp>

namespace etcsim {

CostAccumulator::CostAccumulator(std::size_t n)
    : n_(n), local_counts_(n, 0), open_cost_(n, 0.0), open_start_(n, 0.0) {}

void CostAccumulator::accumulate(double cost_value, double dt) {
    if (!(cost_value >= 0.0)) throw std::invalid_argument("accumulate: cost must be nonnegative");
    if (!(dt > 0.0)) throw std::invalid_argument("accumulate: dt must be positive");
    integral_sum_ += cost_value * dt;
    elapsed_ += dt;
}

void CostAccumulator::accumulate_deviation(std::span<const double> deviation, double dt) {
    if (deviation.size() != n_) throw std::invalid_argument("accumulate_deviation: dimension mismatch");
    for (std::size_t i = 0; i < n_; ++i) open_cost_[i] += deviation[i] * deviation[i] * dt;
}

void CostAccumulator::close_cycle(std::size_t agent, double now) {
    renewal_costs_.push_back(open_cost_.at(agent));
    renewal_lengths_.push_back(now - open_start_[agent]);
    open_cost_[agent] = 0.0;
    open_start_[agent] = now;
}

void CostAccumulator::count_event(std::span<const std::size_t> initiators) {
    for (auto i : initiators) ++local_counts_.at(i);
    ++global_count_;
}

void CostAccumulator::merge(const CostAccumulator& other) {
    if (other.n_ != n_) throw std::invalid_argument("merge: agent counts differ");
    integral_sum_ += other.integral_sum_;
    elapsed_ += other.elapsed_;
    renewal_costs_.insert(renewal_costs_.end(), other.renewal_costs_.begin(), other.renewal_costs_.end());
    renewal_lengths_.insert(renewal_lengths_.end(), other.renewal_lengths_.begin(),
                            other.renewal_lengths_.end());
    for (std::size_t i = 0; i < n_; ++i) local_counts_[i] += other.local_counts_[i];
    global_count_ += other.global_count_;
}

double ci_halfwidth_95(std::span<const double> values) {
    const std::size_t k = values.size();
    if (k < 2) return 0.0;
    const double mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(k);
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / static_cast<double>(k - 1));
    const boost::math::students_t dist(static_cast<double>(k - 1));
    return boost::math::quantile(dist, 0.975) * sd / std::sqrt(static_cast<double>(k));
}

CostReport finalize(std::span<const CostAccumulator> trials) {
    if (trials.empty()) throw std::invalid_argument("finalize: no trials");
    constexpr double inf = std::numeric_limits<double>::infinity();
    const std::size_t n = trials.front().agents();
    const double pairs = static_cast<double>(n) * static_cast<double>(n - 1);

    CostReport report;
    report.n = n;
    report.trials = trials.size();
    std::vector<double> renewal;
    double elapsed = 0.0;
    double local_events = 0.0;
    double global_events = 0.0;
    for (const auto& acc : trials) {
        if (acc.agents() != n) throw std::invalid_argument("finalize: agent counts differ");
        if (!(acc.elapsed() > 0.0)) throw std::logic_error("finalize: trial with zero elapsed time");
        report.per_trial_j.push_back(acc.integral_sum() / acc.elapsed());
        report.per_trial_global_interevent.push_back(
            acc.global_event_count() > 0 ? acc.elapsed() / static_cast<double>(acc.global_event_count())
                                         : inf);

        const auto& lengths = acc.per_renewal_lengths();
        const double total_length = std::accumulate(lengths.begin(), lengths.end(), 0.0);
        const auto& costs = acc.per_renewal_costs();
        const double total_cost = std::accumulate(costs.begin(), costs.end(), 0.0);
        renewal.push_back(total_length > 0.0 ? pairs * total_cost / total_length : 0.0);

        elapsed += acc.elapsed();
        global_events += static_cast<double>(acc.global_event_count());
        for (auto c : acc.local_event_counts()) local_events += static_cast<double>(c);
    }
    const double k = static_cast<double>(trials.size());
    report.j_time_avg = std::accumulate(report.per_trial_j.begin(), report.per_trial_j.end(), 0.0) / k;
    report.ci_halfwidth = ci_halfwidth_95(report.per_trial_j);
    report.j_renewal = std::accumulate(renewal.begin(), renewal.end(), 0.0) / k;
    report.j_renewal_ci = ci_halfwidth_95(renewal);
    report.mean_global_interevent = global_events > 0.0 ? elapsed / global_events : inf;
    report.mean_local_interevent =
        local_events > 0.0 ? static_cast<double>(n) * elapsed / local_events : inf;
    return report;
}

namespace {

void require_agents(std::size_t n) {
    if (n == 0) throw std::invalid_argument("need at least one agent");
}

void require_positive(double v, const char* what) {
    if (!(v > 0.0)) throw std::invalid_argument(std::string(what) + " must be positive");
}

}  // namespace

double j_tt_b(std::size_t n, double t_local) {
    require_agents(n);
    require_positive(t_local, "period");
    return static_cast<double>(n) * static_cast<double>(n - 1) * t_local / 2.0;
}

double j_et_b(std::size_t n, double threshold) {
    require_agents(n);
    require_positive(threshold, "threshold");
    return static_cast<double>(n) * static_cast<double>(n - 1) * threshold * threshold / 6.0;
}

double j_tt_bl(std::size_t n, double t_global) {
    require_agents(n);
    require_positive(t_global, "period");
    return static_cast<double>(n) * static_cast<double>(n - 1) * t_global / 2.0;
}

double rate_match_local_to_global(std::size_t n, double t_local) {
    require_agents(n);
    require_positive(t_local, "period");
    return t_local / static_cast<double>(n);
}

double rate_match_global_to_local(std::size_t n, double t_global) {
    require_agents(n);
    require_positive(t_global, "period");
    return t_global * static_cast<double>(n);
}

double tt_information_gap(std::size_t n) {
    require_agents(n);
    return static_cast<double>(n);
}

double tt_information_gap(std::size_t n, double t_global) {
    const double bl = j_tt_bl(n, t_global);
    // n = 1 has zero cost in both schemes; the gap is n by continuity
    if (bl == 0.0) return static_cast<double>(n);
    return j_tt_b(n, rate_match_global_to_local(n, t_global)) / bl;
}

double expected_occupation_integral(double threshold) {
    if (!(threshold >= 0.0)) throw std::invalid_argument("threshold must be nonnegative");
    const double sq = threshold * threshold;
    return sq * sq / 6.0;
}

}  // namespace etcsim
