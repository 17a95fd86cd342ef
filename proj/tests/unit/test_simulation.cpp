#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "etcsim/graph.hpp"
#include "etcsim/simulation.hpp"

using namespace etcsim;

namespace {

ScenarioConfig make(std::size_t n, InfoScenario scenario, TriggerScheme scheme, double horizon,
                    std::size_t trials = 1) {
    ScenarioConfig c;
    c.n = n;
    c.scenario = scenario;
    c.scheme = std::move(scheme);
    c.horizon = horizon;
    c.trials = trials;
    c.seed = 17;
    return c;
}

}  // namespace

TEST_CASE("config validation") {
    auto c = make(3, InfoScenario::BroadcastPlusLocal, LevelBroadcast{1.0}, 10);
    CHECK_THROWS_AS(validate_config(c), std::invalid_argument);
    c = make(3, InfoScenario::BroadcastOnly, LevelGlobal{1.0}, 10);
    CHECK_THROWS_AS(validate_config(c), std::invalid_argument);
    c = make(3, InfoScenario::BroadcastPlusLocal, PeriodicAsync{1.0, {0.0, 0.3, 0.6}}, 10);
    CHECK_THROWS_AS(validate_config(c), std::invalid_argument);
    c = make(3, InfoScenario::BroadcastOnly, PeriodicSync{0.5}, 10);
    c.trials = 0;
    CHECK_THROWS_AS(validate_config(c), std::invalid_argument);
    CHECK_THROWS_AS(run_trial(make(0, InfoScenario::BroadcastOnly, PeriodicSync{0.5}, 10), 0),
                    std::invalid_argument);

    CHECK(validate_config(make(3, InfoScenario::BroadcastOnly, PeriodicSync{0.5}, 100)).empty());
    CHECK(validate_config(make(3, InfoScenario::BroadcastOnly, PeriodicSync{0.5}, 10)).size() == 1);
    CHECK(validate_config(make(3, InfoScenario::BroadcastPlusLocal, PeriodicSync{0.5}, 100)).empty());
}

TEST_CASE("a single agent has zero cost") {
    for (auto scheme : {TriggerScheme{PeriodicSync{0.5}}, TriggerScheme{LevelBroadcast{1.0}}}) {
        const auto r = run_trial(make(1, InfoScenario::BroadcastOnly, scheme, 50), 0);
        CHECK(r.accumulator.integral_sum() == 0.0);
    }
    const auto r = run_trial(make(1, InfoScenario::BroadcastPlusLocal, LevelGlobal{1.0}, 50), 0);
    CHECK(r.accumulator.integral_sum() == 0.0);
}

TEST_CASE("trials are deterministic") {
    auto c = make(4, InfoScenario::BroadcastOnly, LevelBroadcast{0.8}, 100, 3);
    c.record_events = true;
    const auto a = run_trial(c, 2);
    const auto b = run_trial(c, 2);
    CHECK(a.accumulator.integral_sum() == b.accumulator.integral_sum());
    REQUIRE(a.event_log->size() == b.event_log->size());
    for (std::size_t k = 0; k < a.event_log->size(); ++k) {
        CHECK((*a.event_log)[k].time == (*b.event_log)[k].time);
        CHECK((*a.event_log)[k].x_post == (*b.event_log)[k].x_post);
    }
    CHECK(run_trial(c, 1).accumulator.integral_sum() != a.accumulator.integral_sum());

    const auto r1 = run_batch(c);
    const auto r2 = run_batch(c);
    CHECK(r1.j_time_avg == r2.j_time_avg);
    CHECK(r1.ci_halfwidth == r2.ci_halfwidth);
    CHECK(r1.per_trial_j == r2.per_trial_j);
}

TEST_CASE("cost does not depend on the consensus rule") {
    for (auto scenario : {InfoScenario::BroadcastOnly, InfoScenario::BroadcastPlusLocal}) {
        const TriggerScheme scheme = scenario == InfoScenario::BroadcastOnly
                                         ? TriggerScheme{LevelBroadcast{std::sqrt(1.5)}}
                                         : TriggerScheme{LevelGlobal{1.04}};
        auto avg = make(3, scenario, scheme, 200);
        avg.record_trajectory = true;
        avg.trajectory_stride = 1;
        avg.record_events = true;
        auto lead = avg;
        lead.rule = LeaderRule{};
        const auto ra = run_trial(avg, 0);
        const auto rl = run_trial(lead, 0);
        REQUIRE(ra.event_log->size() == rl.event_log->size());
        for (std::size_t k = 0; k < ra.event_log->size(); ++k)
            REQUIRE((*ra.event_log)[k].time == (*rl.event_log)[k].time);
        const CompleteGraph g(3);
        REQUIRE(ra.trajectory->size() == rl.trajectory->size());
        double worst = 0.0;
        for (std::size_t k = 0; k < ra.trajectory->size(); ++k) {
            const double ca = consensus_cost(g, (*ra.trajectory)[k].x);
            const double cl = consensus_cost(g, (*rl.trajectory)[k].x);
            worst = std::max(worst, std::abs(ca - cl));
        }
        CHECK(worst <= 1e-9);
        CHECK(std::abs(ra.accumulator.integral_sum() - rl.accumulator.integral_sum()) <=
              1e-9 * ra.accumulator.integral_sum());
    }
}

TEST_CASE("broadcast-only events keep errors of non-initiators") {
    auto c = make(4, InfoScenario::BroadcastOnly, LevelBroadcast{0.9}, 300);
    c.record_events = true;
    const auto r = run_trial(c, 0);
    REQUIRE(r.event_log->size() > 100);
    for (const auto& e : *r.event_log) {
        for (std::size_t i = 0; i < 4; ++i) {
            const double before = e.x_pre[i] - e.xhat_pre[i];
            const double after = e.x_post[i] - e.xhat_post[i];
            bool initiated = false;
            for (auto j : e.initiators) initiated = initiated || j == i;
            if (initiated) {
                // the initiator really crossed, and its error is reset
                REQUIRE(std::abs(before) >= 0.9);
                REQUIRE(after == 0.0);
            } else {
                REQUIRE(std::abs(before) < 0.9);
                REQUIRE(after == doctest::Approx(before).epsilon(1e-12).scale(1.0));
            }
        }
    }
}

TEST_CASE("every level crossing is logged") {
    auto c = make(3, InfoScenario::BroadcastOnly, LevelBroadcast{0.7}, 100);
    c.record_trajectory = true;
    c.trajectory_stride = 1;
    c.record_events = true;
    const auto r = run_trial(c, 0);
    // stride 1 records the post-jump state of every step: nobody may sit
    // at or beyond the threshold without having been reset
    for (const auto& s : *r.trajectory)
        for (std::size_t i = 0; i < 3; ++i) REQUIRE(std::abs(s.x[i] - s.xhat[i]) < 0.7);
    for (std::size_t k = 1; k < r.event_log->size(); ++k)
        CHECK((*r.event_log)[k].time > (*r.event_log)[k - 1].time);
}

TEST_CASE("local information resets consensus exactly") {
    const CompleteGraph g(5);
    auto c = make(5, InfoScenario::BroadcastPlusLocal, LevelGlobal{1.2}, 300);
    c.record_events = true;
    for (auto rule : {ConsensusRule{AverageRule{}}, ConsensusRule{LeaderRule{}}}) {
        c.rule = rule;
        const auto r = run_trial(c, 0);
        REQUIRE(r.event_log->size() > 100);
        for (const auto& e : *r.event_log) {
            REQUIRE(consensus_cost(g, e.x_post) == 0.0);
            REQUIRE(e.xhat_post == e.x_post);
            bool crossed = false;
            for (std::size_t i = 0; i < 5; ++i) crossed = crossed || std::abs(e.x_pre[i] - e.xhat_pre[i]) >= 1.2;
            REQUIRE(crossed);
        }
    }
}

TEST_CASE("zero noise") {
    auto level = make(3, InfoScenario::BroadcastOnly, LevelBroadcast{0.1}, 50);
    level.noise_scale = 0.0;
    level.record_events = true;
    const auto rl = run_trial(level, 0);
    CHECK(rl.event_log->empty());
    CHECK(rl.accumulator.integral_sum() == 0.0);

    auto periodic = make(3, InfoScenario::BroadcastOnly, PeriodicAsync{0.5, {0.0, 0.1, 0.2}}, 50);
    periodic.noise_scale = 0.0;
    periodic.record_events = true;
    const auto rp = run_trial(periodic, 0);
    CHECK(rp.event_log->size() == 300);
    for (const auto& e : *rp.event_log) CHECK(e.x_post == e.x_pre);
}

TEST_CASE("sign-flipped noise gives the same trigger times and cost") {
    const TriggerScheme schemes[] = {LevelBroadcast{0.8}, PeriodicSync{0.3}, LevelGlobal{0.9}};
    for (const auto& scheme : schemes) {
        const auto scenario = std::holds_alternative<LevelGlobal>(scheme) ? InfoScenario::BroadcastPlusLocal
                                                                          : InfoScenario::BroadcastOnly;
        auto plus = make(4, scenario, scheme, 200);
        plus.record_events = true;
        auto minus = plus;
        minus.noise_scale = -1.0;
        const auto a = run_trial(plus, 0);
        const auto b = run_trial(minus, 0);
        REQUIRE(a.event_log->size() == b.event_log->size());
        for (std::size_t k = 0; k < a.event_log->size(); ++k) {
            REQUIRE((*a.event_log)[k].time == (*b.event_log)[k].time);
            REQUIRE((*a.event_log)[k].initiators == (*b.event_log)[k].initiators);
        }
        CHECK(a.accumulator.integral_sum() == b.accumulator.integral_sum());
    }
}

TEST_CASE("batch bookkeeping") {
    auto c = make(3, InfoScenario::BroadcastOnly, LevelBroadcast{1.0}, 200, 1);
    const auto single = run_trial(c, 0);
    const auto batch = run_batch(c);
    const std::vector<CostAccumulator> accs{single.accumulator};
    const auto direct = finalize(accs);
    CHECK(batch.j_time_avg == direct.j_time_avg);
    CHECK(batch.j_renewal == direct.j_renewal);

    c.trials = 8;
    const auto eight = run_batch(c);
    c.trials = 16;
    const auto sixteen = run_batch(c);
    const double shrink = sixteen.ci_halfwidth / eight.ci_halfwidth;
    CHECK(shrink == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(0.30));
}

TEST_CASE("local inter-event time is n times the global one") {
    auto c = make(3, InfoScenario::BroadcastOnly, LevelBroadcast{1.0}, 2000, 2);
    const auto r = run_batch(c);
    CHECK(r.mean_local_interevent == doctest::Approx(3.0 * r.mean_global_interevent).epsilon(0.05));
    CHECK(r.mean_global_interevent <= r.mean_local_interevent);
    CHECK(r.j_renewal == doctest::Approx(r.j_time_avg).epsilon(0.03));
}

TEST_CASE("periodic scheme with local information matches its closed form") {
    auto c = make(3, InfoScenario::BroadcastPlusLocal, PeriodicSync{0.5}, 1000, 4);
    const auto r = run_batch(c);
    CHECK(r.j_time_avg == doctest::Approx(1.5).epsilon(0.05));
    CHECK(r.mean_global_interevent == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("trial errors propagate out of the batch") {
    auto c = make(3, InfoScenario::BroadcastPlusLocal, LevelBroadcast{1.0}, 10, 3);
    CHECK_THROWS_AS(run_batch(c), std::invalid_argument);
}
