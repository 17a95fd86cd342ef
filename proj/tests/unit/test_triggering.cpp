#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "etcsim/triggering.hpp"

using namespace etcsim;

TEST_CASE("broadcast level rule") {
    SimState s(2);
    CHECK(check_level_broadcast(s, 1.0).empty());

    const double delta = 0.8;
    s.xhat = {0.3, 0.3};
    s.x = {0.3 + delta, 0.3 + 0.5 * delta};
    CHECK(check_level_broadcast(s, delta) == AgentSet{0});

    s.x = {0.3 + delta, 0.3 - delta};
    CHECK(check_level_broadcast(s, delta) == AgentSet{0, 1});
}

TEST_CASE("global level rule") {
    SimState s(3);
    CHECK(check_level_global(s, 1.0).empty());

    const double delta = 1.04;
    s.x_at_last_global = {0.5, 0.5, 0.5};
    s.x = {0.7, 0.5 - delta, 0.6};
    CHECK(check_level_global(s, delta) == AgentSet{1});

    s.x = {0.5 + 0.9 * delta, 0.5 - 0.99 * delta, 0.5};
    CHECK(check_level_global(s, delta).empty());
}

TEST_CASE("periodic checks") {
    const double dt = 0.002;
    const TriggerScheme sync = PeriodicSync{0.5};
    CHECK(check_periodic(1.0, sync, dt, 3) == AgentSet{0, 1, 2});
    CHECK(check_periodic(1.0 - dt, sync, dt, 3).empty());
    CHECK(check_periodic(0.73, sync, dt, 3).empty());
    CHECK(check_periodic(0.0, sync, dt, 3).empty());

    const TriggerScheme async = PeriodicAsync{0.75, {0.0, 0.25, 0.5}};
    CHECK(check_periodic(0.25, async, dt, 3) == AgentSet{1});
    CHECK(check_periodic(0.5, async, dt, 3) == AgentSet{2});
    CHECK(check_periodic(0.75, async, dt, 3) == AgentSet{0});
    CHECK(check_periodic(1.0, async, dt, 3) == AgentSet{1});
    CHECK(check_periodic(0.6, async, dt, 3).empty());

    CHECK_THROWS_AS(check_periodic(1.0, LevelBroadcast{1.0}, dt, 3), std::invalid_argument);
}

TEST_CASE("clock matches the closed-form check over a long run") {
    const double dt = 0.002;
    const TriggerScheme schemes[] = {PeriodicSync{0.5}, PeriodicSync{0.514},
                                     PeriodicAsync{0.75, {0.0, 0.25, 0.5}},
                                     PeriodicAsync{1.3, {0.1, 0.0011, 1.2999}}};
    for (const auto& scheme : schemes) {
        PeriodicClock clock(scheme, 3);
        std::size_t fired = 0;
        const std::size_t steps = 1'000'000;
        for (std::size_t step = 1; step <= steps; ++step) {
            const double t = static_cast<double>(step) * dt;
            const auto due = clock.due(t, dt);
            fired += due.size();
            if (step % 997 == 0 || !due.empty()) REQUIRE(due == check_periodic(t, scheme, dt, 3));
        }
        // no drift: every agent fires once per period over the horizon
        const double period = std::holds_alternative<PeriodicSync>(scheme)
                                   ? std::get<PeriodicSync>(scheme).period
                                   : std::get<PeriodicAsync>(scheme).period;
        const double expected = 3.0 * static_cast<double>(steps) * dt / period;
        CHECK(std::abs(static_cast<double>(fired) - expected) <= 3.0);
    }
}

TEST_CASE("scheme validation") {
    CHECK_NOTHROW(validate_scheme(PeriodicSync{0.5}, 3));
    CHECK_THROWS_AS(validate_scheme(PeriodicSync{0.0}, 3), std::invalid_argument);
    CHECK_THROWS_AS(validate_scheme(PeriodicAsync{1.0, {0.0, 0.5}}, 3), std::invalid_argument);
    CHECK_THROWS_AS(validate_scheme(PeriodicAsync{1.0, {0.0, 0.5, 1.0}}, 3), std::invalid_argument);
    CHECK_THROWS_AS(validate_scheme(LevelBroadcast{-1.0}, 3), std::invalid_argument);
    CHECK_THROWS_AS(validate_scheme(LevelGlobal{0.0}, 3), std::invalid_argument);
    CHECK(is_periodic(PeriodicAsync{1.0, {0.0}}));
    CHECK_FALSE(is_periodic(LevelGlobal{1.0}));
}

TEST_CASE("bridge crossing probability") {
    const double dt = 1e-3;
    // touching the barrier at an endpoint is certain
    CHECK(bridge_exit_probability(0.0, 1.0, 1.0, dt) == doctest::Approx(1.0));
    // symmetric under reflection
    CHECK(bridge_exit_probability(0.95, 0.97, 1.0, dt) ==
          doctest::Approx(bridge_exit_probability(-0.95, -0.97, 1.0, dt)));
    // single-barrier formula far from the other barrier
    CHECK(bridge_exit_probability(0.98, 0.99, 1.0, dt) ==
          doctest::Approx(std::exp(-2.0 * 0.02 * 0.01 / dt)));
    CHECK(bridge_exit_probability(0.0, 0.0, 1.0, dt) == 0.0);
    const double p = bridge_exit_probability(0.9, 0.95, 1.0, dt);
    CHECK(p > 0.0);
    CHECK(p < 1.0);
}

TEST_CASE("cube exit with one agent is the single-agent exit") {
    for (std::uint64_t k = 0; k < 200; ++k) {
        NoiseStream a(3, k);
        NoiseStream b(3, k);
        CHECK(sample_first_passage_single(a, 1.0, 1e-3, true) ==
              sample_first_passage_min(b, 1, 1.0, 1e-3, true));
    }
}

TEST_CASE("sign flip leaves passage times unchanged") {
    for (std::uint64_t k = 0; k < 200; ++k) {
        NoiseStream plus(8, k, 1.0);
        NoiseStream minus(8, k, -1.0);
        CHECK(sample_first_passage_min(plus, 4, 0.9, 2e-3, true) ==
              sample_first_passage_min(minus, 4, 0.9, 2e-3, true));
    }
}

TEST_CASE("common random numbers: passage times are monotone in the threshold") {
    const NoiseStream base(21, 0);
    for (std::uint64_t k = 0; k < 300; ++k) {
        double previous = 0.0;
        for (double delta : {0.5, 0.7, 0.9, 1.1}) {
            NoiseStream s = base.split(k);
            const double t = sample_first_passage_min(s, 3, delta, 2e-3, true);
            CHECK(t >= previous);
            previous = t;
        }
    }
}

TEST_CASE("grid monitoring without correction overestimates exit times") {
    const NoiseStream base(4, 0);
    const auto corrected = mean_first_passage(base, 1, 1.0, 1e-3, true, 20'000);
    const auto naive = mean_first_passage(base, 1, 1.0, 1e-3, false, 20'000);
    CHECK(naive.mean > corrected.mean);
}

TEST_CASE("single-agent mean exit time is threshold squared") {
    const NoiseStream base(100, 0);
    const auto one = mean_first_passage(base, 1, 1.0, 2e-3, true, 40'000);
    CHECK(one.mean == doctest::Approx(1.0).epsilon(0.02));

    const auto wide = mean_first_passage(base.split(99), 1, std::sqrt(1.5), 2e-3, true, 40'000);
    CHECK(wide.mean == doctest::Approx(1.5).epsilon(0.02));

    // Brownian scaling: T(2) has the law of 4 T(1)
    const auto two = mean_first_passage(base.split(7), 1, 2.0, 2e-3, true, 20'000);
    CHECK(two.mean / one.mean == doctest::Approx(4.0).epsilon(0.03));
}

TEST_CASE("cube exit times") {
    const NoiseStream base(5, 0);
    const auto m3 = mean_first_passage(base, 3, 1.04, 1e-3, true, 20'000);
    CHECK(m3.mean == doctest::Approx(0.5).epsilon(0.10));

    const auto m50 = mean_first_passage(base.split(1), 50, 1.0, 1e-3, true, 5'000);
    CHECK(m50.mean == doctest::Approx(0.139).epsilon(0.10));

    // more agents exit sooner
    const auto m10 = mean_first_passage(base.split(2), 10, 1.0, 1e-3, true, 10'000);
    const auto m3_unit = mean_first_passage(base.split(3), 3, 1.0, 1e-3, true, 10'000);
    CHECK(m3_unit.mean > m10.mean);
    CHECK(m10.mean > m50.mean);

    // scaling holds for every n
    const auto m10_wide = mean_first_passage(base.split(4), 10, 1.5, 1e-3, true, 10'000);
    CHECK(m10_wide.mean / 2.25 == doctest::Approx(m10.mean).epsilon(0.04));
}

TEST_CASE("sampler argument checks") {
    NoiseStream s(1, 0);
    NoiseStream silent(1, 0, 0.0);
    CHECK_THROWS_AS(sample_first_passage_min(s, 0, 1.0, 1e-3, true), std::invalid_argument);
    CHECK_THROWS_AS(sample_first_passage_single(s, 0.0, 1e-3, true), std::invalid_argument);
    CHECK_THROWS_AS(sample_first_passage_single(s, 1.0, 0.0, true), std::invalid_argument);
    CHECK_THROWS_AS(sample_first_passage_single(silent, 1.0, 1e-3, true), std::invalid_argument);
}
