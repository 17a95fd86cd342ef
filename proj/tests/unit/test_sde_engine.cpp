#include "doctest.h"

#include <stdexcept>
#include <vector>

#include "etcsim/noise.hpp"
#include "etcsim/state.hpp"

using etcsim::SimState;

TEST_CASE("initial state is all zero") {
    SimState s(4);
    CHECK(s.size() == 4);
    CHECK(s.t == 0.0);
    CHECK(s.x == std::vector<double>(4, 0.0));
    CHECK(s.xhat == std::vector<double>(4, 0.0));
    CHECK(s.x_at_last_global == std::vector<double>(4, 0.0));
    CHECK(s.last_consensus_point == 0.0);
    CHECK_THROWS_AS(SimState(0), std::invalid_argument);
}

TEST_CASE("drift step") {
    SimState s(2);
    etcsim::drift_step(s, std::vector{0.0, 0.0}, 0.002);
    CHECK(s.x == std::vector{0.0, 0.0});
    CHECK(s.t == doctest::Approx(0.002));

    etcsim::drift_step(s, std::vector{0.1, -0.2}, 0.002);
    CHECK(s.x == std::vector{0.1, -0.2});
    CHECK(s.xhat == std::vector{0.0, 0.0});

    CHECK_THROWS_AS(etcsim::drift_step(s, std::vector{0.1}, 0.002), std::invalid_argument);
    CHECK_THROWS_AS(etcsim::drift_step(s, std::vector{0.1, 0.1}, 0.0), std::invalid_argument);
}

TEST_CASE("without triggers the state is the running sum of increments") {
    SimState s(3);
    etcsim::NoiseStream stream(42, 0);
    std::vector<double> total(3, 0.0);
    std::vector<double> dw(3);
    for (int k = 0; k < 5000; ++k) {
        stream.wiener_increments(0.002, dw);
        etcsim::drift_step(s, dw, 0.002);
        for (int i = 0; i < 3; ++i) total[i] += dw[i];
    }
    // same additions in the same order
    CHECK(s.x == total);
}

TEST_CASE("impulses") {
    SimState s(2);
    s.x = {1.0, 2.0};
    etcsim::apply_impulse(s, std::vector{0.0, 0.0});
    CHECK(s.x == std::vector{1.0, 2.0});
    etcsim::apply_impulse(s, std::vector{-1.0, -2.0});
    CHECK(s.x == std::vector{0.0, 0.0});
    CHECK(s.t == 0.0);
    CHECK_THROWS_AS(etcsim::apply_impulse(s, std::vector{1.0}), std::invalid_argument);
}
