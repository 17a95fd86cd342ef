#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "etcsim/calibration.hpp"

using namespace etcsim;

namespace {

CalibrationOptions quick() {
    CalibrationOptions o;
    o.samples = 20'000;
    o.verify_samples = 10'000;
    o.max_samples = 80'000;
    return o;
}

}  // namespace

TEST_CASE("broadcast threshold from the closed form") {
    const NoiseStream stream(1, 0);
    auto o = quick();
    const auto r15 = calibrate_delta_b(1.5, stream, o);
    CHECK(r15.delta_star == doctest::Approx(std::sqrt(1.5)));
    CHECK(r15.delta_star == doctest::Approx(1.2247).epsilon(1e-4));
    CHECK(r15.achieved_T == doctest::Approx(1.5).epsilon(0.03));

    CHECK(calibrate_delta_b(0.75, stream, o).delta_star == doctest::Approx(0.8660).epsilon(1e-4));
    CHECK(calibrate_delta_b(1.0, stream, o).delta_star == 1.0);
}

TEST_CASE("global threshold: single agent reduces to the broadcast case") {
    const auto r = calibrate_delta_bl(1, 1.0, NoiseStream(2, 0), quick());
    CHECK(r.delta_star == doctest::Approx(1.0).epsilon(0.03));
    CHECK(r.unit_exit_time == doctest::Approx(1.0).epsilon(0.02));
    CHECK(r.method == CalibrationMethod::ScalingLaw);
    CHECK(std::abs(r.achieved_T - 1.0) <= 0.03);
}

TEST_CASE("global threshold for three agents") {
    const auto r = calibrate_delta_bl(3, 0.5, NoiseStream(3, 0), quick());
    CHECK(r.delta_star == doctest::Approx(1.04).epsilon(0.10));
    CHECK(r.achieved_T == doctest::Approx(0.5).epsilon(0.03));
    CHECK(r.samples_used >= 30'000);
}

TEST_CASE("unit exit time decreases with n") {
    double previous = 2.0;
    for (std::size_t n : {1u, 2u, 5u, 10u}) {
        const auto r = calibrate_delta_bl(n, 0.5, NoiseStream(4, 0), quick());
        CHECK(r.unit_exit_time < previous);
        previous = r.unit_exit_time;
    }
}

TEST_CASE("calibration is reproducible") {
    const auto a = calibrate_delta_bl(5, 0.5, NoiseStream(77, 0), quick());
    const auto b = calibrate_delta_bl(5, 0.5, NoiseStream(77, 0), quick());
    CHECK(a.delta_star == b.delta_star);
    CHECK(a.achieved_T == b.achieved_T);
}

TEST_CASE("scaling law and bisection agree") {
    CalibrationOptions o = quick();
    o.dt = 2e-3;
    o.samples = 10'000;
    o.verify_samples = 5'000;
    o.bisection_samples = 4'000;
    o.bisection_rel_width = 5e-3;
    for (std::size_t n : {2u, 5u, 10u}) {
        const NoiseStream stream(31, n);
        o.method = CalibrationMethod::ScalingLaw;
        const auto scaling = calibrate_delta_bl(n, 0.5, stream, o);
        o.method = CalibrationMethod::Bisection;
        const auto bisect = calibrate_delta_bl(n, 0.5, stream, o);
        CHECK(bisect.method == CalibrationMethod::Bisection);
        CHECK(bisect.iterations > 3);
        CHECK(bisect.delta_star == doctest::Approx(scaling.delta_star).epsilon(0.03));
    }
}

TEST_CASE("input checks and failure diagnostics") {
    const NoiseStream s(1, 0);
    CalibrationOptions o = quick();
    CHECK_THROWS_AS(calibrate_delta_bl(0, 0.5, s, o), std::invalid_argument);
    CHECK_THROWS_AS(calibrate_delta_bl(3, 0.0, s, o), std::invalid_argument);
    o.tolerance = 0.3;
    CHECK_THROWS_AS(calibrate_delta_bl(3, 0.5, s, o), std::invalid_argument);

    // a verification budget far too small for a 0.01% tolerance
    o.tolerance = 1e-4;
    o.samples = 500;
    o.verify_samples = 500;
    o.max_samples = 1000;
    try {
        calibrate_delta_bl(3, 0.5, s, o);
        FAIL("expected a calibration failure");
    } catch (const CalibrationError& e) {
        CHECK(e.diagnostics().delta_star > 0.0);
        CHECK(e.diagnostics().samples_used >= 1000);
        CHECK(e.diagnostics().target_T == 0.5);
    }
}
