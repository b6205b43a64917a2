#include <cmath>
#include <vector>

#include "doctest.h"
#include "spincant/classical.hpp"
#include "spincant/drive.hpp"
#include "spincant/errors.hpp"

using namespace spincant;

namespace {

ClassicalParams fig2_params() {
    ClassicalParams p;
    p.rabi = 37.0;
    p.coupling = 2.8e-7;
    p.spin_count = 2.9e9;
    p.drive = drive_profile_a();
    return p;
}

ClassicalState thermal_start() {
    ClassicalState s;
    s.z = 6.7e4;
    s.p = 6.7e4;
    s.sz = 0.5;
    return s;
}

}  // namespace

TEST_CASE("spin length is conserved by the precession equations") {
    ClassicalControls ctl;
    ctl.snapshot_stride = 0.4;
    const ClassicalSeries series = evolve_classical(fig2_params(), thermal_start(), 60.0, ctl);
    CHECK(series.max_spin_drift < 1e-8);
    for (const ClassicalState& s : series.snapshots)
        CHECK(s.spin_length() == doctest::Approx(0.5).epsilon(1e-8));
}

TEST_CASE("pinned spin drives the exact resonant response") {
    // with s_z = cos(tau)/2 and a cold start, z(tau) = (f/2) tau sin(tau)
    ClassicalParams p;
    p.rabi = 37.0;
    p.coupling = 0.005;
    p.spin_count = 1000.0;  // f = 5
    p.drive = drive_profile_a();
    const double f = p.coupling * p.spin_count;

    ClassicalState s;  // z = p = 0
    ClassicalControls ctl;
    ctl.snapshot_stride = 0.25;
    ctl.ode.rtol = 1e-11;
    ctl.ode.atol = 1e-13;
    const ClassicalSeries series = evolve_pinned_spin(p, s, 30.0, ctl);

    for (const ClassicalState& snap : series.snapshots) {
        const double expect = 0.5 * f * snap.tau * std::sin(snap.tau);
        CHECK(std::abs(snap.z - expect) < 1e-6 * (1.0 + 0.5 * f * snap.tau));
        CHECK(snap.sz == doctest::Approx(0.5 * std::cos(snap.tau)).epsilon(1e-12));
    }
    CHECK(resonant_envelope(p, 30.0) == doctest::Approx(0.5 * f * 30.0).epsilon(1e-14));
}

TEST_CASE("full spin dynamics pumps energy into the cantilever") {
    ClassicalControls ctl;
    ctl.snapshot_stride = 0.4;
    const ClassicalSeries series = evolve_classical(fig2_params(), thermal_start(), 60.0, ctl);
    const double e0 = series.snapshots.front().energy();
    const double e1 = series.snapshots.back().energy();
    CHECK(e1 > e0);
    // thermal start has E = z^2/2 + p^2/2 = 6.7e4^2
    CHECK(e0 == doctest::Approx(6.7e4 * 6.7e4).epsilon(1e-12));
}

TEST_CASE("amplitude estimates reproduce the quoted numbers") {
    const ClassicalParams p = fig2_params();
    CHECK(stationary_amplitude(p, 1e3) == doctest::Approx(8.12e5).epsilon(1e-12));
    CHECK(stationary_amplitude(p, 1e3) == doctest::Approx(8.1e5).epsilon(0.01));
    CHECK(nonlinearity_ratio(p, 8.1e5) == doctest::Approx(0.01226).epsilon(1e-3));
    CHECK(resonant_envelope(p, 100.0) ==
          doctest::Approx(0.5 * 2.8e-7 * 2.9e9 * 100.0).epsilon(1e-14));
}

TEST_CASE("estimates reject a vanishing transverse field") {
    ClassicalParams p = fig2_params();
    p.rabi = 0;
    CHECK_THROWS_AS(nonlinearity_ratio(p, 1.0), ConfigError);
}

TEST_CASE("spin-length health trip") {
    ClassicalControls ctl;
    ctl.snapshot_stride = 0.4;
    ctl.ode.rtol = 1e-5;
    ctl.ode.atol = 1e-7;
    ctl.spin_length_tolerance = 1e-15;
    CHECK_THROWS_AS(evolve_classical(fig2_params(), thermal_start(), 60.0, ctl), HealthError);
}

TEST_CASE("snapshots carry monotone tau on the stride grid") {
    ClassicalControls ctl;
    ctl.snapshot_stride = 0.5;
    const ClassicalSeries series = evolve_classical(fig2_params(), thermal_start(), 2.0, ctl);
    REQUIRE(series.snapshots.size() == 5);
    for (std::size_t i = 0; i < series.snapshots.size(); ++i)
        CHECK(series.snapshots[i].tau == doctest::Approx(0.5 * i).epsilon(1e-12));
    CHECK(series.stats.n_accepted > 0);
}
