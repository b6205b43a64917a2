#include <cmath>
#include <numbers>

#include "doctest.h"
#include "spincant/errors.hpp"
#include "spincant/observables.hpp"
#include "spincant/state.hpp"

using namespace spincant;

TEST_CASE("vacuum coherent state occupies only the ground level") {
    const SpinorFockState s = coherent_state(CoherentInit::from_means(0, 0), 8);
    CHECK(s.norm_sq() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(s.a[0]) == doctest::Approx(1.0).epsilon(1e-14));
    for (int k = 1; k < 8; ++k) CHECK(std::abs(s.a[k]) == 0.0);
    for (int k = 0; k < 8; ++k) CHECK(std::abs(s.b[k]) == 0.0);
    CHECK(s.tail_mass() == 0.0);
}

TEST_CASE("displaced coherent state is Poissonian with the right means") {
    // alpha = (-20 + 0i)/sqrt(2): mean occupation |alpha|^2 = 200
    const SpinorFockState s = coherent_state(CoherentInit::from_means(-20, 0), 400);
    CHECK(s.norm_sq() == doctest::Approx(1.0).epsilon(1e-12));

    double occ = 0;
    for (int k = 0; k < s.size(); ++k) occ += k * std::norm(s.a[k]);
    CHECK(occ == doctest::Approx(200.0).epsilon(1e-9));

    // Poisson weight at the mean level: log P(200) = -mu + 200 log mu - log(200!)
    const double log_w = -200.0 + 200.0 * std::log(200.0) - std::lgamma(201.0);
    CHECK(std::norm(s.a[200]) == doctest::Approx(std::exp(log_w)).epsilon(1e-9));

    const Means m = means(s);
    CHECK(m.z == doctest::Approx(-20.0).epsilon(1e-10));
    CHECK(std::abs(m.p) < 1e-10);
}

TEST_CASE("coherent label round-trips through from_means") {
    const CoherentInit c = CoherentInit::from_means(3.5, -1.25);
    CHECK(c.mean_z() == doctest::Approx(3.5).epsilon(1e-14));
    CHECK(c.mean_p() == doctest::Approx(-1.25).epsilon(1e-14));
    CHECK(c.alpha == cplx(3.5 / std::sqrt(2.0), -1.25 / std::sqrt(2.0)));
}

TEST_CASE("momentum displacement shows up in the means") {
    const SpinorFockState s = coherent_state(CoherentInit::from_means(2.0, 5.0), 120);
    const Means m = means(s);
    CHECK(m.z == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(m.p == doctest::Approx(5.0).epsilon(1e-10));
}

TEST_CASE("spinor direction follows the Bloch angles") {
    const SpinorDir up = SpinorDir::from_angles(0, 0);
    CHECK(std::abs(up.up - cplx(1, 0)) < 1e-15);
    CHECK(std::abs(up.down) < 1e-15);

    const SpinorDir equator = SpinorDir::from_angles(std::numbers::pi / 2, 0);
    const SpinorFockState s = coherent_state(CoherentInit::from_means(0, 0), 8, equator);
    const Means m = means(s);
    CHECK(m.sx == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(std::abs(m.sy) < 1e-12);
    CHECK(std::abs(m.sz) < 1e-12);

    const SpinorDir tilted = SpinorDir::from_angles(1.1, 0.7);
    const SpinorFockState t = coherent_state(CoherentInit::from_means(0, 0), 8, tilted);
    const Means mt = means(t);
    CHECK(mt.sx == doctest::Approx(0.5 * std::sin(1.1) * std::cos(0.7)).epsilon(1e-12));
    CHECK(mt.sy == doctest::Approx(0.5 * std::sin(1.1) * std::sin(0.7)).epsilon(1e-12));
    CHECK(mt.sz == doctest::Approx(0.5 * std::cos(1.1)).epsilon(1e-12));
}

TEST_CASE("a basis too small for the displacement is rejected") {
    // |alpha|^2 = 200: 50 levels drop essentially all of the norm
    CHECK_THROWS_AS(coherent_state(CoherentInit::from_means(-20, 0), 50), ConfigError);
    CHECK_THROWS_AS(coherent_state(CoherentInit::from_means(0, 0), 0), ConfigError);
}

TEST_CASE("normalize rejects the zero state and fixes scaled ones") {
    SpinorFockState zero(4);
    CHECK_THROWS_AS(zero.normalize(), ConfigError);

    SpinorFockState s(3);
    s.a[1] = cplx(0, 2.0);
    s.b[2] = cplx(1.0, 0);
    s.normalize();
    CHECK(s.norm_sq() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("tail mass reports the top-level weight") {
    SpinorFockState s(5);
    s.a[4] = cplx(0.6, 0);
    s.b[4] = cplx(0, 0.8);
    CHECK(s.tail_mass() == doctest::Approx(1.0).epsilon(1e-14));
    s.a[0] = 1.0;  // adding weight elsewhere leaves the top-level mass as-is
    CHECK(s.tail_mass() == doctest::Approx(1.0).epsilon(1e-14));
}
