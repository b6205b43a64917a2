#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"
#include "spincant/errors.hpp"
#include "spincant/observables.hpp"
#include "spincant/state.hpp"

using namespace spincant;

TEST_CASE("grid validation") {
    CHECK_NOTHROW(SpatialGrid{}.validate());
    CHECK_THROWS_AS((SpatialGrid{5, -5, 100}.validate()), ConfigError);
    CHECK_THROWS_AS((SpatialGrid{-5, 5, 1}.validate()), ConfigError);
    const SpatialGrid g{-10, 10, 2001};
    CHECK(g.dz() == doctest::Approx(0.01).epsilon(1e-14));
    CHECK(g.zs().size() == 2001);
    CHECK(g.zs().front() == doctest::Approx(-10.0));
    CHECK(g.zs().back() == doctest::Approx(10.0));
}

TEST_CASE("ground level matches the closed form") {
    const SpatialGrid g{-10, 10, 2001};
    const HermiteBasis basis(g, 3);
    const double pf = std::pow(std::numbers::pi, -0.25);
    CHECK(basis.value(0, 1000) == doctest::Approx(pf).epsilon(1e-13));  // z = 0
    CHECK(basis.value(0, 1100) == doctest::Approx(pf * std::exp(-0.5)).epsilon(1e-13));  // z = 1
    // level 1 is odd, level 2 even with a node structure
    CHECK(basis.value(1, 1000) == doctest::Approx(0.0));
    CHECK(basis.value(1, 900) == doctest::Approx(-basis.value(1, 1100)).epsilon(1e-12));
}

TEST_CASE("levels are orthonormal under the trapezoid inner product") {
    const SpatialGrid g{-16, 16, 1601};
    const int n = 51;
    const HermiteBasis basis(g, n);
    std::vector<cplx> c(n), psi(g.points), back(n);
    for (int m : {0, 1, 7, 33, 50}) {
        std::fill(c.begin(), c.end(), cplx{});
        c[m] = 1.0;
        basis.synthesize(c.data(), n, psi.data());
        basis.project(psi.data(), n, back.data());
        for (int k = 0; k < n; ++k) {
            const double expect = (k == m) ? 1.0 : 0.0;
            CHECK(std::abs(back[k] - expect) < 1e-8);
        }
    }
}

TEST_CASE("exponent-tracked recurrence survives far outside the turning points") {
    // At z = +-60 the ground level is ~ exp(-1800): far below the double range.
    // The recurrence must flush it to zero without poisoning the high levels,
    // which are classically allowed there.
    const SpatialGrid g{-60, 60, 4801};
    const int n = 2000;
    const HermiteBasis basis(g, n);

    for (int level : {0, 1, 999, 1999})
        for (int zi : {0, 1, 2400, 4799, 4800})
            CHECK(std::isfinite(basis.value(level, zi)));

    CHECK(basis.value(0, 0) == 0.0);       // underflowed, flushed
    CHECK(basis.value(0, 2400) == doctest::Approx(std::pow(std::numbers::pi, -0.25)).epsilon(1e-12));
    double edge_peak = 0;  // max over a few cells so a node can't hide the level
    for (int zi = 0; zi < 6; ++zi) edge_peak = std::max(edge_peak, std::abs(basis.value(1999, zi)));
    CHECK(edge_peak > 1e-2);  // the grid edge is inside the classical region

    // The top level is still unit-norm and orthogonal to its even-parity
    // partner. This needs a domain that contains the level-1999 turning point
    // (sqrt(3999) ~ 63.2) plus a few Airy widths, or ~20% of the probability
    // is cut off; [-70, 70] leaves the truncated tail below 1e-12.
    const SpatialGrid wide{-70, 70, 11201};
    const HermiteBasis wide_basis(wide, n);
    std::vector<cplx> c(n), psi(wide.points), back(n);
    c[1999] = 1.0;
    wide_basis.synthesize(c.data(), n, psi.data());
    wide_basis.project(psi.data(), n, back.data());
    CHECK(std::abs(back[1999] - 1.0) < 1e-8);
    CHECK(std::abs(back[1997]) < 1e-8);
    CHECK(std::abs(back[1998]) < 1e-8);
}

TEST_CASE("coherent state renders as the unit-width Gaussian") {
    const SpinorFockState s = coherent_state(CoherentInit::from_means(-3, 0), 60);
    const SpatialGrid g{-10, 4, 1401};
    const HermiteBasis basis(g, s.size());
    const DensitySnapshot d = density(s, basis);

    CHECK(d.integral() == doctest::Approx(1.0).epsilon(1e-10));
    for (int i = 0; i < g.points; i += 50) {
        const double z = g.z_at(i);
        const double expect = std::exp(-(z + 3) * (z + 3)) / std::sqrt(std::numbers::pi);
        CHECK(std::abs(d.p_total[i] - expect) < 1e-8);
    }
    CHECK(d.covers());
    // all weight is spin-up here
    for (int i = 0; i < g.points; i += 100) CHECK(d.p_down[i] == 0.0);
}

TEST_CASE("projection inverts synthesis (Parseval)") {
    std::mt19937 gen(77);
    std::normal_distribution<double> nd;
    const int n = 300;
    std::vector<cplx> c(n);
    double norm = 0;
    for (auto& x : c) {
        x = cplx(nd(gen), nd(gen));
        norm += std::norm(x);
    }
    for (auto& x : c) x /= std::sqrt(norm);

    const SpatialGrid g{-45, 45, 1801};
    const HermiteBasis basis(g, n);
    std::vector<cplx> psi(g.points), back(n);
    basis.synthesize(c.data(), n, psi.data());
    basis.project(psi.data(), n, back.data());

    double sum = 0;
    for (int k = 0; k < n; ++k) {
        CHECK(std::abs(back[k] - c[k]) < 1e-8);
        sum += std::norm(back[k]);
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("product states carry no spin-position correlation") {
    const SpinorFockState s = coherent_state(CoherentInit::from_means(2.3, -1.1), 60,
                                             SpinorDir::from_angles(1.1, 0.7));
    const Correlations c = correlations(s);
    CHECK(std::abs(c.r1) < 1e-12);
    CHECK(std::abs(c.r2) < 1e-12);
    // but the raw cross moments equal <z><S> for the product
    const Means m = means(s);
    CHECK(c.z_sx == doctest::Approx(m.z * m.sx).epsilon(1e-10));
    CHECK(c.z_sy == doctest::Approx(m.z * m.sy).epsilon(1e-10));
}

TEST_CASE("cross moments on hand-built entangled states") {
    const double inv = 1.0 / std::sqrt(2.0);

    SpinorFockState s(4);
    s.a[0] = inv;
    s.b[1] = inv;
    Correlations c = correlations(s);
    Means m = means(s);
    CHECK(m.z == doctest::Approx(0.0));
    CHECK(m.sx == doctest::Approx(0.0));
    CHECK(c.z_sx == doctest::Approx(0.25 * std::sqrt(2.0)).epsilon(1e-14));  // 1/(2 sqrt 2)
    CHECK(c.r2 == doctest::Approx(0.25 * std::sqrt(2.0)).epsilon(1e-14));
    CHECK(std::abs(c.z_sy) < 1e-15);

    SpinorFockState t(4);
    t.a[0] = inv;
    t.b[1] = cplx(0, inv);
    c = correlations(t);
    CHECK(c.z_sy == doctest::Approx(0.25 * std::sqrt(2.0)).epsilon(1e-14));
    CHECK(std::abs(c.z_sx) < 1e-15);

    // entangled spin populations still sum to the norm
    const auto [p11, p22] = populations(t);
    CHECK(p11 == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(p22 == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("spin means stay inside the Bloch ball on random states") {
    std::mt19937 gen(5150);
    std::normal_distribution<double> nd;
    for (int trial = 0; trial < 20; ++trial) {
        SpinorFockState s(30);
        for (int k = 0; k < 30; ++k) {
            s.a[k] = cplx(nd(gen), nd(gen));
            s.b[k] = cplx(nd(gen), nd(gen));
        }
        s.normalize();
        const Means m = means(s);
        CHECK(m.sx * m.sx + m.sy * m.sy + m.sz * m.sz <= 0.25 + 1e-12);
        const auto [p11, p22] = populations(s);
        CHECK(p11 + p22 == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(m.sz == doctest::Approx(0.5 * (p11 - p22)).epsilon(1e-12));
    }
}

TEST_CASE("a grid that clips the state reports boundary weight") {
    const SpinorFockState s = coherent_state(CoherentInit::from_means(-3, 0), 60);
    const SpatialGrid g{-1, 1, 201};
    const HermiteBasis basis(g, s.size());
    const DensitySnapshot d = density(s, basis);
    CHECK_FALSE(d.covers());
    CHECK(d.boundary_density > 1e-3);
    CHECK(d.integral() < 0.5);
}
