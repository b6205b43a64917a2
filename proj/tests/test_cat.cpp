#include <cmath>
#include <numbers>
#include <limits>
#include <vector>

#include "doctest.h"
#include "spincant/cat.hpp"
#include "spincant/errors.hpp"

using namespace spincant;

namespace {

// Synthetic snapshot: mixture of Gaussians (weight, center, sigma, up share).
struct Bump {
    double w, mu, sigma, up;
};

DensitySnapshot synth(const std::vector<Bump>& bumps, const SpatialGrid& g = {-15, 15, 1501}) {
    DensitySnapshot d;
    d.tau = 1.0;
    d.grid = g;
    d.p_total.resize(g.points);
    d.p_up.resize(g.points);
    d.p_down.resize(g.points);
    for (int i = 0; i < g.points; ++i) {
        const double z = g.z_at(i);
        double up = 0, down = 0;
        for (const Bump& b : bumps) {
            const double val = b.w * std::exp(-0.5 * std::pow((z - b.mu) / b.sigma, 2)) /
                               (b.sigma * std::sqrt(2 * std::numbers::pi));
            up += b.up * val;
            down += (1 - b.up) * val;
        }
        d.p_up[i] = up;
        d.p_down[i] = down;
        d.p_total[i] = up + down;
    }
    d.boundary_density = std::max(d.p_total.front(), d.p_total.back());
    return d;
}

CatReport fake_report(double tau, int n_peaks, int minor_side) {
    CatReport r;
    r.tau = tau;
    PeakInfo left, right;
    left.position = -5;
    right.position = 5;
    left.area = minor_side > 0 ? 0.9 : 0.1;
    right.area = minor_side > 0 ? 0.1 : 0.9;
    r.peaks.push_back(left);
    if (n_peaks >= 2) {
        r.peaks.push_back(right);
        r.major_index = left.area > right.area ? 0 : 1;
        r.minor_index = 1 - r.major_index;
        r.separation_d = 10;
    } else {
        r.major_index = 0;
        r.minor_index = -1;
    }
    return r;
}

}  // namespace

TEST_CASE("asymmetric double Gaussian is resolved with the right areas") {
    const DensitySnapshot d = synth({{0.99, -5, 0.8, 1.0}, {0.01, 5, 0.8, 0.0}});
    const CatReport rep = detect_peaks(d);

    REQUIRE(rep.n_peaks() == 2);
    CHECK(rep.peaks[0].position == doctest::Approx(-5.0).epsilon(1e-3));
    CHECK(rep.peaks[1].position == doctest::Approx(5.0).epsilon(1e-3));
    CHECK(rep.major_index == 0);
    CHECK(rep.minor_index == 1);
    CHECK(rep.separation_d == doctest::Approx(10.0).epsilon(1e-3));

    CHECK(rep.peaks[0].area == doctest::Approx(0.99).epsilon(0.02));
    CHECK(rep.peaks[1].area == doctest::Approx(0.01).epsilon(0.02));
    // amplitude ratio ~ weight ratio for equal widths
    CHECK(rep.peaks[0].amplitude / rep.peaks[1].amplitude == doctest::Approx(99.0).epsilon(0.05));

    // spin content separates cleanly between the basins
    CHECK(rep.peaks[0].up_fraction() == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(rep.peaks[1].up_fraction() == doctest::Approx(0.0));

    // basin areas partition the full integral exactly (shared boundary sample)
    CHECK(rep.peaks[0].area + rep.peaks[1].area == doctest::Approx(d.integral()).epsilon(1e-12));
}

TEST_CASE("refined position beats the grid resolution") {
    // center deliberately off the sample lattice
    const double mu = -2.3456789;
    const DensitySnapshot d = synth({{1.0, mu, 1.0, 1.0}});
    const CatReport rep = detect_peaks(d);
    REQUIRE(rep.n_peaks() == 1);
    CHECK(rep.major_index == 0);
    CHECK(rep.minor_index == -1);
    CHECK(rep.separation_d == 0.0);
    CHECK(std::abs(rep.peaks[0].position - mu) < 0.1 * d.grid.dz());
    const double peak_val = std::exp(0.0) / std::sqrt(2 * std::numbers::pi);
    CHECK(rep.peaks[0].amplitude == doctest::Approx(peak_val).epsilon(1e-4));
}

TEST_CASE("prominence floor suppresses ripples") {
    // tiny bump far out on the flat tail of a dominant one
    const DensitySnapshot d = synth({{1.0, 0, 1.0, 1.0}, {5e-6, 10, 0.4, 1.0}});
    const CatReport strict = detect_peaks(d, 1e-3);
    CHECK(strict.n_peaks() == 1);
    const CatReport loose = detect_peaks(d, 1e-7);
    CHECK(loose.n_peaks() == 2);
}

TEST_CASE("degenerate inputs are rejected") {
    DensitySnapshot d = synth({{1.0, 0, 1.0, 1.0}});
    d.p_total[17] = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(detect_peaks(d), HealthError);

    DensitySnapshot zero = synth({{1.0, 0, 1.0, 1.0}});
    std::fill(zero.p_total.begin(), zero.p_total.end(), 0.0);
    CHECK_THROWS_AS(detect_peaks(zero), ConfigError);

    DensitySnapshot tiny;
    tiny.grid = {-1, 1, 2};
    tiny.p_total = {1.0, 2.0};
    tiny.p_up = tiny.p_total;
    tiny.p_down = {0.0, 0.0};
    CHECK_THROWS_AS(detect_peaks(tiny), ConfigError);
}

TEST_CASE("three-peak snapshots pick the two largest basins") {
    const DensitySnapshot d =
        synth({{0.6, -6, 0.7, 1.0}, {0.1, 0, 0.7, 0.5}, {0.3, 6, 0.7, 0.0}});
    const CatReport rep = detect_peaks(d);
    REQUIRE(rep.n_peaks() == 3);
    CHECK(rep.major_index == 0);
    CHECK(rep.minor_index == 2);
    CHECK(rep.separation_d == doctest::Approx(12.0).epsilon(1e-3));
    double total = 0;
    for (const auto& p : rep.peaks) total += p.area;
    CHECK(total == doctest::Approx(d.integral()).epsilon(1e-12));
}

TEST_CASE("short flickers are filtered by the persistence rule") {
    std::vector<CatReport> series;
    const int counts[] = {1, 1, 2, 1, 2, 2, 2, 1, 1, 2, 2, 1, 1};
    for (int i = 0; i < 13; ++i) series.push_back(fake_report(0.1 * i, counts[i], +1));

    const SplitSeries strict = splitting_series(series, 3);
    REQUIRE(strict.events.size() == 1);
    CHECK(strict.events[0].split_tau == doctest::Approx(0.4));
    CHECK(strict.events[0].merge_tau == doctest::Approx(0.7));
    CHECK(strict.events[0].first_index == 4);
    CHECK(strict.events[0].minor_side == +1);

    const SplitSeries loose = splitting_series(series, 1);
    CHECK(loose.events.size() == 3);

    CHECK_THROWS_AS(splitting_series(series, 0), ConfigError);
}

TEST_CASE("an open split at the end of the series has a NaN merge time") {
    std::vector<CatReport> series;
    for (int i = 0; i < 3; ++i) series.push_back(fake_report(0.1 * i, 1, +1));
    for (int i = 3; i < 7; ++i) series.push_back(fake_report(0.1 * i, 2, -1));
    const SplitSeries s = splitting_series(series, 3);
    REQUIRE(s.events.size() == 1);
    CHECK(s.events[0].split_tau == doctest::Approx(0.3));
    CHECK(std::isnan(s.events[0].merge_tau));
    CHECK(s.events[0].minor_side == -1);
    CHECK(std::isnan(s.period_adjacent));  // a single event defines no period
    CHECK(std::isnan(s.period_same_side));
}

TEST_CASE("split periods distinguish same-side and adjacent spacing") {
    // events at tau = 10 (+), 13.14 (-), 16.28 (+), 19.42 (-): alternating sides
    std::vector<CatReport> series;
    double tau = 0;
    auto push = [&](int n, int side) {
        series.push_back(fake_report(tau, n, side));
        tau += 3.14 / 4;
    };
    for (int block = 0; block < 4; ++block) {
        const int side = block % 2 == 0 ? +1 : -1;
        push(2, side);
        push(2, side);
        push(2, side);
        push(1, side);
    }
    const SplitSeries s = splitting_series(series, 3);
    REQUIRE(s.events.size() == 4);
    CHECK(s.period_adjacent == doctest::Approx(3.14).epsilon(1e-12));
    CHECK(s.period_same_side == doctest::Approx(6.28).epsilon(1e-12));
    CHECK(s.events[0].minor_side == +1);
    CHECK(s.events[1].minor_side == -1);
}
