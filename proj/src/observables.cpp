#include "spincant/observables.hpp"

#include <cmath>
#include <numbers>

#include "spincant/errors.hpp"

namespace spincant {

void SpatialGrid::validate() const {
    if (!(z_min < z_max)) throw ConfigError("spatial grid: require z_min < z_max");
    if (points < 2) throw ConfigError("spatial grid: require at least 2 points");
}

std::vector<double> SpatialGrid::zs() const {
    std::vector<double> z(points);
    for (int i = 0; i < points; i++) z[i] = z_at(i);
    return z;
}

namespace {

// Doubles below ~1e-300 in true magnitude are flushed to zero during
// materialization; the recurrence itself runs on split mantissa/exponent
// state and is unaffected.
constexpr double kRescaleAt = 1e150;
constexpr double kRescaleFactor = 1e-150;
const double kLogRescale = std::log(1e150);
constexpr double kMinExp = -745.0;  // exp() underflows to 0 below this

}  // namespace

HermiteBasis::HermiteBasis(const SpatialGrid& grid, int n) : grid_(grid), n_(n) {
    grid.validate();
    if (n < 1) throw ConfigError("hermite basis: need at least one level");
    h_.resize(std::size_t(n) * grid.points);

    std::vector<double> up(n), down(n);  // recurrence weights per level
    for (int k = 0; k < n; k++) {
        up[k] = std::sqrt(2.0 / (k + 1));
        down[k] = std::sqrt(k / (k + 1.0));
    }
    const double h0 = std::pow(std::numbers::pi, -0.25);

    for (int zi = 0; zi < grid.points; zi++) {
        const double z = grid.z_at(zi);
        // h_k(z) = u * exp(e) with u kept in floating range by rescaling
        double e = -0.5 * z * z;
        double u = h0, v = 0.0;
        double scale = e > kMinExp ? std::exp(e) : 0.0;
        for (int k = 0; k < n; k++) {
            h_[std::size_t(k) * grid.points + zi] = u * scale;
            const double next = z * up[k] * u - down[k] * v;
            v = u;
            u = next;
            if (std::abs(u) > kRescaleAt) {
                u *= kRescaleFactor;
                v *= kRescaleFactor;
                e += kLogRescale;
                scale = e > kMinExp ? std::exp(e) : 0.0;
            }
        }
    }
}

void HermiteBasis::synthesize(const cplx* c, int n, cplx* psi) const {
    if (n > n_) throw ConfigError("hermite basis: state has more levels than the basis");
    const int m = grid_.points;
    for (int i = 0; i < m; i++) psi[i] = 0;
    for (int k = 0; k < n; k++) {
        const cplx ck = c[k];
        if (ck == cplx{}) continue;
        const double* hk = row(k);
        for (int i = 0; i < m; i++) psi[i] += ck * hk[i];
    }
}

void HermiteBasis::project(const cplx* psi, int n, cplx* c) const {
    if (n > n_) throw ConfigError("hermite basis: projection order exceeds the basis");
    const int m = grid_.points;
    const double dz = grid_.dz();
    for (int k = 0; k < n; k++) {
        const double* hk = row(k);
        // trapezoid rule: half weight on the two edge samples
        cplx acc = 0.5 * (hk[0] * psi[0] + hk[m - 1] * psi[m - 1]);
        for (int i = 1; i < m - 1; i++) acc += hk[i] * psi[i];
        c[k] = acc * dz;
    }
}

double DensitySnapshot::integral() const {
    const double dz = grid.dz();
    double acc = 0.5 * (p_total.front() + p_total.back());
    for (std::size_t i = 1; i + 1 < p_total.size(); i++) acc += p_total[i];
    return acc * dz;
}

DensitySnapshot density(const SpinorFockState& s, const HermiteBasis& basis) {
    const int m = basis.grid().points;
    DensitySnapshot d;
    d.tau = s.tau;
    d.grid = basis.grid();
    d.p_up.resize(m);
    d.p_down.resize(m);
    d.p_total.resize(m);
    std::vector<cplx> psi(m);
    basis.synthesize(s.a.data(), s.size(), psi.data());
    for (int i = 0; i < m; i++) d.p_up[i] = std::norm(psi[i]);
    basis.synthesize(s.b.data(), s.size(), psi.data());
    for (int i = 0; i < m; i++) d.p_down[i] = std::norm(psi[i]);
    for (int i = 0; i < m; i++) d.p_total[i] = d.p_up[i] + d.p_down[i];
    d.boundary_density = std::max(d.p_total.front(), d.p_total.back());
    return d;
}

std::pair<double, double> populations(const SpinorFockState& s) {
    double pa = 0, pb = 0;
    for (const auto& v : s.a) pa += std::norm(v);
    for (const auto& v : s.b) pb += std::norm(v);
    return {pa, pb};
}

Means means(const SpinorFockState& s) {
    const int n = s.size();
    Means m;
    cplx ladder = 0;  // <lowering operator>
    cplx cross = 0;   // <up-component | down-component>
    double pa = 0, pb = 0;
    for (int k = 0; k < n; k++) {
        if (k + 1 < n)
            ladder += std::sqrt(double(k + 1)) *
                      (std::conj(s.a[k]) * s.a[k + 1] + std::conj(s.b[k]) * s.b[k + 1]);
        cross += std::conj(s.a[k]) * s.b[k];
        pa += std::norm(s.a[k]);
        pb += std::norm(s.b[k]);
    }
    m.z = std::sqrt(2.0) * ladder.real();
    m.p = std::sqrt(2.0) * ladder.imag();
    m.sx = cross.real();
    m.sy = cross.imag();
    m.sz = 0.5 * (pa - pb);
    return m;
}

Correlations correlations(const SpinorFockState& s) {
    const int n = s.size();
    cplx zcross = 0;  // <up-component | z | down-component>
    for (int k = 0; k + 1 < n; k++)
        zcross += std::sqrt(double(k + 1)) *
                  (std::conj(s.a[k]) * s.b[k + 1] + std::conj(s.a[k + 1]) * s.b[k]);
    zcross /= std::sqrt(2.0);
    const Means m = means(s);
    Correlations c;
    c.z_sx = zcross.real();
    c.z_sy = zcross.imag();
    c.r1 = c.z_sy - m.z * m.sy;
    c.r2 = c.z_sx - m.z * m.sx;
    return c;
}

}  // namespace spincant
