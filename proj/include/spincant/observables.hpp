#pragma once

#include <vector>

#include "spincant/state.hpp"

namespace spincant {

// Uniform grid for rendering wavefunctions in the cantilever coordinate.
struct SpatialGrid {
    double z_min = -60;
    double z_max = 60;
    int points = 2400;

    void validate() const;  // ConfigError on bad bounds/counts
    double dz() const { return (z_max - z_min) / (points - 1); }
    double z_at(int i) const { return z_min + i * dz(); }
    std::vector<double> zs() const;
};

// Orthonormal eigenfunctions h_n(z) of the unit harmonic oscillator on a
// grid, built by the normalized three-term recurrence
//   h_{n+1} = z*sqrt(2/(n+1))*h_n - sqrt(n/(n+1))*h_{n-1},
//   h_0 = pi^{-1/4} exp(-z^2/2).
// Far outside the classical turning points h_0 underflows while high-n rows
// do not, so the recurrence runs on mantissa/exponent-split values per grid
// column and materializes doubles only where they are representable.
class HermiteBasis {
  public:
    HermiteBasis(const SpatialGrid& grid, int n);

    int levels() const { return n_; }
    const SpatialGrid& grid() const { return grid_; }
    const double* row(int level) const { return h_.data() + std::size_t(level) * grid_.points; }
    double value(int level, int zi) const { return row(level)[zi]; }

    // psi(z_i) = sum_n c[n] h_n(z_i); psi must hold grid().points entries.
    void synthesize(const cplx* c, int n, cplx* psi) const;

    // c[m] = trapezoid integral of h_m(z) psi(z) for m = 0..n-1.
    void project(const cplx* psi, int n, cplx* c) const;

  private:
    SpatialGrid grid_;
    int n_;
    std::vector<double> h_;  // row-major: level, then grid index
};

// Two-component spatial probability density at one instant.
struct DensitySnapshot {
    double tau = 0;
    SpatialGrid grid;
    std::vector<double> p_total;  // p_up + p_down pointwise
    std::vector<double> p_up;
    std::vector<double> p_down;
    double boundary_density = 0;  // max of p_total at the two grid edges

    // grid coverage health: boundary density above 1e-12 merits a warning
    bool covers() const { return boundary_density <= 1e-12; }
    double integral() const;  // trapezoid integral of p_total
};

DensitySnapshot density(const SpinorFockState& s, const HermiteBasis& basis);

// Integrated spin populations (sum |a|^2, sum |b|^2); exact in the number
// basis, no grid involved.
std::pair<double, double> populations(const SpinorFockState& s);

struct Means {
    double z = 0, p = 0;           // oscillator position and momentum
    double sx = 0, sy = 0, sz = 0; // spin components
};

Means means(const SpinorFockState& s);

// Spin-oscillator covariances; their smallness is the classical-limit
// condition.  r1 pairs z with S_y, r2 pairs z with S_x.
struct Correlations {
    double z_sx = 0, z_sy = 0;  // <z S_x>, <z S_y>
    double r1 = 0;              // <z S_y> - <z><S_y>
    double r2 = 0;              // <z S_x> - <z><S_x>
};

Correlations correlations(const SpinorFockState& s);

}  // namespace spincant
