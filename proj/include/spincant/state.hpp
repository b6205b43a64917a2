#pragma once

#include <complex>
#include <vector>

namespace spincant {

using cplx = std::complex<double>;

// Cantilever-plus-spin wavefunction in the truncated oscillator number basis:
// a[n] multiplies |n> x |spin up>, b[n] multiplies |n> x |spin down>.
struct SpinorFockState {
    std::vector<cplx> a;
    std::vector<cplx> b;
    double tau = 0;

    SpinorFockState() = default;
    explicit SpinorFockState(int n) : a(n), b(n) {}

    int size() const { return static_cast<int>(a.size()); }
    double norm_sq() const;
    // probability weight sitting in the highest retained level (truncation health)
    double tail_mass() const;
    void normalize();  // ConfigError when the norm is zero
};

// Unit spinor giving the initial spin direction; (1, 0) is spin up.
struct SpinorDir {
    cplx up{1.0, 0.0};
    cplx down{0.0, 0.0};

    // Bloch angles: theta from +z, phi azimuth.
    static SpinorDir from_angles(double theta, double phi);
};

// Coherent-state label alpha = (<z> + i<p>)/sqrt(2).
struct CoherentInit {
    cplx alpha{0.0, 0.0};

    static CoherentInit from_means(double mean_z, double mean_p);
    double mean_z() const;
    double mean_p() const;
};

// Oscillator coherent state |alpha> tensor the given spinor, truncated to n
// levels via the stable ratio recursion and renormalized.  Throws ConfigError
// (reporting the required size) when the truncated basis drops more than
// 1e-10 of the norm; n of at least |alpha|^2 + 8|alpha| is safe.
SpinorFockState coherent_state(const CoherentInit& init, int n, const SpinorDir& spin = {});

}  // namespace spincant
