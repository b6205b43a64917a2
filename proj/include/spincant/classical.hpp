#pragma once

#include <cmath>
#include <vector>

#include "spincant/drive.hpp"
#include "spincant/ode.hpp"

namespace spincant {

// Mean-field limit: one oscillator coordinate driven by the summed spin
// polarization, and one unit spin precessing in the effective field
// (rabi, 0, -phi_dot + 2*coupling*z).
struct ClassicalParams {
    double rabi = 0.0;
    double coupling = 0.0;
    double spin_count = 1.0;  // number of contributing spins, >= 1
    DriveProfile drive = drive_profile_a();
};

struct ClassicalState {
    double z = 0.0;
    double p = 0.0;
    double sx = 0.0;
    double sy = 0.0;
    double sz = 0.5;
    double tau = 0.0;

    double energy() const { return 0.5 * (z * z + p * p); }
    double spin_length() const { return std::sqrt(sx * sx + sy * sy + sz * sz); }
};

struct ClassicalControls {
    OdeControls ode{};
    double snapshot_stride = 0.08;
    // Allowed change of |s| relative to its initial value; the torque
    // equation conserves it exactly, so drift is pure integration error.
    double spin_length_tolerance = 1e-8;
};

struct ClassicalSeries {
    std::vector<ClassicalState> snapshots;
    OdeStats stats;
    double max_spin_drift = 0.0;
};

// y = [z, p, sx, sy, sz]
void classical_rhs(const ClassicalParams& cp, double tau, const double* y, double* dy);

ClassicalSeries evolve_classical(const ClassicalParams& cp, const ClassicalState& init,
                                 double tau_end, const ClassicalControls& ctl);

// Same oscillator, but with the spin forced to sz = cos(tau)/2, sx = sy = 0:
// the fully adiabatic inversion limit. From z = p = 0 the exact response is
// z(tau) = (spin_count * coupling / 2) * tau * sin(tau).
ClassicalSeries evolve_pinned_spin(const ClassicalParams& cp, const ClassicalState& init,
                                   double tau_end, const ClassicalControls& ctl);

// Half-width of the resonantly growing envelope at time tau, and the
// saturation amplitude once ringdown at quality factor q balances the drive.
double resonant_envelope(const ClassicalParams& cp, double tau);
double stationary_amplitude(const ClassicalParams& cp, double quality_factor);

// Spin-flip rate perturbation scale 2*coupling*|z|/rabi; the frequency-shift
// picture only holds while this is small.
double nonlinearity_ratio(const ClassicalParams& cp, double z);

}  // namespace spincant
