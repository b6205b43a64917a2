#pragma once

namespace spincant {

// Frequency-modulation profile performing cyclic adiabatic inversion: a linear
// ramp of the rf detuning rate up to ramp_end, then a sinusoidal modulation at
// the cantilever period.
//
//   phi_dot(tau) = ramp_offset + ramp_slope*tau                  for tau <= ramp_end
//                = modulation_amplitude*sin(tau - phase_origin)  for tau >  ramp_end
struct DriveProfile {
    double ramp_offset = 0;
    double ramp_slope = 0;
    double ramp_end = 0;
    double modulation_amplitude = 0;
    double modulation_phase_origin = 0;
};

// The two stock inversion profiles used by the shipped presets.
DriveProfile drive_profile_a();  // (-600 + 30*tau | 100*sin(tau-20)), single-spin runs
DriveProfile drive_profile_b();  // (-6000 + 300*tau | 1000*sin(tau-20)), strong-coupling runs

// Throws ConfigError when the two branches disagree by more than 1e-9 at
// ramp_end (the profile must be continuous there).
void check_continuity(const DriveProfile& d);

// Modulation rate at tau (tau >= 0; ConfigError otherwise).
double phi_dot(const DriveProfile& d, double tau);

// Analytic derivative of phi_dot; at the ramp joint the right-hand (sinusoid)
// branch is used.  Diagnostic only.
double phi_ddot(const DriveProfile& d, double tau);

// max over [tau_lo, tau_hi] of |phi_ddot|/rabi^2; the adiabatic-following
// condition asks for this to be small (callers warn at >= 0.1).
// ConfigError on an empty range or non-positive rabi.
double adiabaticity_margin(const DriveProfile& d, double rabi, double tau_lo, double tau_hi);

}  // namespace spincant
