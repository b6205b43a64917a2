#pragma once

#include <utility>

namespace spincant {

// 2018 CODATA reduced Planck constant, J*s.
inline constexpr double kHbar = 1.054571817e-34;

// Laboratory-scale description of the spin-cantilever setup.  Frequencies are
// ordinary (cycles/s) frequencies; angular frequencies are formed internally.
struct PhysicalParams {
    double cantilever_frequency_hz = 0;    // cantilever resonance, omega_c/2pi
    double force_constant_n_per_m = 0;     // cantilever spring constant k_c
    double rf_field_t = 0;                 // rotating rf field amplitude B_1
    double field_gradient_t_per_m = 0;     // static field gradient dB_z/dZ (may be 0)
    double gyromagnetic_ratio_hz_per_t = 0;  // gamma/2pi
    double quality_factor = 0;             // Q_c, sets the usable time horizon
    double effective_spin_count = 1;       // polarization excess driving the cantilever
};

// Natural oscillator scales derived from (omega_c, k_c): one energy quantum
// and the force/length/momentum built from it.
struct OscillatorQuanta {
    double energy_quantum_j = 0;             // E_c = hbar*omega_c
    double force_quantum_n = 0;              // F_c = sqrt(k_c*E_c)
    double length_quantum_m = 0;             // Z_c = sqrt(E_c/k_c)
    double momentum_quantum_kg_m_per_s = 0;  // P_c = hbar/Z_c
};

// Dimensionless couplings of the reduced model.  basis_size is carried along
// for run configuration; reduce() leaves it at 0 (meaning "choose per run").
// Exact rf resonance (rf frequency = Larmor frequency) is assumed throughout.
struct DimensionlessParams {
    double rabi = 0;      // epsilon: rf Rabi frequency over cantilever frequency
    double coupling = 0;  // eta: single-spin gradient force over the force quantum
    int basis_size = 0;   // oscillator levels retained in quantum runs
};

// Throws ConfigError naming the offending field.  The field gradient may be
// zero (decoupled spin); every other quantity must be strictly positive.
void validate(const PhysicalParams& p);

// Nondimensionalization: quanta from (omega_c, k_c), rabi = gamma*B1/omega_c,
// coupling = hbar*gamma*(dB_z/dZ)/(2*F_c).  Validates its input.
std::pair<OscillatorQuanta, DimensionlessParams> reduce(const PhysicalParams& p);

// tau = omega_c * t.
double time_to_dimensionless(double t_seconds, const PhysicalParams& p);

}  // namespace spincant
