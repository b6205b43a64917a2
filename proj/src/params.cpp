#include "spincant/params.hpp"

#include <cmath>
#include <numbers>

#include "spincant/errors.hpp"

namespace spincant {

void validate(const PhysicalParams& p) {
    auto positive = [](double v, const char* name) {
        if (!(v > 0)) throw ConfigError(std::string("physical parameter must be positive: ") + name);
    };
    positive(p.cantilever_frequency_hz, "cantilever_frequency_hz");
    positive(p.force_constant_n_per_m, "force_constant_n_per_m");
    positive(p.rf_field_t, "rf_field_t");
    positive(p.gyromagnetic_ratio_hz_per_t, "gyromagnetic_ratio_hz_per_t");
    positive(p.quality_factor, "quality_factor");
    if (!(p.field_gradient_t_per_m >= 0))
        throw ConfigError("physical parameter must be non-negative: field_gradient_t_per_m");
    if (!(p.effective_spin_count >= 1))
        throw ConfigError("physical parameter must be >= 1: effective_spin_count");
}

std::pair<OscillatorQuanta, DimensionlessParams> reduce(const PhysicalParams& p) {
    validate(p);
    const double omega_c = 2.0 * std::numbers::pi * p.cantilever_frequency_hz;
    const double gamma = 2.0 * std::numbers::pi * p.gyromagnetic_ratio_hz_per_t;

    OscillatorQuanta q;
    q.energy_quantum_j = kHbar * omega_c;
    q.force_quantum_n = std::sqrt(p.force_constant_n_per_m * q.energy_quantum_j);
    q.length_quantum_m = std::sqrt(q.energy_quantum_j / p.force_constant_n_per_m);
    q.momentum_quantum_kg_m_per_s = kHbar / q.length_quantum_m;

    DimensionlessParams d;
    d.rabi = gamma * p.rf_field_t / omega_c;
    d.coupling = kHbar * gamma * p.field_gradient_t_per_m / (2.0 * q.force_quantum_n);
    d.basis_size = 0;
    return {q, d};
}

double time_to_dimensionless(double t_seconds, const PhysicalParams& p) {
    return 2.0 * std::numbers::pi * p.cantilever_frequency_hz * t_seconds;
}

}  // namespace spincant
