#include "spincant/drive.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "spincant/errors.hpp"

namespace spincant {

DriveProfile drive_profile_a() { return {-600.0, 30.0, 20.0, 100.0, 20.0}; }
DriveProfile drive_profile_b() { return {-6000.0, 300.0, 20.0, 1000.0, 20.0}; }

void check_continuity(const DriveProfile& d) {
    const double left = d.ramp_offset + d.ramp_slope * d.ramp_end;
    const double right = d.modulation_amplitude * std::sin(d.ramp_end - d.modulation_phase_origin);
    if (std::abs(left - right) >= 1e-9)
        throw ConfigError("drive profile discontinuous at ramp_end");
}

double phi_dot(const DriveProfile& d, double tau) {
    if (tau < 0) throw ConfigError("phi_dot: tau must be >= 0");
    if (tau <= d.ramp_end) return d.ramp_offset + d.ramp_slope * tau;
    return d.modulation_amplitude * std::sin(tau - d.modulation_phase_origin);
}

double phi_ddot(const DriveProfile& d, double tau) {
    if (tau < 0) throw ConfigError("phi_ddot: tau must be >= 0");
    if (tau < d.ramp_end) return d.ramp_slope;
    return d.modulation_amplitude * std::cos(tau - d.modulation_phase_origin);
}

namespace {

// max of |cos(tau - origin)| over [lo, hi] (assumes lo <= hi)
double max_abs_cos(double lo, double hi, double origin) {
    if (hi - lo >= std::numbers::pi) return 1.0;
    const double a = lo - origin, b = hi - origin;
    // |cos| has maxima at integer multiples of pi
    const double k = std::ceil(a / std::numbers::pi);
    if (k * std::numbers::pi <= b) return 1.0;
    return std::max(std::abs(std::cos(a)), std::abs(std::cos(b)));
}

}  // namespace

double adiabaticity_margin(const DriveProfile& d, double rabi, double tau_lo, double tau_hi) {
    if (!(rabi > 0)) throw ConfigError("adiabaticity_margin: rabi must be positive");
    if (!(tau_hi > tau_lo)) throw ConfigError("adiabaticity_margin: empty tau range");
    double peak = 0;
    if (tau_lo < d.ramp_end)  // ramp segment contributes its constant slope
        peak = std::abs(d.ramp_slope);
    if (tau_hi > d.ramp_end) {
        const double lo = std::max(tau_lo, d.ramp_end);
        peak = std::max(peak, std::abs(d.modulation_amplitude) *
                                  max_abs_cos(lo, tau_hi, d.modulation_phase_origin));
    }
    return peak / (rabi * rabi);
}

}  // namespace spincant
