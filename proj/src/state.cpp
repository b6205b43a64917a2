#include "spincant/state.hpp"

#include <cmath>
#include <string>

#include "spincant/errors.hpp"

namespace spincant {

double SpinorFockState::norm_sq() const {
    double s = 0;
    for (const auto& v : a) s += std::norm(v);
    for (const auto& v : b) s += std::norm(v);
    return s;
}

double SpinorFockState::tail_mass() const {
    if (a.empty()) return 0;
    return std::norm(a.back()) + std::norm(b.back());
}

void SpinorFockState::normalize() {
    const double n2 = norm_sq();
    if (!(n2 > 0)) throw ConfigError("cannot normalize a zero state");
    const double inv = 1.0 / std::sqrt(n2);
    for (auto& v : a) v *= inv;
    for (auto& v : b) v *= inv;
}

SpinorDir SpinorDir::from_angles(double theta, double phi) {
    SpinorDir s;
    s.up = std::cos(theta / 2);
    s.down = std::polar(std::sin(theta / 2), phi);
    return s;
}

CoherentInit CoherentInit::from_means(double mean_z, double mean_p) {
    return {cplx(mean_z, mean_p) / std::sqrt(2.0)};
}

double CoherentInit::mean_z() const { return std::sqrt(2.0) * alpha.real(); }
double CoherentInit::mean_p() const { return std::sqrt(2.0) * alpha.imag(); }

SpinorFockState coherent_state(const CoherentInit& init, int n, const SpinorDir& spin) {
    if (n < 2) throw ConfigError("coherent_state: basis size must be >= 2");
    const double spin_norm = std::norm(spin.up) + std::norm(spin.down);
    if (std::abs(spin_norm - 1.0) > 1e-12) throw ConfigError("coherent_state: spinor not unit norm");

    // c[k+1] = c[k] * alpha / sqrt(k+1), c[0] = exp(-|alpha|^2/2): each factor
    // is moderate, so the recursion never meets the n! overflow of the closed form.
    std::vector<cplx> c(n);
    c[0] = std::exp(-0.5 * std::norm(init.alpha));
    for (int k = 0; k + 1 < n; k++) c[k + 1] = c[k] * init.alpha / std::sqrt(double(k + 1));

    double kept = 0;
    for (const auto& v : c) kept += std::norm(v);
    if (1.0 - kept > 1e-10) {
        const int needed = static_cast<int>(std::ceil(std::norm(init.alpha) +
                                                      8.0 * std::abs(init.alpha))) + 1;
        throw ConfigError("coherent_state: basis too small (norm loss " +
                          std::to_string(1.0 - kept) + "); need about " +
                          std::to_string(needed) + " levels");
    }

    SpinorFockState s(n);
    const double inv = 1.0 / std::sqrt(kept);
    for (int k = 0; k < n; k++) {
        s.a[k] = c[k] * spin.up * inv;
        s.b[k] = c[k] * spin.down * inv;
    }
    return s;
}

}  // namespace spincant
