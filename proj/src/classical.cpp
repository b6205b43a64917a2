#include "spincant/classical.hpp"

#include <algorithm>

#include "spincant/errors.hpp"

namespace spincant {

void classical_rhs(const ClassicalParams& cp, double tau, const double* y, double* dy) {
    const double z = y[0], p = y[1];
    const double sx = y[2], sy = y[3], sz = y[4];
    const double bx = cp.rabi;
    const double bz = -phi_dot(cp.drive, tau) + 2.0 * cp.coupling * z;
    dy[0] = p;
    dy[1] = -z + 2.0 * cp.coupling * cp.spin_count * sz;
    // s x b with b_y = 0
    dy[2] = sy * bz;
    dy[3] = sz * bx - sx * bz;
    dy[4] = -sy * bx;
}

namespace {

void validate(const ClassicalParams& cp) {
    if (cp.spin_count < 1.0)
        throw ConfigError("classical run: spin_count must be at least 1");
    if (cp.rabi < 0.0) throw ConfigError("classical run: rabi must be non-negative");
    if (cp.coupling < 0.0)
        throw ConfigError("classical run: coupling must be non-negative");
    check_continuity(cp.drive);
}

ClassicalSeries run_series(const OdeRhs& rhs, std::vector<double> y, double tau0,
                           double tau_end, const ClassicalControls& ctl,
                           const std::function<ClassicalState(double, const std::vector<double>&)>&
                               unpack,
                           bool check_spin) {
    if (tau_end < tau0) throw ConfigError("classical run: tau_end precedes the start");
    if (ctl.snapshot_stride <= 0.0)
        throw ConfigError("classical run: snapshot_stride must be positive");

    Dop853 solver(y.size());
    OdeControls ode = ctl.ode;
    ClassicalSeries out;
    const double s0 = check_spin ? unpack(tau0, y).spin_length() : 0.0;

    auto emit = [&](double tau) {
        ClassicalState s = unpack(tau, y);
        if (check_spin) {
            const double drift = std::abs(s.spin_length() - s0);
            out.max_spin_drift = std::max(out.max_spin_drift, drift);
            if (drift > ctl.spin_length_tolerance)
                throw HealthError("classical run: spin length drifted by " +
                                  std::to_string(drift));
        }
        out.snapshots.push_back(s);
    };
    auto advance = [&](double a, double b) {
        OdeStats st = solver.integrate(rhs, y, a, b, ode);
        out.stats += st;
        ode.h_init = st.h_last;
    };

    emit(tau0);
    const double span = tau_end - tau0;
    const long n_strides = static_cast<long>(std::floor(span / ctl.snapshot_stride + 1e-9));
    double tau = tau0;
    for (long k = 1; k <= n_strides; k++) {
        const double next = tau0 + k * ctl.snapshot_stride;
        advance(tau, next);
        tau = next;
        emit(tau);
    }
    if (tau < tau_end) {
        advance(tau, tau_end);
        emit(tau_end);
    }
    return out;
}

}  // namespace

ClassicalSeries evolve_classical(const ClassicalParams& cp, const ClassicalState& init,
                                 double tau_end, const ClassicalControls& ctl) {
    validate(cp);
    std::vector<double> y{init.z, init.p, init.sx, init.sy, init.sz};
    auto rhs = [&cp](double tau, const double* yy, double* dy) {
        classical_rhs(cp, tau, yy, dy);
    };
    auto unpack = [](double tau, const std::vector<double>& yy) {
        return ClassicalState{yy[0], yy[1], yy[2], yy[3], yy[4], tau};
    };
    return run_series(rhs, std::move(y), init.tau, tau_end, ctl, unpack, true);
}

ClassicalSeries evolve_pinned_spin(const ClassicalParams& cp, const ClassicalState& init,
                                   double tau_end, const ClassicalControls& ctl) {
    validate(cp);
    const double f = cp.coupling * cp.spin_count;
    std::vector<double> y{init.z, init.p};
    auto rhs = [f](double tau, const double* yy, double* dy) {
        dy[0] = yy[1];
        dy[1] = -yy[0] + f * std::cos(tau);
    };
    auto unpack = [](double tau, const std::vector<double>& yy) {
        return ClassicalState{yy[0], yy[1], 0.0, 0.0, 0.5 * std::cos(tau), tau};
    };
    return run_series(rhs, std::move(y), init.tau, tau_end, ctl, unpack, false);
}

double resonant_envelope(const ClassicalParams& cp, double tau) {
    return 0.5 * cp.spin_count * cp.coupling * tau;
}

double stationary_amplitude(const ClassicalParams& cp, double quality_factor) {
    return cp.spin_count * cp.coupling * quality_factor;
}

double nonlinearity_ratio(const ClassicalParams& cp, double z) {
    if (cp.rabi <= 0.0) throw ConfigError("nonlinearity ratio: rabi must be positive");
    return 2.0 * cp.coupling * std::abs(z) / cp.rabi;
}

}  // namespace spincant
