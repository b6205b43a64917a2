#include "spincant/quantum.hpp"

#include <cmath>
#include <cstring>
#include <string>

#include "spincant/errors.hpp"

namespace spincant {

namespace {

inline cplx times_minus_i(const cplx& v) { return {v.imag(), -v.real()}; }

// sqrt(k) for k = 0..n, cached: the hopping amplitudes dominate the RHS cost.
const double* sqrt_table(int n) {
    static thread_local std::vector<double> t;
    if (static_cast<int>(t.size()) < n + 1) {
        t.resize(n + 1);
        for (std::size_t i = 0; i < t.size(); i++) t[i] = std::sqrt(double(i));
    }
    return t.data();
}

}  // namespace

void spinor_rhs(const QuantumParams& qp, double phidot, const cplx* a, const cplx* b, cplx* da,
                cplx* db, int n) {
    const double c = qp.coupling / std::sqrt(2.0);
    const double e2 = 0.5 * qp.rabi;
    const double pd2 = 0.5 * phidot;
    const double bsign = qp.eq12_verbatim ? 1.0 : -1.0;
    const double* sq = sqrt_table(n);
    for (int k = 0; k < n; k++) {
        const double sl = sq[k];                      // couples to level k-1
        const double sr = k + 1 < n ? sq[k + 1] : 0.0;
        const cplx am = k > 0 ? a[k - 1] : cplx{};
        const cplx ap = k + 1 < n ? a[k + 1] : cplx{};
        const cplx bm = k > 0 ? b[k - 1] : cplx{};
        const cplx bp = k + 1 < n ? b[k + 1] : cplx{};
        const cplx ha = (k + 0.5 + pd2) * a[k] - c * (sl * am + sr * ap) - e2 * b[k];
        const cplx hb = (k + 0.5 + bsign * pd2) * b[k] + c * (sl * bm + sr * bp) - e2 * a[k];
        da[k] = times_minus_i(ha);
        db[k] = times_minus_i(hb);
    }
}

void spinor_rhs_rotated(const QuantumParams& qp, double phidot, double tau, const cplx* a,
                        const cplx* b, cplx* da, cplx* db, int n) {
    const double c = qp.coupling / std::sqrt(2.0);
    const double e2 = 0.5 * qp.rabi;
    const double pd2 = 0.5 * phidot;
    const double bsign = qp.eq12_verbatim ? 1.0 : -1.0;
    const cplx up = std::polar(1.0, tau);  // phase on the downward hop
    const cplx dn = std::conj(up);
    const double* sq = sqrt_table(n);
    for (int k = 0; k < n; k++) {
        const double sl = sq[k];
        const double sr = k + 1 < n ? sq[k + 1] : 0.0;
        const cplx am = k > 0 ? up * a[k - 1] : cplx{};
        const cplx ap = k + 1 < n ? dn * a[k + 1] : cplx{};
        const cplx bm = k > 0 ? up * b[k - 1] : cplx{};
        const cplx bp = k + 1 < n ? dn * b[k + 1] : cplx{};
        const cplx ha = pd2 * a[k] - c * (sl * am + sr * ap) - e2 * b[k];
        const cplx hb = bsign * pd2 * b[k] + c * (sl * bm + sr * bp) - e2 * a[k];
        da[k] = times_minus_i(ha);
        db[k] = times_minus_i(hb);
    }
}

QuantumPropagator::QuantumPropagator(const SpinorFockState& init, const DriveProfile& drive,
                                     const QuantumParams& qp, const EvolveControls& ctl)
    : n_(init.size()), drive_(drive), qp_(qp), ctl_(ctl), tau_(init.tau), y_(4 * init.size()),
      ode_(4 * init.size()) {
    if (n_ < 2) throw ConfigError("quantum propagator: basis size must be >= 2");
    if (std::abs(init.norm_sq() - 1.0) > 1e-9)
        throw ConfigError("quantum propagator: initial state is not normalized");
    check_continuity(drive_);
    replace_state(init);
}

void QuantumPropagator::replace_state(const SpinorFockState& s) {
    if (s.size() != n_) throw ConfigError("quantum propagator: state size mismatch");
    std::memcpy(y_.data(), s.a.data(), n_ * sizeof(cplx));
    std::memcpy(y_.data() + 2 * n_, s.b.data(), n_ * sizeof(cplx));
    if (ctl_.frame == Frame::rotated) {
        // physical -> rotated: multiply level k by e^{+i(k+1/2)tau}
        auto* za = reinterpret_cast<cplx*>(y_.data());
        auto* zb = za + n_;
        for (int k = 0; k < n_; k++) {
            const cplx ph = std::polar(1.0, (k + 0.5) * tau_);
            za[k] *= ph;
            zb[k] *= ph;
        }
    }
}

SpinorFockState QuantumPropagator::current() const {
    SpinorFockState s(n_);
    s.tau = tau_;
    const auto* za = reinterpret_cast<const cplx*>(y_.data());
    const auto* zb = za + n_;
    if (ctl_.frame == Frame::rotated) {
        for (int k = 0; k < n_; k++) {
            const cplx ph = std::polar(1.0, -(k + 0.5) * tau_);
            s.a[k] = za[k] * ph;
            s.b[k] = zb[k] * ph;
        }
    } else {
        std::memcpy(s.a.data(), za, n_ * sizeof(cplx));
        std::memcpy(s.b.data(), zb, n_ * sizeof(cplx));
    }
    return s;
}

double QuantumPropagator::norm_drift() const {
    double s = 0;
    for (const double v : y_) s += v * v;
    return std::abs(1.0 - s);
}

double QuantumPropagator::tail() const {
    const auto* za = reinterpret_cast<const cplx*>(y_.data());
    const auto* zb = za + n_;
    return std::norm(za[n_ - 1]) + std::norm(zb[n_ - 1]);
}

void QuantumPropagator::check_health() const {
    const double drift = norm_drift();
    if (drift > ctl_.norm_tolerance)
        throw HealthError("norm drift " + std::to_string(drift) + " exceeds tolerance at tau=" +
                          std::to_string(tau_));
    const double t = tail();
    if (t > ctl_.tail_threshold)
        throw HealthError("basis truncation: top-level mass " + std::to_string(t) +
                          " exceeds threshold at tau=" + std::to_string(tau_) +
                          " (increase basis size)");
}

void QuantumPropagator::advance_to(double tau) {
    if (tau < tau_) throw ConfigError("quantum propagator: cannot integrate backwards");
    if (tau == tau_) return;
    const int n = n_;
    const QuantumParams qp = qp_;
    const DriveProfile drive = drive_;
    const bool rotated = ctl_.frame == Frame::rotated;
    OdeRhs rhs = [n, qp, drive, rotated](double t, const double* y, double* dy) {
        const auto* a = reinterpret_cast<const cplx*>(y);
        const auto* b = a + n;
        auto* da = reinterpret_cast<cplx*>(dy);
        auto* db = da + n;
        const double pd = phi_dot(drive, t);
        if (rotated)
            spinor_rhs_rotated(qp, pd, t, a, b, da, db, n);
        else
            spinor_rhs(qp, pd, a, b, da, db, n);
    };
    OdeControls oc;
    oc.rtol = ctl_.rtol;
    oc.atol = ctl_.atol;
    oc.h_init = h_prev_;
    const OdeStats st = ode_.integrate(rhs, y_, tau_, tau, oc);
    cum_ += st;
    h_prev_ = st.h_last;
    tau_ = tau;
    check_health();
}

void evolve(SpinorFockState& state, const DriveProfile& drive, const QuantumParams& qp,
            double tau_end, const EvolveControls& ctl,
            const std::function<void(const SpinorFockState&, const SnapshotInfo&)>& on_snapshot,
            OdeStats* stats_out) {
    if (tau_end < state.tau) throw ConfigError("evolve: tau_end precedes the state's tau");
    QuantumPropagator prop(state, drive, qp, ctl);
    auto emit = [&] {
        if (on_snapshot) {
            SnapshotInfo info{prop.tau(), prop.norm_drift(), prop.tail()};
            on_snapshot(prop.current(), info);
        }
    };
    emit();
    const double tau0 = state.tau;
    const double span = tau_end - tau0;
    const long n_strides = static_cast<long>(std::floor(span / ctl.snapshot_stride + 1e-9));
    for (long k = 1; k <= n_strides; k++) {
        prop.advance_to(tau0 + k * ctl.snapshot_stride);
        emit();
    }
    if (prop.tau() < tau_end) {
        prop.advance_to(tau_end);
        emit();
    }
    state = prop.current();
    if (stats_out) *stats_out += prop.stats();
}

}  // namespace spincant
