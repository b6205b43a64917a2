#include "spincant/collapse.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>

#include "spincant/errors.hpp"
#include "spincant/observables.hpp"

namespace spincant {

namespace {

struct Window {
    double zl, zr;      // basin bounds
    double tw;          // ramp width
    bool open_l, open_r;  // basin touches the grid edge on that side
    WindowKind kind;

    double value(double z) const {
        if (!open_l && z < zl) return 0.0;
        if (!open_r && z > zr) return 0.0;
        if (kind == WindowKind::sharp) return 1.0;
        constexpr double pi = std::numbers::pi;
        double w = 1.0;
        if (!open_l && z < zl + tw) w *= 0.5 * (1.0 - std::cos(pi * (z - zl) / tw));
        if (!open_r && z > zr - tw) w *= 0.5 * (1.0 - std::cos(pi * (zr - z) / tw));
        return w;
    }
};

}  // namespace

SpinorFockState collapse(const SpinorFockState& s, const CatReport& rep, int peak,
                         const CollapseControls& ctl, double* captured_weight) {
    if (peak < 0 || peak >= rep.n_peaks())
        throw ConfigError("collapse: peak index out of range");
    // window bounds come from the report's own grid, so a report detected on
    // any grid collapses correctly regardless of the controls' analysis grid
    const SpatialGrid& ag = rep.grid;
    if (ctl.fine_points < ag.points)
        throw ConfigError("collapse: fine grid must be at least as dense as the analysis grid");

    const PeakInfo& pk = rep.peaks[peak];
    Window win;
    win.zl = ag.z_at(pk.index_lo);
    win.zr = ag.z_at(pk.index_hi);
    win.open_l = pk.index_lo == 0;
    win.open_r = pk.index_hi == ag.points - 1;
    win.tw = std::min(ctl.taper_cells * ag.dz(), 0.25 * (win.zr - win.zl));
    win.kind = ctl.window;

    const int n = s.size();
    const SpatialGrid fg{ag.z_min, ag.z_max, ctl.fine_points};
    const HermiteBasis fine(fg, n);
    const int m = fg.points;
    const double dz = fg.dz();

    std::vector<cplx> psi_a(m), psi_b(m);
    fine.synthesize(s.a.data(), n, psi_a.data());
    fine.synthesize(s.b.data(), n, psi_b.data());

    double captured = 0.0;
    for (int i = 0; i < m; i++) {
        const double w = win.value(fg.z_at(i));
        psi_a[i] *= w;
        psi_b[i] *= w;
        const double d = std::norm(psi_a[i]) + std::norm(psi_b[i]);
        captured += (i == 0 || i == m - 1) ? 0.5 * d : d;
    }
    captured *= dz;
    if (captured_weight) *captured_weight = captured;

    SpinorFockState out(n);
    out.tau = s.tau;
    fine.project(psi_a.data(), n, out.a.data());
    fine.project(psi_b.data(), n, out.b.data());
    const double nrm = out.norm_sq();
    if (nrm < 1e-12)
        throw HealthError("collapse: window captured a negligible part of the state");
    out.normalize();
    return out;
}

int sample_peak(const CatReport& rep, double u) {
    if (rep.peaks.empty()) throw ConfigError("sample_peak: report has no peaks");
    double total = 0.0;
    for (const auto& pk : rep.peaks) total += pk.area;
    if (total <= 0.0) throw ConfigError("sample_peak: peak areas are all zero");
    double acc = 0.0;
    for (int k = 0; k < rep.n_peaks(); k++) {
        acc += rep.peaks[k].area / total;
        if (u < acc) return k;
    }
    return rep.n_peaks() - 1;
}

JumpRunResult run_with_jumps(
    const SpinorFockState& init, const DriveProfile& drive, const QuantumParams& qp,
    double tau_end, const CollapseSchedule& sched, const EvolveControls& evolve_ctl,
    const CollapseControls& collapse_ctl,
    const std::function<void(const SpinorFockState&, const SnapshotInfo&)>& on_snapshot) {
    if (tau_end < init.tau) throw ConfigError("jump run: tau_end precedes the state's tau");

    QuantumPropagator prop(init, drive, qp, evolve_ctl);
    CounterRng rng(sched.rng_seed, sched.rng_stream);
    JumpRunResult result;

    std::size_t life_idx = 0;
    // Returns the next inter-jump interval, or nothing once the schedule is out.
    auto next_lifetime = [&]() -> std::optional<double> {
        if (life_idx < sched.lifetimes.size()) return sched.lifetimes[life_idx++];
        if (sched.decoherence_time > 0.0)
            return sched.decoherence_time * (0.5 + rng.uniform());
        return std::nullopt;
    };
    const double inf = std::numeric_limits<double>::infinity();
    std::optional<double> first = next_lifetime();
    double deadline = first ? init.tau + *first : inf;

    std::optional<HermiteBasis> basis;  // built on first deadline check

    auto handle = [&] {
        if (on_snapshot) {
            SnapshotInfo info{prop.tau(), prop.norm_drift(), prop.tail()};
            on_snapshot(prop.current(), info);
        }
        while (prop.tau() >= deadline - 1e-9) {
            if (!basis) basis.emplace(collapse_ctl.analysis_grid, init.size());
            const SpinorFockState s = prop.current();
            const DensitySnapshot snap = density(s, *basis);
            const CatReport rep = detect_peaks(snap, collapse_ctl.prominence_floor);
            if (rep.n_peaks() < 2) {
                result.deferred_checks++;
                break;
            }
            JumpRecord rec;
            rec.tau = prop.tau();
            rec.deadline = deadline;
            rec.rng_counter = rng.counter();
            rec.chosen_peak = sample_peak(rep, rng.uniform());
            rec.chose_major = rec.chosen_peak == rep.major_index;
            for (const auto& pk : rep.peaks) rec.peak_areas.push_back(pk.area);
            const auto [pre_a, pre_b] = populations(s);
            rec.pre_p11 = pre_a;
            rec.pre_p22 = pre_b;
            const SpinorFockState reduced =
                collapse(s, rep, rec.chosen_peak, collapse_ctl, &rec.captured_weight);
            const auto [post_a, post_b] = populations(reduced);
            rec.post_p11 = post_a;
            rec.post_p22 = post_b;
            prop.replace_state(reduced);
            result.jumps.push_back(std::move(rec));
            std::optional<double> life = next_lifetime();
            deadline = life ? prop.tau() + *life : inf;
        }
    };

    handle();
    const double tau0 = init.tau;
    const double span = tau_end - tau0;
    const long n_strides =
        static_cast<long>(std::floor(span / evolve_ctl.snapshot_stride + 1e-9));
    for (long k = 1; k <= n_strides; k++) {
        prop.advance_to(tau0 + k * evolve_ctl.snapshot_stride);
        handle();
    }
    if (prop.tau() < tau_end) {
        prop.advance_to(tau_end);
        handle();
    }
    result.final_state = prop.current();
    result.stats = prop.stats();
    return result;
}

}  // namespace spincant
