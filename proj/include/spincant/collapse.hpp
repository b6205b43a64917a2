#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "spincant/cat.hpp"
#include "spincant/quantum.hpp"
#include "spincant/rng.hpp"

namespace spincant {

// When and how the state is forced to pick one density branch. Intervals
// between jumps come from `lifetimes` while entries remain, then are drawn as
// decoherence_time * (0.5 + U) with U uniform in [0, 1). A schedule with no
// explicit lifetimes and decoherence_time <= 0 never fires, which makes the
// run identical to plain evolution.
struct CollapseSchedule {
    double decoherence_time = 0.0;
    std::vector<double> lifetimes;
    std::uint64_t rng_seed = 0;
    std::uint64_t rng_stream = 0;
};

enum class WindowKind { sharp, smooth };

struct CollapseControls {
    SpatialGrid analysis_grid{};
    double prominence_floor = 1e-4;
    WindowKind window = WindowKind::smooth;
    // The projection runs on a denser grid with the same extent, so products
    // of the highest basis levels stay below the aliasing limit.
    int fine_points = 8192;
    double taper_cells = 1.0;  // smooth-window ramp width, in analysis cells
};

struct JumpRecord {
    double tau = 0.0;       // snapshot at which the reduction fired
    double deadline = 0.0;  // the deadline it was serving
    int chosen_peak = -1;   // index into the report's peaks
    bool chose_major = false;
    std::vector<double> peak_areas;
    double pre_p11 = 0.0, pre_p22 = 0.0;
    double post_p11 = 0.0, post_p22 = 0.0;
    double captured_weight = 0.0;  // squared norm kept by the window
    std::uint64_t rng_counter = 0;  // counter of the branch-choice draw
};

// Multiply the position representation of both spin components by a window
// over the chosen peak's basin, project back, and renormalize. The state and
// report must describe the same instant. captured_weight (optional out) is
// the squared norm after windowing, before renormalization.
SpinorFockState collapse(const SpinorFockState& s, const CatReport& rep, int peak,
                         const CollapseControls& ctl, double* captured_weight = nullptr);

// Categorical choice among all peaks, weighted by basin area.
int sample_peak(const CatReport& rep, double u);

struct JumpRunResult {
    std::vector<JumpRecord> jumps;
    SpinorFockState final_state{1};
    OdeStats stats;
    int deferred_checks = 0;  // snapshots past a deadline with only one peak
};

// Stride through the evolution like evolve(); whenever a snapshot lies at or
// past the pending deadline and shows at least two peaks, pick a branch,
// reduce, and schedule the next deadline from the fire time. Snapshots are
// reported to on_snapshot before any reduction at that instant; the record
// holds the pre/post populations.
JumpRunResult run_with_jumps(
    const SpinorFockState& init, const DriveProfile& drive, const QuantumParams& qp,
    double tau_end, const CollapseSchedule& sched, const EvolveControls& evolve_ctl,
    const CollapseControls& collapse_ctl,
    const std::function<void(const SpinorFockState&, const SnapshotInfo&)>& on_snapshot =
        nullptr);

}  // namespace spincant
