#pragma once

#include <vector>

#include "spincant/observables.hpp"

namespace spincant {

// One local maximum of a density snapshot together with its basin: the sample
// range bounded by the neighboring inter-peak minima (or the grid edges).
struct PeakInfo {
    double position = 0.0;   // parabolically refined location
    double amplitude = 0.0;  // refined height
    double prominence = 0.0;
    double area = 0.0;  // basin-integrated total density
    double up_area = 0.0;
    double down_area = 0.0;
    int index = 0;  // raw sample index of the maximum
    int index_lo = 0;
    int index_hi = 0;

    double up_fraction() const { return area > 0.0 ? up_area / area : 0.0; }
};

struct CatReport {
    double tau = 0.0;
    SpatialGrid grid;             // grid the peak sample indices refer to
    std::vector<PeakInfo> peaks;  // ordered by position
    int major_index = -1;         // largest basin area, when >= 2 peaks
    int minor_index = -1;         // second-largest basin area
    double separation_d = 0.0;    // |position gap| of the two dominant peaks

    int n_peaks() const { return static_cast<int>(peaks.size()); }
};

// Local maxima of p_total whose prominence exceeds prominence_floor times the
// global maximum. Basin areas of adjacent peaks share the boundary sample, so
// they sum exactly to the trapezoid integral of the snapshot.
CatReport detect_peaks(const DensitySnapshot& snap, double prominence_floor = 1e-4);

// A stretch of consecutive reports with >= 2 peaks, at least `persistence`
// snapshots long.
struct SplitEvent {
    double split_tau = 0.0;  // first snapshot of the stretch
    double merge_tau = 0.0;  // first single-peak snapshot after it (NaN if none)
    int first_index = 0;     // index of the stretch start in the report series
    int minor_side = 0;      // +1: minor peak at larger z, -1: smaller
};

struct SplitSeries {
    std::vector<SplitEvent> events;
    // Mean spacing between onsets of events whose minor peak is on the same
    // side, and between adjacent onsets regardless of side. NaN if undefined.
    double period_same_side = 0.0;
    double period_adjacent = 0.0;
};

SplitSeries splitting_series(const std::vector<CatReport>& reports, int persistence = 3);

}  // namespace spincant
