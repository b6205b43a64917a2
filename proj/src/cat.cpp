#include "spincant/cat.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "spincant/errors.hpp"

namespace spincant {

namespace {

double basin_area(const std::vector<double>& p, int lo, int hi, double dz) {
    double acc = 0.0;
    for (int j = lo; j < hi; j++) acc += 0.5 * (p[j] + p[j + 1]);
    return acc * dz;
}

// Prominence of the maximum at i: drop to the highest of the two minima that
// separate it from the nearest strictly higher ground (or the grid edges).
double prominence_at(const std::vector<double>& p, int i) {
    double left_min = p[i];
    for (int j = i - 1; j >= 0 && p[j] <= p[i]; j--) left_min = std::min(left_min, p[j]);
    double right_min = p[i];
    const int m = static_cast<int>(p.size());
    for (int j = i + 1; j < m && p[j] <= p[i]; j++) right_min = std::min(right_min, p[j]);
    return p[i] - std::max(left_min, right_min);
}

}  // namespace

CatReport detect_peaks(const DensitySnapshot& snap, double prominence_floor) {
    const std::vector<double>& p = snap.p_total;
    const int m = static_cast<int>(p.size());
    if (m < 3) throw ConfigError("peak detection: need at least 3 density samples");

    double p_max = 0.0;
    for (double v : p) {
        if (!std::isfinite(v)) throw HealthError("peak detection: non-finite density");
        p_max = std::max(p_max, v);
    }
    if (p_max <= 0.0) throw ConfigError("peak detection: density is identically zero");

    CatReport rep;
    rep.tau = snap.tau;
    rep.grid = snap.grid;

    const double floor = prominence_floor * p_max;
    std::vector<int> idx;
    for (int i = 1; i + 1 < m; i++) {
        if (p[i] > p[i - 1] && p[i] >= p[i + 1] && prominence_at(p, i) >= floor)
            idx.push_back(i);
    }
    if (idx.empty()) return rep;

    // Basin boundaries: argmin between consecutive peaks, grid edges outside.
    std::vector<int> bounds(idx.size() + 1);
    bounds.front() = 0;
    bounds.back() = m - 1;
    for (std::size_t k = 0; k + 1 < idx.size(); k++) {
        int lo = idx[k], best = lo;
        for (int j = lo; j <= idx[k + 1]; j++)
            if (p[j] < p[best]) best = j;
        bounds[k + 1] = best;
    }

    const double dz = snap.grid.dz();
    for (std::size_t k = 0; k < idx.size(); k++) {
        PeakInfo pk;
        pk.index = idx[k];
        pk.index_lo = bounds[k];
        pk.index_hi = bounds[k + 1];
        pk.prominence = prominence_at(p, idx[k]);
        pk.area = basin_area(p, pk.index_lo, pk.index_hi, dz);
        pk.up_area = basin_area(snap.p_up, pk.index_lo, pk.index_hi, dz);
        pk.down_area = basin_area(snap.p_down, pk.index_lo, pk.index_hi, dz);

        // Parabola through the three samples around the maximum.
        const int i = idx[k];
        const double denom = p[i - 1] - 2.0 * p[i] + p[i + 1];
        double delta = 0.0;
        if (denom < 0.0) delta = 0.5 * (p[i - 1] - p[i + 1]) / denom;
        delta = std::clamp(delta, -0.5, 0.5);
        pk.position = snap.grid.z_at(i) + delta * dz;
        pk.amplitude = p[i] - 0.25 * (p[i - 1] - p[i + 1]) * delta;
        rep.peaks.push_back(pk);
    }

    if (rep.peaks.size() >= 2) {
        int top = 0, second = -1;
        for (int k = 1; k < rep.n_peaks(); k++)
            if (rep.peaks[k].area > rep.peaks[top].area) top = k;
        for (int k = 0; k < rep.n_peaks(); k++) {
            if (k == top) continue;
            if (second < 0 || rep.peaks[k].area > rep.peaks[second].area) second = k;
        }
        rep.major_index = top;
        rep.minor_index = second;
        rep.separation_d =
            std::abs(rep.peaks[top].position - rep.peaks[second].position);
    } else if (rep.peaks.size() == 1) {
        rep.major_index = 0;
    }
    return rep;
}

SplitSeries splitting_series(const std::vector<CatReport>& reports, int persistence) {
    if (persistence < 1) throw ConfigError("split series: persistence must be >= 1");
    const double nan = std::numeric_limits<double>::quiet_NaN();
    SplitSeries out;
    out.period_same_side = nan;
    out.period_adjacent = nan;

    const int n = static_cast<int>(reports.size());
    int run_start = -1;
    for (int i = 0; i <= n; i++) {
        const bool split = i < n && reports[i].n_peaks() >= 2;
        if (split && run_start < 0) run_start = i;
        if (!split && run_start >= 0) {
            if (i - run_start >= persistence) {
                const CatReport& first = reports[run_start];
                SplitEvent ev;
                ev.split_tau = first.tau;
                ev.merge_tau = i < n ? reports[i].tau : nan;
                ev.first_index = run_start;
                ev.minor_side = first.peaks[first.minor_index].position >
                                        first.peaks[first.major_index].position
                                    ? +1
                                    : -1;
                out.events.push_back(ev);
            }
            run_start = -1;
        }
    }

    double adj_sum = 0.0;
    int adj_n = 0;
    double same_sum = 0.0;
    int same_n = 0;
    for (std::size_t k = 0; k + 1 < out.events.size(); k++) {
        adj_sum += out.events[k + 1].split_tau - out.events[k].split_tau;
        adj_n++;
        for (std::size_t j = k + 1; j < out.events.size(); j++) {
            if (out.events[j].minor_side == out.events[k].minor_side) {
                same_sum += out.events[j].split_tau - out.events[k].split_tau;
                same_n++;
                break;
            }
        }
    }
    if (adj_n > 0) out.period_adjacent = adj_sum / adj_n;
    if (same_n > 0) out.period_same_side = same_sum / same_n;
    return out;
}

}  // namespace spincant
