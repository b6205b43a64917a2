#include "spincant/runner.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

#include <json.hpp>

#include "spincant/cat.hpp"
#include "spincant/errors.hpp"
#include "spincant/io.hpp"
#include "spincant/version.hpp"

namespace spincant {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string fmt_g(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt_hex(std::uint64_t v) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "0x%016llx", static_cast<unsigned long long>(v));
    return buf;
}

json num_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const ConfigError*>(&e)) return kExitConfig;
    if (dynamic_cast<const HealthError*>(&e)) return kExitHealth;
    if (dynamic_cast<const IoError*>(&e)) return kExitIo;
    return 1;
}

const char* error_kind_for(int exit_code) {
    switch (exit_code) {
        case kExitConfig: return "config";
        case kExitHealth: return "health";
        case kExitIo: return "io";
        default: return "internal";
    }
}

void write_error_json(const std::string& dir, const std::exception& e) {
    try {
        const int code = exit_code_for(e);
        json j{{"error", {{"kind", error_kind_for(code)}, {"message", e.what()}}},
               {"exit_code", code}};
        write_text_file(dir + "/error.json", j.dump(2) + "\n");
    } catch (...) {
        // the original error is the one worth reporting
    }
}

json ode_json(const OdeStats& st) {
    return json{{"steps", st.n_steps},
                {"accepted", st.n_accepted},
                {"rejected", st.n_rejected},
                {"rhs_evaluations", st.n_rhs}};
}

json cat_json(const SplitSeries& sp) {
    json ev = json::array();
    for (const auto& e : sp.events)
        ev.push_back({{"split_tau", e.split_tau},
                      {"merge_tau", num_or_null(e.merge_tau)},
                      {"first_index", e.first_index},
                      {"minor_side", e.minor_side}});
    return json{{"events", ev},
                {"first_split_tau",
                 sp.events.empty() ? json(nullptr) : json(sp.events.front().split_tau)},
                {"period_same_side", num_or_null(sp.period_same_side)},
                {"period_adjacent", num_or_null(sp.period_adjacent)}};
}

void write_splits_csv(const std::string& dir, const SplitSeries& sp) {
    CsvWriter w(dir + "/splits.csv", {"split_tau", "merge_tau", "first_index", "minor_side"});
    for (const auto& e : sp.events)
        w.row({e.split_tau, e.merge_tau, double(e.first_index), double(e.minor_side)});
    w.close();
}

// Per-snapshot analysis shared by quantum runs, jump runs, and stream replay:
// writes observables.csv / cat_series.csv / density.csv (+ snapshots.bin) and
// keeps the peak reports for the splitting summary.
struct SinkParams {
    std::string dir;
    SpatialGrid grid{};
    int levels = 0;
    long density_every = 10;
    bool write_stream = false;
    double prominence_floor = 1e-4;
};

class SnapshotSink {
  public:
    explicit SnapshotSink(const SinkParams& p)
        : p_(p),
          basis_(p.grid, p.levels),
          obs_(p.dir + "/observables.csv",
               {"tau", "z", "p", "sx", "sy", "sz", "p11", "p22", "r1", "r2", "norm_drift",
                "tail"}),
          cat_(p.dir + "/cat_series.csv",
               {"tau", "n_peaks", "major_z", "major_amplitude", "major_area",
                "major_up_fraction", "minor_z", "minor_amplitude", "minor_area",
                "minor_up_fraction", "separation_d", "boundary_density"}),
          dens_(p.dir + "/density.csv", {"tau", "z", "p_total", "p_up", "p_down"}) {
        if (p.write_stream) stream_.emplace(p.dir + "/snapshots.bin");
    }

    void consume(const SpinorFockState& s) {
        const Means m = means(s);
        const auto [p11, p22] = populations(s);
        const Correlations c = correlations(s);
        const double drift = std::abs(1.0 - s.norm_sq());
        const double tail = s.tail_mass();
        max_drift_ = std::max(max_drift_, drift);
        max_tail_ = std::max(max_tail_, tail);
        obs_.row({s.tau, m.z, m.p, m.sx, m.sy, m.sz, p11, p22, c.r1, c.r2, drift, tail});

        DensitySnapshot dens = density(s, basis_);
        max_boundary_ = std::max(max_boundary_, dens.boundary_density);
        CatReport rep = detect_peaks(dens, p_.prominence_floor);
        double mj_z = 0, mj_a = 0, mj_ar = 0, mj_up = 0;
        double mn_z = 0, mn_a = 0, mn_ar = 0, mn_up = 0;
        if (rep.major_index >= 0) {
            const PeakInfo& pk = rep.peaks[rep.major_index];
            mj_z = pk.position, mj_a = pk.amplitude, mj_ar = pk.area, mj_up = pk.up_fraction();
        }
        if (rep.minor_index >= 0) {
            const PeakInfo& pk = rep.peaks[rep.minor_index];
            mn_z = pk.position, mn_a = pk.amplitude, mn_ar = pk.area, mn_up = pk.up_fraction();
        }
        cat_.row({s.tau, double(rep.n_peaks()), mj_z, mj_a, mj_ar, mj_up, mn_z, mn_a, mn_ar,
                  mn_up, rep.separation_d, dens.boundary_density});

        if (index_ % p_.density_every == 0) {
            write_density_rows(dens);
            last_density_written_ = true;
        } else {
            last_density_written_ = false;
        }
        last_density_ = std::move(dens);

        if (stream_) stream_->append(s);
        reports_.push_back(std::move(rep));
        final_z_ = m.z;
        final_sz_ = m.sz;
        index_++;
    }

    void finish() {
        if (!last_density_written_ && index_ > 0) write_density_rows(last_density_);
        obs_.close();
        cat_.close();
        dens_.close();
        if (stream_) stream_->close();
    }

    const std::vector<CatReport>& reports() const { return reports_; }
    long count() const { return index_; }
    double max_drift() const { return max_drift_; }
    double max_tail() const { return max_tail_; }
    double max_boundary() const { return max_boundary_; }
    double final_z() const { return final_z_; }
    double final_sz() const { return final_sz_; }

  private:
    void write_density_rows(const DensitySnapshot& d) {
        for (int i = 0; i < d.grid.points; i++)
            dens_.row({d.tau, d.grid.z_at(i), d.p_total[i], d.p_up[i], d.p_down[i]});
    }

    SinkParams p_;
    HermiteBasis basis_;
    CsvWriter obs_, cat_, dens_;
    std::optional<SnapshotStreamWriter> stream_;
    std::vector<CatReport> reports_;
    DensitySnapshot last_density_;
    bool last_density_written_ = false;
    long index_ = 0;
    double max_drift_ = 0, max_tail_ = 0, max_boundary_ = 0;
    double final_z_ = 0, final_sz_ = 0;
};

long density_every_for(double density_stride, double snapshot_stride) {
    const long every = std::lround(density_stride / snapshot_stride);
    return every < 1 ? 1 : every;
}

json manifest_skeleton(const RunConfig& cfg, const std::vector<std::string>& warnings) {
    const char* mode = cfg.mode == RunConfig::Mode::quantum
                           ? "quantum"
                           : cfg.mode == RunConfig::Mode::classical ? "classical" : "jumps";
    return json{{"tool", {{"name", "spincant"}, {"version", kVersion}}},
                {"label", cfg.label},
                {"mode", mode},
                {"config_echo", "config.ini"},
                {"warnings", warnings}};
}

}  // namespace

std::string resolve_out_dir(const std::string& out_dir, const std::string& root_override) {
    const fs::path p(out_dir);
    if (p.is_absolute()) return p.string();
    std::string root = root_override;
    if (root.empty()) {
        const char* env = std::getenv("SPINCANT_OUT_ROOT");
        if (env && *env) root = env;
    }
    if (root.empty()) return p.string();
    return (fs::path(root) / p).string();
}

RunResult execute_run(const RunConfig& cfg, const std::string& root_override) {
    cfg.validate();
    const std::string dir = resolve_out_dir(cfg.out_dir, root_override);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory '" + dir + "': " + ec.message());

    try {
        write_text_file(dir + "/config.ini", config_to_ini(cfg));

        std::vector<std::string> warnings;
        if (cfg.rabi > 0) {
            const double margin = adiabaticity_margin(cfg.drive, cfg.rabi, 0.0, cfg.tau_end);
            if (margin >= 0.1)
                warnings.push_back("adiabatic-following margin reaches " + fmt_g(margin) +
                                   "; spin flips may not track the drive");
        }

        const auto t0 = std::chrono::steady_clock::now();
        RunResult res;
        res.out_dir = dir;
        json manifest;

        if (cfg.mode == RunConfig::Mode::classical) {
            const ClassicalParams cp = cfg.classical_params();
            const ClassicalState init = cfg.initial_classical_state();
            const ClassicalSeries series =
                cfg.pinned ? evolve_pinned_spin(cp, init, cfg.tau_end, cfg.classical_controls())
                           : evolve_classical(cp, init, cfg.tau_end, cfg.classical_controls());
            CsvWriter w(dir + "/classical.csv",
                        {"tau", "z", "p_z", "energy", "sx", "sy", "sz"});
            double max_abs_z = 0;
            for (const auto& s : series.snapshots) {
                w.row({s.tau, s.z, s.p, s.energy(), s.sx, s.sy, s.sz});
                max_abs_z = std::max(max_abs_z, std::abs(s.z));
            }
            w.close();
            write_classical_plot_scripts(dir);
            const ClassicalState& last = series.snapshots.back();
            res.n_snapshots = static_cast<long>(series.snapshots.size());
            res.final_tau = last.tau;
            res.final_z = last.z;
            res.final_sz = last.sz;

            manifest = manifest_skeleton(cfg, warnings);
            manifest["run"] = {{"tau_end", cfg.tau_end},
                               {"pinned", cfg.pinned},
                               {"n_snapshots", res.n_snapshots},
                               {"ode", ode_json(series.stats)}};
            manifest["health"] = {{"max_spin_length_drift", series.max_spin_drift}};
            json diag{{"final_energy", last.energy()},
                      {"resonant_envelope_at_end", resonant_envelope(cp, cfg.tau_end)},
                      {"max_abs_z", max_abs_z}};
            diag["max_nonlinearity_ratio"] =
                cfg.rabi > 0 ? json(nonlinearity_ratio(cp, max_abs_z)) : json(nullptr);
            diag["stationary_amplitude"] =
                cfg.physical ? json(stationary_amplitude(cp, cfg.physical->quality_factor))
                             : json(nullptr);
            manifest["classical"] = diag;
        } else {
            SinkParams sp;
            sp.dir = dir;
            sp.grid = cfg.grid;
            sp.levels = cfg.basis_size;
            sp.density_every = density_every_for(cfg.density_stride, cfg.snapshot_stride);
            sp.write_stream = cfg.write_stream;
            sp.prominence_floor = cfg.prominence_floor;
            SnapshotSink sink(sp);

            SpinorFockState state = cfg.initial_quantum_state();
            OdeStats stats;
            json extra = json::object();
            if (cfg.mode == RunConfig::Mode::quantum) {
                evolve(
                    state, cfg.drive, cfg.quantum_params(), cfg.tau_end, cfg.evolve_controls(),
                    [&](const SpinorFockState& s, const SnapshotInfo&) { sink.consume(s); },
                    &stats);
                res.final_tau = state.tau;
            } else {
                const JumpRunResult jr = run_with_jumps(
                    state, cfg.drive, cfg.quantum_params(), cfg.tau_end, cfg.collapse_schedule(),
                    cfg.evolve_controls(), cfg.collapse_controls(),
                    [&](const SpinorFockState& s, const SnapshotInfo&) { sink.consume(s); });
                stats = jr.stats;
                res.n_jumps = static_cast<long>(jr.jumps.size());
                res.final_tau = jr.final_state.tau;

                json jlist = json::array();
                for (const auto& r : jr.jumps)
                    jlist.push_back({{"tau", r.tau},
                                     {"deadline", r.deadline},
                                     {"chosen_peak", r.chosen_peak},
                                     {"chose_major", r.chose_major},
                                     {"peak_areas", r.peak_areas},
                                     {"pre_p11", r.pre_p11},
                                     {"pre_p22", r.pre_p22},
                                     {"post_p11", r.post_p11},
                                     {"post_p22", r.post_p22},
                                     {"captured_weight", r.captured_weight},
                                     {"rng_counter", r.rng_counter}});
                const json jumps_doc{{"seed", cfg.seed},
                                     {"rng_stream", 0},
                                     {"decoherence_time", cfg.decoherence_time},
                                     {"explicit_lifetimes", cfg.lifetimes},
                                     {"deferred_checks", jr.deferred_checks},
                                     {"final_state_checksum", fmt_hex(state_checksum(jr.final_state))},
                                     {"jumps", jlist}};
                write_text_file(dir + "/jumps.json", jumps_doc.dump(2) + "\n");
                extra["jumps"] = {{"count", res.n_jumps},
                                 {"deferred_checks", jr.deferred_checks},
                                 {"final_state_checksum",
                                  fmt_hex(state_checksum(jr.final_state))}};
            }
            sink.finish();
            const SplitSeries splits = splitting_series(sink.reports(), cfg.persistence);
            write_splits_csv(dir, splits);
            write_quantum_plot_scripts(dir);

            if (sink.max_boundary() > 1e-12)
                warnings.push_back("density reaches the grid edge (max boundary value " +
                                   fmt_g(sink.max_boundary()) +
                                   "); widen [grid] z_min/z_max");

            res.n_snapshots = sink.count();
            res.final_z = sink.final_z();
            res.final_sz = sink.final_sz();

            manifest = manifest_skeleton(cfg, warnings);
            manifest["run"] = {{"tau_end", cfg.tau_end},
                               {"basis_size", cfg.basis_size},
                               {"frame", cfg.frame == Frame::rotated ? "rotated" : "raw"},
                               {"n_snapshots", res.n_snapshots},
                               {"snapshot_stride", cfg.snapshot_stride},
                               {"write_stream", cfg.write_stream},
                               {"ode", ode_json(stats)}};
            manifest["health"] = {{"max_norm_drift", sink.max_drift()},
                                  {"max_tail_mass", sink.max_tail()},
                                  {"max_boundary_density", sink.max_boundary()}};
            manifest["cat"] = cat_json(splits);
            for (auto& [k, v] : extra.items()) manifest[k] = v;
        }

        for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
        const auto t1 = std::chrono::steady_clock::now();
        res.wall_seconds = std::chrono::duration<double>(t1 - t0).count();
        manifest["run"]["wall_seconds"] = res.wall_seconds;
        write_text_file(dir + "/manifest.json", manifest.dump(2) + "\n");
        return res;
    } catch (const std::exception& e) {
        write_error_json(dir, e);
        throw;
    }
}

SweepResult execute_sweep(const std::string& config_text, const std::string& source_name,
                          const std::string& root_override) {
    const RunConfig base = parse_config_text(config_text, source_name, false);
    if (base.sweep.empty())
        throw ConfigError(source_name + ": the sweep verb requires a [sweep] section");

    std::size_t total = 1;
    for (const auto& ax : base.sweep) {
        if (ax.values.empty()) throw ConfigError("sweep axis '" + ax.key + "' has no values");
        if (total > 100000 / ax.values.size())
            throw ConfigError("sweep has more than 100000 combinations");
        total *= ax.values.size();
    }

    SweepResult out;
    const std::string base_dir =
        fs::absolute(resolve_out_dir(base.out_dir, root_override)).string();
    out.out_dir = base_dir;
    std::error_code ec;
    fs::create_directories(base_dir, ec);
    if (ec)
        throw IoError("cannot create sweep directory '" + base_dir + "': " + ec.message());
    write_text_file(base_dir + "/sweep.ini", config_text);

    std::ostringstream summary;
    summary << "run";
    for (const auto& ax : base.sweep) summary << "," << ax.key;
    summary << ",status,exit_code,final_tau,final_z,final_sz,n_jumps,out_dir\n";

    std::vector<std::size_t> idx(base.sweep.size(), 0);
    char child[32];
    for (std::size_t combo = 0; combo < total; combo++) {
        std::snprintf(child, sizeof child, "run-%03zu", combo);
        RunConfig cfg = parse_config_text(config_text, source_name, false);
        cfg.sweep.clear();
        summary << combo;
        for (std::size_t k = 0; k < base.sweep.size(); k++) {
            const std::string& value = base.sweep[k].values[idx[k]];
            apply_override(cfg, base.sweep[k].key, value);
            summary << "," << value;
        }
        cfg.out_dir = base_dir + "/" + child;
        try {
            finalize_config(cfg);
            const RunResult r = execute_run(cfg);
            summary << ",ok,0," << fmt_g(r.final_tau) << "," << fmt_g(r.final_z) << ","
                    << fmt_g(r.final_sz) << "," << r.n_jumps << "," << child << "\n";
        } catch (const std::exception& e) {
            const int code = exit_code_for(e);
            std::cerr << source_name << ": " << child << " failed: " << e.what() << "\n";
            summary << "," << error_kind_for(code) << "_error," << code << ",nan,nan,nan,0,"
                    << child << "\n";
            out.n_failed++;
            if (out.first_error_exit == 0) out.first_error_exit = code;
        }
        out.n_runs++;
        for (std::size_t k = base.sweep.size(); k-- > 0;) {
            if (++idx[k] < base.sweep[k].values.size()) break;
            idx[k] = 0;
        }
    }
    write_text_file(base_dir + "/sweep_summary.csv", summary.str());
    return out;
}

ReplayResult execute_replay(const std::string& stream_path, const ReplayOptions& opt,
                            const std::string& root_override) {
    SnapshotStreamReader reader(stream_path);
    ReplayResult res;

    std::optional<SnapshotSink> sink;
    std::string dir;
    std::vector<SpinorFockState> head;  // buffered until the cadence is known
    const auto consume = [&](const SpinorFockState& s) {
        if (res.n_records == 0) {
            res.basis_size = s.size();
            res.tau_first = s.tau;
        } else if (s.size() != res.basis_size) {
            throw IoError("'" + stream_path + "': basis size changes mid-stream");
        }
        res.tau_last = s.tau;
        res.final_checksum = state_checksum(s);
        res.n_records++;
        if (!opt.analyze) return;
        if (!sink) {
            if (head.size() < 2) {
                head.push_back(s);
                if (head.size() < 2) return;
            }
            const double spacing = head[1].tau - head[0].tau;
            SinkParams sp;
            sp.dir = dir;
            sp.grid = opt.grid;
            sp.levels = res.basis_size;
            sp.density_every =
                spacing > 0 ? density_every_for(opt.density_stride, spacing) : 1;
            sp.write_stream = false;
            sp.prominence_floor = opt.prominence_floor;
            sink.emplace(sp);
            for (const auto& h : head) sink->consume(h);
            head.clear();
            return;
        }
        sink->consume(s);
    };

    if (opt.analyze) {
        dir = resolve_out_dir(opt.out_dir, root_override);
        std::error_code ec;
        fs::create_directories(dir, ec);
        if (ec)
            throw IoError("cannot create output directory '" + dir + "': " + ec.message());
        res.out_dir = dir;
    }

    try {
        while (auto s = reader.next()) consume(*s);
        if (res.n_records == 0) throw IoError("'" + stream_path + "' holds no snapshots");

        if (opt.analyze) {
            if (!sink) {  // single-record stream: flush the buffer now
                SinkParams sp;
                sp.dir = dir;
                sp.grid = opt.grid;
                sp.levels = res.basis_size;
                sp.density_every = 1;
                sp.write_stream = false;
                sp.prominence_floor = opt.prominence_floor;
                sink.emplace(sp);
                for (const auto& h : head) sink->consume(h);
                head.clear();
            }
            sink->finish();
            const SplitSeries splits = splitting_series(sink->reports(), opt.persistence);
            write_splits_csv(dir, splits);
            write_quantum_plot_scripts(dir);
            json manifest{{"tool", {{"name", "spincant"}, {"version", kVersion}}},
                          {"mode", "replay"},
                          {"replay",
                           {{"source", stream_path},
                            {"n_records", res.n_records},
                            {"basis_size", res.basis_size},
                            {"tau_first", res.tau_first},
                            {"tau_last", res.tau_last},
                            {"final_state_checksum", fmt_hex(res.final_checksum)}}},
                          {"health",
                           {{"max_norm_drift", sink->max_drift()},
                            {"max_tail_mass", sink->max_tail()},
                            {"max_boundary_density", sink->max_boundary()}}},
                          {"cat", cat_json(splits)}};
            write_text_file(dir + "/manifest.json", manifest.dump(2) + "\n");
        }
        return res;
    } catch (const std::exception& e) {
        if (opt.analyze && !dir.empty()) write_error_json(dir, e);
        throw;
    }
}

}  // namespace spincant
