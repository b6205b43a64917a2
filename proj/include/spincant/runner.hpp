#pragma once

#include <cstdint>
#include <string>

#include "spincant/config.hpp"

namespace spincant {

// Where artifacts land: absolute out_dir is used as given; a relative one is
// placed under root_override, else under $SPINCANT_OUT_ROOT, else the cwd.
std::string resolve_out_dir(const std::string& out_dir, const std::string& root_override = "");

struct RunResult {
    std::string out_dir;  // resolved directory that was written
    long n_snapshots = 0;
    long n_jumps = 0;
    double wall_seconds = 0;
    double final_tau = 0;
    double final_z = 0;
    double final_sz = 0;
};

// Execute one configured run and write the artifact set:
//   config.ini, manifest.json, and per mode
//   quantum/jumps: observables.csv, cat_series.csv, splits.csv, density.csv,
//                  plot scripts, optional snapshots.bin, jumps.json (jumps)
//   classical:     classical.csv, plot script
// On failure an error.json is left in the directory and the error rethrown.
RunResult execute_run(const RunConfig& cfg, const std::string& root_override = "");

struct SweepResult {
    std::string out_dir;
    int n_runs = 0;
    int n_failed = 0;
    int first_error_exit = 0;  // exit code class of the first failed run
};

// Cartesian sweep over the [sweep] axes of the config text. Each combination
// re-parses the text, applies its overrides, and runs into run-NNN/ under the
// sweep directory; failures are recorded in sweep_summary.csv and do not stop
// the sweep.
SweepResult execute_sweep(const std::string& config_text, const std::string& source_name,
                          const std::string& root_override = "");

struct ReplayOptions {
    bool analyze = false;  // write the analysis artifact set, not just a scan
    std::string out_dir = "replay";
    SpatialGrid grid{};
    double prominence_floor = 1e-4;
    int persistence = 3;
    double density_stride = 0.8;
};

struct ReplayResult {
    long n_records = 0;
    int basis_size = 0;
    double tau_first = 0, tau_last = 0;
    std::uint64_t final_checksum = 0;
    std::string out_dir;  // empty unless analyze
};

ReplayResult execute_replay(const std::string& stream_path, const ReplayOptions& opt,
                            const std::string& root_override = "");

}  // namespace spincant
