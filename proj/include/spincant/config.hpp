#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "spincant/classical.hpp"
#include "spincant/collapse.hpp"
#include "spincant/params.hpp"
#include "spincant/quantum.hpp"

namespace spincant {

// One sweep axis: a dotted config key ("model.rabi") and the literal values
// it takes. Axes combine as a cartesian product in declaration order.
struct SweepAxis {
    std::string key;
    std::vector<std::string> values;
};

struct RunConfig {
    enum class Mode { quantum, classical, jumps };

    // [run]
    Mode mode = Mode::quantum;
    std::string label;
    double tau_end = std::numeric_limits<double>::quiet_NaN();
    double snapshot_stride = 0.08;
    double density_stride = 0.8;
    std::string out_dir = "out";
    bool write_stream = false;
    bool pinned = false;  // classical mode: force the fully adiabatic spin
    std::uint64_t seed = 0;

    // [model] — rabi/coupling may instead come from [physical] via reduce()
    double rabi = std::numeric_limits<double>::quiet_NaN();
    double coupling = std::numeric_limits<double>::quiet_NaN();
    int basis_size = 0;
    double spin_count = 1.0;
    bool eq12_verbatim = false;
    std::optional<PhysicalParams> physical;

    // [drive]
    DriveProfile drive = drive_profile_a();
    std::string drive_preset = "a";  // empty when the profile is explicit

    // [initial]
    double init_z = 0.0;
    double init_p = 0.0;
    double init_theta = 0.0;  // spinor polar angle; 0 = up
    double init_phi = 0.0;

    // [tolerances]
    double rtol = 1e-10;
    double atol = 1e-12;
    Frame frame = Frame::rotated;
    double norm_tolerance = 1e-8;
    double tail_threshold = 1e-10;
    double spin_length_tolerance = 1e-8;

    // [grid]
    SpatialGrid grid{};
    double prominence_floor = 1e-4;
    int persistence = 3;

    // [collapse]
    double decoherence_time = 0.0;
    std::vector<double> lifetimes;
    WindowKind window = WindowKind::smooth;
    int fine_points = 8192;
    double taper_cells = 1.0;

    // [sweep]
    std::vector<SweepAxis> sweep;

    void validate() const;

    QuantumParams quantum_params() const;
    EvolveControls evolve_controls() const;
    ClassicalParams classical_params() const;
    ClassicalControls classical_controls() const;
    CollapseControls collapse_controls() const;
    CollapseSchedule collapse_schedule() const;
    SpinorFockState initial_quantum_state() const;
    ClassicalState initial_classical_state() const;
};

// Parse INI text. With finalize, resolves [physical] into rabi/coupling and
// validates; without, the caller may still apply_override() and must then
// call finalize_config() itself (the sweep driver does this per combination).
RunConfig parse_config_text(const std::string& text, const std::string& source_name,
                            bool finalize = true);
RunConfig load_config(const std::string& path);
void finalize_config(RunConfig& cfg);

// Set one field by its dotted key, e.g. apply_override(cfg, "model.rabi", "20").
// Accepts exactly the keys the INI parser accepts.
void apply_override(RunConfig& cfg, const std::string& key, const std::string& value);

std::vector<std::string> preset_names();
RunConfig preset_config(const std::string& name);

std::string config_to_ini(const RunConfig& cfg);

}  // namespace spincant
