#include "spincant/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>

#include "spincant/errors.hpp"

namespace spincant {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) b++;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) e--;
    return s.substr(b, e - b);
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return s;
}

double parse_double(const std::string& key, const std::string& v) {
    const std::string t = trim(v);
    if (t.empty()) throw ConfigError(key + ": expected a number, got nothing");
    char* end = nullptr;
    const double x = std::strtod(t.c_str(), &end);
    if (end != t.c_str() + t.size())
        throw ConfigError(key + ": not a number: '" + t + "'");
    return x;
}

long parse_long(const std::string& key, const std::string& v) {
    const std::string t = trim(v);
    char* end = nullptr;
    const long x = std::strtol(t.c_str(), &end, 10);
    if (t.empty() || end != t.c_str() + t.size())
        throw ConfigError(key + ": not an integer: '" + t + "'");
    return x;
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
    const std::string t = trim(v);
    char* end = nullptr;
    const unsigned long long x = std::strtoull(t.c_str(), &end, 10);
    if (t.empty() || end != t.c_str() + t.size())
        throw ConfigError(key + ": not a non-negative integer: '" + t + "'");
    return x;
}

bool parse_bool(const std::string& key, const std::string& v) {
    const std::string t = lower(trim(v));
    if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
    if (t == "false" || t == "0" || t == "no" || t == "off") return false;
    throw ConfigError(key + ": not a boolean: '" + v + "'");
}

std::vector<double> parse_double_list(const std::string& key, const std::string& v) {
    std::vector<double> out;
    std::string spaced = v;
    std::replace(spaced.begin(), spaced.end(), ',', ' ');
    std::istringstream is(spaced);
    std::string tok;
    while (is >> tok) out.push_back(parse_double(key, tok));
    return out;
}

PhysicalParams& physical_of(RunConfig& c) {
    if (!c.physical) c.physical.emplace();
    return *c.physical;
}

using Setter = std::function<void(RunConfig&, const std::string&)>;

const std::map<std::string, Setter>& setter_table() {
    static const std::map<std::string, Setter> table = {
        {"run.mode",
         [](RunConfig& c, const std::string& v) {
             const std::string t = lower(trim(v));
             if (t == "quantum") c.mode = RunConfig::Mode::quantum;
             else if (t == "classical") c.mode = RunConfig::Mode::classical;
             else if (t == "jumps") c.mode = RunConfig::Mode::jumps;
             else throw ConfigError("run.mode: expected quantum, classical, or jumps");
         }},
        {"run.label", [](RunConfig& c, const std::string& v) { c.label = trim(v); }},
        {"run.tau_end",
         [](RunConfig& c, const std::string& v) { c.tau_end = parse_double("run.tau_end", v); }},
        {"run.snapshot_stride",
         [](RunConfig& c, const std::string& v) {
             c.snapshot_stride = parse_double("run.snapshot_stride", v);
         }},
        {"run.density_stride",
         [](RunConfig& c, const std::string& v) {
             c.density_stride = parse_double("run.density_stride", v);
         }},
        {"run.out_dir", [](RunConfig& c, const std::string& v) { c.out_dir = trim(v); }},
        {"run.write_stream",
         [](RunConfig& c, const std::string& v) {
             c.write_stream = parse_bool("run.write_stream", v);
         }},
        {"run.pinned",
         [](RunConfig& c, const std::string& v) { c.pinned = parse_bool("run.pinned", v); }},
        {"run.seed",
         [](RunConfig& c, const std::string& v) { c.seed = parse_u64("run.seed", v); }},

        {"model.rabi",
         [](RunConfig& c, const std::string& v) { c.rabi = parse_double("model.rabi", v); }},
        {"model.coupling",
         [](RunConfig& c, const std::string& v) {
             c.coupling = parse_double("model.coupling", v);
         }},
        {"model.basis_size",
         [](RunConfig& c, const std::string& v) {
             c.basis_size = static_cast<int>(parse_long("model.basis_size", v));
         }},
        {"model.spin_count",
         [](RunConfig& c, const std::string& v) {
             c.spin_count = parse_double("model.spin_count", v);
         }},
        {"model.eq12_verbatim",
         [](RunConfig& c, const std::string& v) {
             c.eq12_verbatim = parse_bool("model.eq12_verbatim", v);
         }},

        {"physical.frequency_hz",
         [](RunConfig& c, const std::string& v) {
             physical_of(c).cantilever_frequency_hz = parse_double("physical.frequency_hz", v);
         }},
        {"physical.force_constant",
         [](RunConfig& c, const std::string& v) {
             physical_of(c).force_constant_n_per_m = parse_double("physical.force_constant", v);
         }},
        {"physical.rf_field",
         [](RunConfig& c, const std::string& v) {
             physical_of(c).rf_field_t = parse_double("physical.rf_field", v);
         }},
        {"physical.field_gradient",
         [](RunConfig& c, const std::string& v) {
             physical_of(c).field_gradient_t_per_m = parse_double("physical.field_gradient", v);
         }},
        {"physical.gyromagnetic_ratio",
         [](RunConfig& c, const std::string& v) {
             physical_of(c).gyromagnetic_ratio_hz_per_t =
                 parse_double("physical.gyromagnetic_ratio", v);
         }},
        {"physical.quality_factor",
         [](RunConfig& c, const std::string& v) {
             physical_of(c).quality_factor = parse_double("physical.quality_factor", v);
         }},

        {"drive.preset",
         [](RunConfig& c, const std::string& v) {
             const std::string t = lower(trim(v));
             if (t == "a") c.drive = drive_profile_a();
             else if (t == "b") c.drive = drive_profile_b();
             else throw ConfigError("drive.preset: expected a or b");
             c.drive_preset = t;
         }},
        {"drive.ramp_offset",
         [](RunConfig& c, const std::string& v) {
             c.drive.ramp_offset = parse_double("drive.ramp_offset", v);
             c.drive_preset.clear();
         }},
        {"drive.ramp_slope",
         [](RunConfig& c, const std::string& v) {
             c.drive.ramp_slope = parse_double("drive.ramp_slope", v);
             c.drive_preset.clear();
         }},
        {"drive.ramp_end",
         [](RunConfig& c, const std::string& v) {
             c.drive.ramp_end = parse_double("drive.ramp_end", v);
             c.drive_preset.clear();
         }},
        {"drive.modulation_amplitude",
         [](RunConfig& c, const std::string& v) {
             c.drive.modulation_amplitude = parse_double("drive.modulation_amplitude", v);
             c.drive_preset.clear();
         }},
        {"drive.modulation_phase_origin",
         [](RunConfig& c, const std::string& v) {
             c.drive.modulation_phase_origin =
                 parse_double("drive.modulation_phase_origin", v);
             c.drive_preset.clear();
         }},

        {"initial.mean_z",
         [](RunConfig& c, const std::string& v) { c.init_z = parse_double("initial.mean_z", v); }},
        {"initial.mean_p",
         [](RunConfig& c, const std::string& v) { c.init_p = parse_double("initial.mean_p", v); }},
        {"initial.theta",
         [](RunConfig& c, const std::string& v) {
             c.init_theta = parse_double("initial.theta", v);
         }},
        {"initial.phi",
         [](RunConfig& c, const std::string& v) { c.init_phi = parse_double("initial.phi", v); }},
        {"initial.spin",
         [](RunConfig& c, const std::string& v) {
             const std::string t = lower(trim(v));
             if (t == "up") c.init_theta = 0.0;
             else if (t == "down") c.init_theta = std::numbers::pi;
             else throw ConfigError("initial.spin: expected up or down");
             c.init_phi = 0.0;
         }},

        {"tolerances.rtol",
         [](RunConfig& c, const std::string& v) { c.rtol = parse_double("tolerances.rtol", v); }},
        {"tolerances.atol",
         [](RunConfig& c, const std::string& v) { c.atol = parse_double("tolerances.atol", v); }},
        {"tolerances.frame",
         [](RunConfig& c, const std::string& v) {
             const std::string t = lower(trim(v));
             if (t == "rotated") c.frame = Frame::rotated;
             else if (t == "raw") c.frame = Frame::raw;
             else throw ConfigError("tolerances.frame: expected rotated or raw");
         }},
        {"tolerances.norm_tolerance",
         [](RunConfig& c, const std::string& v) {
             c.norm_tolerance = parse_double("tolerances.norm_tolerance", v);
         }},
        {"tolerances.tail_threshold",
         [](RunConfig& c, const std::string& v) {
             c.tail_threshold = parse_double("tolerances.tail_threshold", v);
         }},
        {"tolerances.spin_length_tolerance",
         [](RunConfig& c, const std::string& v) {
             c.spin_length_tolerance = parse_double("tolerances.spin_length_tolerance", v);
         }},

        {"grid.z_min",
         [](RunConfig& c, const std::string& v) { c.grid.z_min = parse_double("grid.z_min", v); }},
        {"grid.z_max",
         [](RunConfig& c, const std::string& v) { c.grid.z_max = parse_double("grid.z_max", v); }},
        {"grid.points",
         [](RunConfig& c, const std::string& v) {
             c.grid.points = static_cast<int>(parse_long("grid.points", v));
         }},
        {"grid.prominence_floor",
         [](RunConfig& c, const std::string& v) {
             c.prominence_floor = parse_double("grid.prominence_floor", v);
         }},
        {"grid.persistence",
         [](RunConfig& c, const std::string& v) {
             c.persistence = static_cast<int>(parse_long("grid.persistence", v));
         }},

        {"collapse.decoherence_time",
         [](RunConfig& c, const std::string& v) {
             c.decoherence_time = parse_double("collapse.decoherence_time", v);
         }},
        {"collapse.lifetimes",
         [](RunConfig& c, const std::string& v) {
             c.lifetimes = parse_double_list("collapse.lifetimes", v);
         }},
        {"collapse.window",
         [](RunConfig& c, const std::string& v) {
             const std::string t = lower(trim(v));
             if (t == "smooth") c.window = WindowKind::smooth;
             else if (t == "sharp") c.window = WindowKind::sharp;
             else throw ConfigError("collapse.window: expected smooth or sharp");
         }},
        {"collapse.fine_points",
         [](RunConfig& c, const std::string& v) {
             c.fine_points = static_cast<int>(parse_long("collapse.fine_points", v));
         }},
        {"collapse.taper_cells",
         [](RunConfig& c, const std::string& v) {
             c.taper_cells = parse_double("collapse.taper_cells", v);
         }},
    };
    return table;
}

std::vector<std::string> expand_sweep_values(const std::string& key, const std::string& v) {
    std::vector<std::string> out;
    std::string spaced = v;
    std::replace(spaced.begin(), spaced.end(), ',', ' ');
    std::istringstream is(spaced);
    std::string tok;
    while (is >> tok) {
        const std::size_t dots = tok.find("..");
        if (dots == std::string::npos) {
            out.push_back(tok);
            continue;
        }
        const long a = parse_long(key, tok.substr(0, dots));
        const long b = parse_long(key, tok.substr(dots + 2));
        if (b < a) throw ConfigError(key + ": descending range '" + tok + "'");
        if (b - a >= 100000) throw ConfigError(key + ": range '" + tok + "' is too large");
        for (long i = a; i <= b; i++) out.push_back(std::to_string(i));
    }
    if (out.empty()) throw ConfigError(key + ": no sweep values given");
    return out;
}

std::string fmt_g(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

void apply_override(RunConfig& cfg, const std::string& key, const std::string& value) {
    const auto& table = setter_table();
    const auto it = table.find(trim(key));
    if (it == table.end()) throw ConfigError("unknown config key '" + key + "'");
    it->second(cfg, value);
}

RunConfig parse_config_text(const std::string& text, const std::string& source_name,
                            bool finalize) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    auto fail = [&](const std::string& msg) -> void {
        throw ConfigError(source_name + ":" + std::to_string(lineno) + ": " + msg);
    };
    while (std::getline(in, line)) {
        lineno++;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;
        if (t.front() == '[') {
            if (t.back() != ']') fail("unterminated section header");
            section = lower(trim(t.substr(1, t.size() - 2)));
            if (section.empty()) fail("empty section name");
            continue;
        }
        const std::size_t eq = t.find('=');
        if (eq == std::string::npos) fail("expected key = value");
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        if (key.empty()) fail("empty key");
        if (section.empty()) fail("key '" + key + "' appears before any [section]");
        if (section == "sweep") {
            for (const auto& ax : cfg.sweep)
                if (ax.key == key) fail("duplicate sweep axis '" + key + "'");
            if (setter_table().find(key) == setter_table().end())
                fail("unknown config key '" + key + "' used as a sweep axis");
            try {
                cfg.sweep.push_back({key, expand_sweep_values(key, value)});
            } catch (const ConfigError& e) {
                fail(e.what());
            }
            continue;
        }
        try {
            apply_override(cfg, section + "." + key, value);
        } catch (const ConfigError& e) {
            fail(e.what());
        }
    }
    if (finalize) finalize_config(cfg);
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str(), path);
}

void finalize_config(RunConfig& cfg) {
    if (cfg.physical) {
        if (!std::isnan(cfg.rabi) || !std::isnan(cfg.coupling))
            throw ConfigError(
                "model.rabi/model.coupling conflict with the [physical] section; "
                "give one or the other");
        cfg.physical->effective_spin_count = cfg.spin_count;
        const auto [quanta, dimless] = reduce(*cfg.physical);
        (void)quanta;
        cfg.rabi = dimless.rabi;
        cfg.coupling = dimless.coupling;
    }
    cfg.validate();
}

void RunConfig::validate() const {
    if (std::isnan(tau_end)) throw ConfigError("run.tau_end is required");
    if (!(tau_end > 0)) throw ConfigError("run.tau_end must be positive");
    if (!(snapshot_stride > 0)) throw ConfigError("run.snapshot_stride must be positive");
    if (!(density_stride > 0)) throw ConfigError("run.density_stride must be positive");
    if (out_dir.empty()) throw ConfigError("run.out_dir must not be empty");
    if (std::isnan(rabi)) throw ConfigError("model.rabi is required");
    if (rabi < 0) throw ConfigError("model.rabi must be non-negative");
    if (std::isnan(coupling)) throw ConfigError("model.coupling is required");
    if (coupling < 0) throw ConfigError("model.coupling must be non-negative");
    if (spin_count < 1) throw ConfigError("model.spin_count must be at least 1");
    const bool needs_basis = mode == Mode::quantum || mode == Mode::jumps;
    if (needs_basis && basis_size < 2)
        throw ConfigError("model.basis_size must be at least 2 for quantum runs");
    if (pinned && mode != Mode::classical)
        throw ConfigError("run.pinned applies only to classical runs");
    if (write_stream && mode == Mode::classical)
        throw ConfigError("run.write_stream applies only to quantum state runs");
    check_continuity(drive);
    if (!(rtol > 0)) throw ConfigError("tolerances.rtol must be positive");
    if (!(atol > 0)) throw ConfigError("tolerances.atol must be positive");
    if (!(norm_tolerance > 0)) throw ConfigError("tolerances.norm_tolerance must be positive");
    if (!(tail_threshold > 0)) throw ConfigError("tolerances.tail_threshold must be positive");
    if (!(spin_length_tolerance > 0))
        throw ConfigError("tolerances.spin_length_tolerance must be positive");
    grid.validate();
    if (!(prominence_floor > 0) || prominence_floor >= 1)
        throw ConfigError("grid.prominence_floor must be in (0, 1)");
    if (persistence < 1) throw ConfigError("grid.persistence must be at least 1");
    if (fine_points < grid.points)
        throw ConfigError("collapse.fine_points must be at least grid.points");
    if (!(taper_cells > 0)) throw ConfigError("collapse.taper_cells must be positive");
    for (double lt : lifetimes)
        if (lt < 0) throw ConfigError("collapse.lifetimes must be non-negative");
    if (mode == Mode::jumps && decoherence_time <= 0 && lifetimes.empty())
        throw ConfigError(
            "jumps mode needs collapse.decoherence_time > 0 or explicit collapse.lifetimes");
}

QuantumParams RunConfig::quantum_params() const { return {rabi, coupling, eq12_verbatim}; }

EvolveControls RunConfig::evolve_controls() const {
    EvolveControls c;
    c.rtol = rtol;
    c.atol = atol;
    c.snapshot_stride = snapshot_stride;
    c.frame = frame;
    c.norm_tolerance = norm_tolerance;
    c.tail_threshold = tail_threshold;
    return c;
}

ClassicalParams RunConfig::classical_params() const {
    return {rabi, coupling, spin_count, drive};
}

ClassicalControls RunConfig::classical_controls() const {
    ClassicalControls c;
    c.ode.rtol = rtol;
    c.ode.atol = atol;
    c.snapshot_stride = snapshot_stride;
    c.spin_length_tolerance = spin_length_tolerance;
    return c;
}

CollapseControls RunConfig::collapse_controls() const {
    CollapseControls c;
    c.analysis_grid = grid;
    c.prominence_floor = prominence_floor;
    c.window = window;
    c.fine_points = fine_points;
    c.taper_cells = taper_cells;
    return c;
}

CollapseSchedule RunConfig::collapse_schedule() const {
    CollapseSchedule s;
    s.decoherence_time = decoherence_time;
    s.lifetimes = lifetimes;
    s.rng_seed = seed;
    s.rng_stream = 0;
    return s;
}

SpinorFockState RunConfig::initial_quantum_state() const {
    return coherent_state(CoherentInit::from_means(init_z, init_p), basis_size,
                          SpinorDir::from_angles(init_theta, init_phi));
}

ClassicalState RunConfig::initial_classical_state() const {
    ClassicalState s;
    s.z = init_z;
    s.p = init_p;
    s.sx = 0.5 * std::sin(init_theta) * std::cos(init_phi);
    s.sy = 0.5 * std::sin(init_theta) * std::sin(init_phi);
    s.sz = 0.5 * std::cos(init_theta);
    s.tau = 0.0;
    return s;
}

std::vector<std::string> preset_names() { return {"fig2", "fig3", "fig4", "jumps_demo"}; }

RunConfig preset_config(const std::string& name) {
    RunConfig c;
    if (name == "fig2") {
        // Many-spin classical limit: resonant energy gain through adiabatic
        // inversion cycles at laboratory-scale parameters.
        c.mode = RunConfig::Mode::classical;
        c.label = "fig2";
        c.out_dir = "fig2";
        c.tau_end = 200.0;
        c.rabi = 37.0;
        c.coupling = 2.8e-7;
        c.spin_count = 2.9e9;
        c.drive = drive_profile_a();
        c.drive_preset = "a";
        c.init_z = 6.7e4;
        c.init_p = 6.7e4;
        c.init_theta = 0.0;
    } else if (name == "fig3") {
        // Single spin, moderate coupling: cat formation from a displaced
        // coherent state.
        c.mode = RunConfig::Mode::quantum;
        c.label = "fig3";
        c.out_dir = "fig3";
        c.tau_end = 140.0;
        c.rabi = 40.0;
        c.coupling = 0.03;
        c.basis_size = 2000;
        c.drive = drive_profile_a();
        c.drive_preset = "a";
        c.init_z = -20.0;
        c.init_p = 0.0;
        c.rtol = 5e-12;
        c.atol = 5e-14;
    } else if (name == "fig4") {
        // Ten-fold stronger coupling and drive: wide branch separation.
        c.mode = RunConfig::Mode::quantum;
        c.label = "fig4";
        c.out_dir = "fig4";
        c.tau_end = 100.0;
        c.rabi = 400.0;
        c.coupling = 0.3;
        c.basis_size = 2000;
        c.drive = drive_profile_b();
        c.drive_preset = "b";
        c.init_z = -20.0;
        c.init_p = 0.0;
        c.rtol = 2e-12;
        c.atol = 2e-14;
        c.norm_tolerance = 1e-7;
    } else if (name == "jumps_demo") {
        // Monte-Carlo branch reduction, cheap enough to run many
        // trajectories.  The Rabi frequency is lowered until the
        // non-adiabatic leak builds a percent-level minor branch, so a
        // 100-member ensemble actually exercises the minor-peak choice; the
        // prominence floor admits only macroscopically distinct branches,
        // and the run ends before the pumped post-jump minor branch outgrows
        // the basis.
        c.mode = RunConfig::Mode::jumps;
        c.label = "jumps_demo";
        c.out_dir = "jumps_demo";
        c.tau_end = 120.0;
        c.rabi = 15.0;
        c.coupling = 0.03;
        c.basis_size = 1280;
        c.drive = drive_profile_a();
        c.drive_preset = "a";
        c.init_z = -20.0;
        c.init_p = 0.0;
        c.rtol = 1e-9;
        c.atol = 1e-11;
        c.norm_tolerance = 1e-5;
        c.tail_threshold = 1e-8;
        c.seed = 20260822;
        c.decoherence_time = 2.0 * std::numbers::pi;
        c.prominence_floor = 0.02;
        c.taper_cells = 4.0;
    } else {
        throw ConfigError("unknown preset '" + name + "' (try fig2, fig3, fig4, jumps_demo)");
    }
    c.validate();
    return c;
}

std::string config_to_ini(const RunConfig& c) {
    std::ostringstream o;
    o << "[run]\n";
    o << "mode = "
      << (c.mode == RunConfig::Mode::quantum
              ? "quantum"
              : c.mode == RunConfig::Mode::classical ? "classical" : "jumps")
      << "\n";
    if (!c.label.empty()) o << "label = " << c.label << "\n";
    o << "tau_end = " << fmt_g(c.tau_end) << "\n";
    o << "snapshot_stride = " << fmt_g(c.snapshot_stride) << "\n";
    o << "density_stride = " << fmt_g(c.density_stride) << "\n";
    o << "out_dir = " << c.out_dir << "\n";
    o << "write_stream = " << (c.write_stream ? "true" : "false") << "\n";
    if (c.mode == RunConfig::Mode::classical)
        o << "pinned = " << (c.pinned ? "true" : "false") << "\n";
    o << "seed = " << c.seed << "\n";

    o << "\n[model]\n";
    if (c.physical) {
        o << "basis_size = " << c.basis_size << "\n";
        o << "spin_count = " << fmt_g(c.spin_count) << "\n";
        o << "eq12_verbatim = " << (c.eq12_verbatim ? "true" : "false") << "\n";
        o << "\n[physical]\n";
        o << "frequency_hz = " << fmt_g(c.physical->cantilever_frequency_hz) << "\n";
        o << "force_constant = " << fmt_g(c.physical->force_constant_n_per_m) << "\n";
        o << "rf_field = " << fmt_g(c.physical->rf_field_t) << "\n";
        o << "field_gradient = " << fmt_g(c.physical->field_gradient_t_per_m) << "\n";
        o << "gyromagnetic_ratio = " << fmt_g(c.physical->gyromagnetic_ratio_hz_per_t) << "\n";
        o << "quality_factor = " << fmt_g(c.physical->quality_factor) << "\n";
    } else {
        o << "rabi = " << fmt_g(c.rabi) << "\n";
        o << "coupling = " << fmt_g(c.coupling) << "\n";
        o << "basis_size = " << c.basis_size << "\n";
        o << "spin_count = " << fmt_g(c.spin_count) << "\n";
        o << "eq12_verbatim = " << (c.eq12_verbatim ? "true" : "false") << "\n";
    }

    o << "\n[drive]\n";
    if (!c.drive_preset.empty()) {
        o << "preset = " << c.drive_preset << "\n";
    } else {
        o << "ramp_offset = " << fmt_g(c.drive.ramp_offset) << "\n";
        o << "ramp_slope = " << fmt_g(c.drive.ramp_slope) << "\n";
        o << "ramp_end = " << fmt_g(c.drive.ramp_end) << "\n";
        o << "modulation_amplitude = " << fmt_g(c.drive.modulation_amplitude) << "\n";
        o << "modulation_phase_origin = " << fmt_g(c.drive.modulation_phase_origin) << "\n";
    }

    o << "\n[initial]\n";
    o << "mean_z = " << fmt_g(c.init_z) << "\n";
    o << "mean_p = " << fmt_g(c.init_p) << "\n";
    o << "theta = " << fmt_g(c.init_theta) << "\n";
    o << "phi = " << fmt_g(c.init_phi) << "\n";

    o << "\n[tolerances]\n";
    o << "rtol = " << fmt_g(c.rtol) << "\n";
    o << "atol = " << fmt_g(c.atol) << "\n";
    o << "frame = " << (c.frame == Frame::rotated ? "rotated" : "raw") << "\n";
    o << "norm_tolerance = " << fmt_g(c.norm_tolerance) << "\n";
    o << "tail_threshold = " << fmt_g(c.tail_threshold) << "\n";
    o << "spin_length_tolerance = " << fmt_g(c.spin_length_tolerance) << "\n";

    o << "\n[grid]\n";
    o << "z_min = " << fmt_g(c.grid.z_min) << "\n";
    o << "z_max = " << fmt_g(c.grid.z_max) << "\n";
    o << "points = " << c.grid.points << "\n";
    o << "prominence_floor = " << fmt_g(c.prominence_floor) << "\n";
    o << "persistence = " << c.persistence << "\n";

    o << "\n[collapse]\n";
    o << "decoherence_time = " << fmt_g(c.decoherence_time) << "\n";
    if (!c.lifetimes.empty()) {
        o << "lifetimes =";
        for (double lt : c.lifetimes) o << " " << fmt_g(lt);
        o << "\n";
    }
    o << "window = " << (c.window == WindowKind::smooth ? "smooth" : "sharp") << "\n";
    o << "fine_points = " << c.fine_points << "\n";
    o << "taper_cells = " << fmt_g(c.taper_cells) << "\n";

    if (!c.sweep.empty()) {
        o << "\n[sweep]\n";
        for (const auto& ax : c.sweep) {
            o << ax.key << " =";
            for (const auto& v : ax.values) o << " " << v;
            o << "\n";
        }
    }
    return o.str();
}

}  // namespace spincant
