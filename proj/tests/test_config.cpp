#include <cmath>
#include <string>

#include "doctest.h"
#include "spincant/config.hpp"
#include "spincant/drive.hpp"
#include "spincant/errors.hpp"

using namespace spincant;
using doctest::Approx;

namespace {

const char* kMinimalQuantum = R"(
# a small quantum run
[run]
mode = quantum
tau_end = 5
label = demo

[model]
rabi = 40
coupling = 0.03
basis_size = 128

[initial]
mean_z = -5
)";

}  // namespace

TEST_CASE("minimal quantum config parses with defaults filled in") {
    const RunConfig cfg = parse_config_text(kMinimalQuantum, "demo.ini");
    CHECK(cfg.mode == RunConfig::Mode::quantum);
    CHECK(cfg.label == "demo");
    CHECK(cfg.tau_end == 5.0);
    CHECK(cfg.rabi == 40.0);
    CHECK(cfg.coupling == 0.03);
    CHECK(cfg.basis_size == 128);
    CHECK(cfg.init_z == -5.0);
    CHECK(cfg.init_p == 0.0);
    CHECK(cfg.snapshot_stride == Approx(0.08));
    CHECK(cfg.rtol == 1e-10);
    CHECK(cfg.frame == Frame::rotated);
    CHECK(cfg.drive_preset == "a");
    CHECK(cfg.sweep.empty());

    const QuantumParams qp = cfg.quantum_params();
    CHECK(qp.rabi == 40.0);
    CHECK_FALSE(qp.eq12_verbatim);
    const SpinorFockState s = cfg.initial_quantum_state();
    CHECK(s.size() == 128);
}

TEST_CASE("semicolon comments, whitespace, and case work") {
    const RunConfig cfg = parse_config_text(
        "; comment\n[run]\nmode = classical\ntau_end = 2.5\n\n[model]\n"
        "rabi=37\n  coupling = 2.8e-7\nspin_count = 2.9e9\n",
        "c.ini");
    CHECK(cfg.mode == RunConfig::Mode::classical);
    CHECK(cfg.spin_count == 2.9e9);
    const ClassicalParams cp = cfg.classical_params();
    CHECK(cp.spin_count == 2.9e9);
    CHECK(cp.rabi == 37.0);
}

TEST_CASE("errors carry the source name and line number") {
    const std::string bad = "[run]\nmode = quantum\nbogus_key = 1\n";
    try {
        parse_config_text(bad, "demo.ini");
        FAIL("expected a parse error");
    } catch (const ConfigError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("demo.ini:3") != std::string::npos);
    }

    try {
        parse_config_text("[run]\nthis line has no equals sign\n", "x.ini");
        FAIL("expected a parse error");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("x.ini:2") != std::string::npos);
    }

    CHECK_THROWS_AS(parse_config_text("[nosuch]\nkey = 1\n", "y.ini"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("[model]\nrabi = abc\n", "z.ini"), ConfigError);
}

TEST_CASE("validation rejects inconsistent run setups") {
    // missing tau_end
    CHECK_THROWS_AS(
        parse_config_text("[run]\nmode = quantum\n[model]\nrabi = 1\ncoupling = 0\nbasis_size = 8\n", "v.ini"),
        ConfigError);
    // quantum without a basis
    CHECK_THROWS_AS(
        parse_config_text("[run]\nmode = quantum\ntau_end = 1\n[model]\nrabi = 1\ncoupling = 0\n", "v.ini"),
        ConfigError);
    // pinned spin outside classical mode
    CHECK_THROWS_AS(parse_config_text("[run]\nmode = quantum\ntau_end = 1\npinned = true\n"
                                      "[model]\nrabi = 1\ncoupling = 0\nbasis_size = 8\n",
                                      "v.ini"),
                    ConfigError);
    // jumps without any collapse schedule
    CHECK_THROWS_AS(parse_config_text("[run]\nmode = jumps\ntau_end = 1\n"
                                      "[model]\nrabi = 1\ncoupling = 0\nbasis_size = 8\n",
                                      "v.ini"),
                    ConfigError);
    // snapshot stream makes no sense for the classical path
    CHECK_THROWS_AS(parse_config_text("[run]\nmode = classical\ntau_end = 1\nwrite_stream = true\n"
                                      "[model]\nrabi = 1\ncoupling = 0\n",
                                      "v.ini"),
                    ConfigError);
    // discontinuous explicit drive
    CHECK_THROWS_AS(parse_config_text("[run]\nmode = classical\ntau_end = 1\n"
                                      "[model]\nrabi = 1\ncoupling = 0\n"
                                      "[drive]\nramp_offset = -500\nramp_slope = 30\nramp_end = 20\n"
                                      "modulation_amplitude = 100\nmodulation_phase_origin = 20\n",
                                      "v.ini"),
                    ConfigError);
}

TEST_CASE("explicit drive keys override the preset") {
    const RunConfig cfg = parse_config_text(
        "[run]\nmode = classical\ntau_end = 1\n[model]\nrabi = 1\ncoupling = 0\n"
        "[drive]\nramp_offset = -200\nramp_slope = 10\nramp_end = 20\n"
        "modulation_amplitude = 0\nmodulation_phase_origin = 20\n",
        "d.ini");
    CHECK(cfg.drive_preset.empty());
    CHECK(cfg.drive.ramp_offset == -200.0);
    CHECK(cfg.drive.ramp_slope == 10.0);

    const RunConfig pb = parse_config_text(
        "[run]\nmode = classical\ntau_end = 1\n[model]\nrabi = 1\ncoupling = 0\n"
        "[drive]\npreset = b\n",
        "d.ini");
    CHECK(pb.drive.ramp_offset == -6000.0);
    CHECK(pb.drive.modulation_amplitude == 1000.0);
}

TEST_CASE("initial spin keywords set the Bloch angles") {
    const RunConfig up = parse_config_text(
        "[run]\nmode = quantum\ntau_end = 1\n[model]\nrabi = 1\ncoupling = 0\nbasis_size = 8\n"
        "[initial]\nspin = up\n",
        "s.ini");
    CHECK(up.init_theta == 0.0);
    const RunConfig down = parse_config_text(
        "[run]\nmode = quantum\ntau_end = 1\n[model]\nrabi = 1\ncoupling = 0\nbasis_size = 8\n"
        "[initial]\nspin = down\n",
        "s.ini");
    CHECK(down.init_theta == Approx(3.14159265358979).epsilon(1e-12));
    CHECK_THROWS_AS(parse_config_text("[run]\nmode = quantum\ntau_end = 1\n"
                                      "[model]\nrabi = 1\ncoupling = 0\nbasis_size = 8\n"
                                      "[initial]\nspin = sideways\n",
                                      "s.ini"),
                    ConfigError);
}

TEST_CASE("laboratory inputs replace explicit couplings") {
    const char* phys =
        "[run]\nmode = classical\ntau_end = 1\n"
        "[model]\nspin_count = 2.9e9\n"
        "[physical]\nfrequency_hz = 1.4e3\nforce_constant = 1e-3\nrf_field = 1.2e-3\n"
        "field_gradient = 600\ngyromagnetic_ratio = 4.3e7\nquality_factor = 1e3\n";
    const RunConfig cfg = parse_config_text(phys, "p.ini");
    CHECK(cfg.rabi == Approx(36.857).epsilon(1e-3));
    CHECK(cfg.coupling == Approx(2.8065e-7).epsilon(1e-3));
    REQUIRE(cfg.physical.has_value());
    CHECK(cfg.physical->effective_spin_count == 2.9e9);

    // explicit and laboratory couplings together are ambiguous
    const std::string conflict = std::string(phys) + "[model]\nrabi = 40\n";
    CHECK_THROWS_AS(parse_config_text(conflict, "p.ini"), ConfigError);
}

TEST_CASE("collapse settings parse including lifetime lists") {
    const RunConfig cfg = parse_config_text(
        "[run]\nmode = jumps\ntau_end = 1\nseed = 99\n"
        "[model]\nrabi = 1\ncoupling = 0.1\nbasis_size = 16\n"
        "[collapse]\nlifetimes = 1.5, 2.5, 3\nwindow = sharp\nfine_points = 4096\n",
        "j.ini");
    REQUIRE(cfg.lifetimes.size() == 3);
    CHECK(cfg.lifetimes[1] == 2.5);
    CHECK(cfg.window == WindowKind::sharp);
    CHECK(cfg.fine_points == 4096);
    const CollapseSchedule sched = cfg.collapse_schedule();
    CHECK(sched.rng_seed == 99);
    CHECK(sched.lifetimes.size() == 3);

    // the fine synthesis grid may not be coarser than the analysis grid
    CHECK_THROWS_AS(parse_config_text("[run]\nmode = jumps\ntau_end = 1\n"
                                      "[model]\nrabi = 1\ncoupling = 0.1\nbasis_size = 16\n"
                                      "[collapse]\nlifetimes = 1\nfine_points = 100\n",
                                      "j.ini"),
                    ConfigError);
}

TEST_CASE("all presets are valid and mutually distinct") {
    const auto names = preset_names();
    REQUIRE(names.size() == 4);
    for (const auto& name : names) {
        const RunConfig cfg = preset_config(name);
        CHECK_NOTHROW(cfg.validate());
        CHECK(cfg.label == name);
    }
    CHECK(preset_config("fig3").mode == RunConfig::Mode::quantum);
    CHECK(preset_config("fig2").mode == RunConfig::Mode::classical);
    CHECK(preset_config("jumps_demo").mode == RunConfig::Mode::jumps);
    CHECK(preset_config("fig4").rabi == 400.0);
    CHECK_THROWS_AS(preset_config("fig9"), ConfigError);
}

TEST_CASE("configs survive an emit-and-reparse round trip") {
    for (const auto& name : preset_names()) {
        const RunConfig cfg = preset_config(name);
        const RunConfig back = parse_config_text(config_to_ini(cfg), "rt.ini");
        CHECK(back.mode == cfg.mode);
        CHECK(back.tau_end == cfg.tau_end);
        CHECK(back.rabi == cfg.rabi);
        CHECK(back.coupling == cfg.coupling);
        CHECK(back.basis_size == cfg.basis_size);
        CHECK(back.spin_count == cfg.spin_count);
        CHECK(back.rtol == cfg.rtol);
        CHECK(back.atol == cfg.atol);
        CHECK(back.init_z == cfg.init_z);
        CHECK(back.init_p == cfg.init_p);
        CHECK(back.seed == cfg.seed);
        CHECK(back.snapshot_stride == cfg.snapshot_stride);
        CHECK(back.drive.ramp_offset == cfg.drive.ramp_offset);
        CHECK(back.drive.modulation_amplitude == cfg.drive.modulation_amplitude);
        CHECK(back.decoherence_time == cfg.decoherence_time);
        CHECK(back.lifetimes == cfg.lifetimes);
        CHECK(back.out_dir == cfg.out_dir);
        CHECK(back.label == cfg.label);
    }
}

TEST_CASE("overrides reuse the key table") {
    RunConfig cfg = parse_config_text(kMinimalQuantum, "demo.ini");
    apply_override(cfg, "model.rabi", "55.5");
    apply_override(cfg, "run.label", "patched");
    CHECK(cfg.rabi == 55.5);
    CHECK(cfg.label == "patched");
    CHECK_THROWS_AS(apply_override(cfg, "model.nope", "1"), ConfigError);
}

TEST_CASE("sweep axes parse with ranges expanded") {
    const RunConfig cfg = parse_config_text(
        std::string(kMinimalQuantum) + "[sweep]\nmodel.rabi = 10, 20, 30\nrun.seed = 1..4\n",
        "sw.ini");
    REQUIRE(cfg.sweep.size() == 2);
    CHECK(cfg.sweep[0].key == "model.rabi");
    REQUIRE(cfg.sweep[0].values.size() == 3);
    CHECK(cfg.sweep[0].values[1] == "20");
    CHECK(cfg.sweep[1].key == "run.seed");
    REQUIRE(cfg.sweep[1].values.size() == 4);
    CHECK(cfg.sweep[1].values[0] == "1");
    CHECK(cfg.sweep[1].values[3] == "4");

    // unknown axis keys and duplicates are rejected
    CHECK_THROWS_AS(
        parse_config_text(std::string(kMinimalQuantum) + "[sweep]\nmodel.nope = 1, 2\n", "sw.ini"),
        ConfigError);
    CHECK_THROWS_AS(parse_config_text(std::string(kMinimalQuantum) +
                                          "[sweep]\nmodel.rabi = 1, 2\nmodel.rabi = 3, 4\n",
                                      "sw.ini"),
                    ConfigError);
}

TEST_CASE("missing config files surface as io errors") {
    CHECK_THROWS_AS(load_config("/nonexistent/path/to/config.ini"), IoError);
}
