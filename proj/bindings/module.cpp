#include <cstring>

#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "spincant/cat.hpp"
#include "spincant/classical.hpp"
#include "spincant/collapse.hpp"
#include "spincant/config.hpp"
#include "spincant/drive.hpp"
#include "spincant/errors.hpp"
#include "spincant/io.hpp"
#include "spincant/observables.hpp"
#include "spincant/params.hpp"
#include "spincant/quantum.hpp"
#include "spincant/rng.hpp"
#include "spincant/runner.hpp"
#include "spincant/state.hpp"
#include "spincant/version.hpp"

namespace py = pybind11;
using namespace spincant;

namespace {

// Build arrays with explicit shape and strides: the bare element-count
// constructor can hand back a stride-0 broadcast view whose buffer is a
// single element, which a bulk memcpy would silently overflow.
py::array_t<std::complex<double>> to_numpy(const std::vector<cplx>& v) {
    const auto n = static_cast<py::ssize_t>(v.size());
    py::array_t<std::complex<double>> a({n}, {static_cast<py::ssize_t>(sizeof(cplx))});
    std::memcpy(a.mutable_data(), v.data(), v.size() * sizeof(cplx));
    return a;
}

py::array_t<double> to_numpy(const std::vector<double>& v) {
    const auto n = static_cast<py::ssize_t>(v.size());
    py::array_t<double> a({n}, {static_cast<py::ssize_t>(sizeof(double))});
    std::memcpy(a.mutable_data(), v.data(), v.size() * sizeof(double));
    return a;
}

// forcecast + c_style guarantee a dense, correctly-typed buffer even when the
// caller passes a sliced or otherwise strided array
std::vector<cplx> from_numpy(
    const py::array_t<std::complex<double>, py::array::c_style | py::array::forcecast>& a) {
    const auto buf = a.request();
    if (buf.ndim != 1) throw ConfigError("amplitude arrays must be one-dimensional");
    std::vector<cplx> v(static_cast<std::size_t>(buf.shape[0]));
    std::memcpy(v.data(), buf.ptr, v.size() * sizeof(cplx));
    return v;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "spin-cantilever dynamics: spinor Fock evolution, cat analysis, "
              "classical limit, and collapse Monte Carlo";
    m.attr("__version__") = kVersion;

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<HealthError>(m, "HealthError", PyExc_RuntimeError);
    py::register_exception<IoError>(m, "IoError", PyExc_OSError);

    // ---- parameters --------------------------------------------------------
    py::class_<PhysicalParams>(m, "PhysicalParams")
        .def(py::init<>())
        .def_readwrite("cantilever_frequency_hz", &PhysicalParams::cantilever_frequency_hz)
        .def_readwrite("force_constant_n_per_m", &PhysicalParams::force_constant_n_per_m)
        .def_readwrite("rf_field_t", &PhysicalParams::rf_field_t)
        .def_readwrite("field_gradient_t_per_m", &PhysicalParams::field_gradient_t_per_m)
        .def_readwrite("gyromagnetic_ratio_hz_per_t",
                       &PhysicalParams::gyromagnetic_ratio_hz_per_t)
        .def_readwrite("quality_factor", &PhysicalParams::quality_factor)
        .def_readwrite("effective_spin_count", &PhysicalParams::effective_spin_count);

    py::class_<OscillatorQuanta>(m, "OscillatorQuanta")
        .def_readonly("energy_quantum_j", &OscillatorQuanta::energy_quantum_j)
        .def_readonly("force_quantum_n", &OscillatorQuanta::force_quantum_n)
        .def_readonly("length_quantum_m", &OscillatorQuanta::length_quantum_m)
        .def_readonly("momentum_quantum_kg_m_per_s",
                      &OscillatorQuanta::momentum_quantum_kg_m_per_s);

    py::class_<DimensionlessParams>(m, "DimensionlessParams")
        .def_readonly("rabi", &DimensionlessParams::rabi)
        .def_readonly("coupling", &DimensionlessParams::coupling)
        .def_readonly("basis_size", &DimensionlessParams::basis_size);

    m.def("reduce", &reduce, py::arg("physical"),
          "Nondimensionalize laboratory parameters; returns (quanta, dimensionless).");
    m.def("time_to_dimensionless", &time_to_dimensionless, py::arg("t_seconds"),
          py::arg("physical"));

    // ---- drive -------------------------------------------------------------
    py::class_<DriveProfile>(m, "DriveProfile")
        .def(py::init<>())
        .def_readwrite("ramp_offset", &DriveProfile::ramp_offset)
        .def_readwrite("ramp_slope", &DriveProfile::ramp_slope)
        .def_readwrite("ramp_end", &DriveProfile::ramp_end)
        .def_readwrite("modulation_amplitude", &DriveProfile::modulation_amplitude)
        .def_readwrite("modulation_phase_origin", &DriveProfile::modulation_phase_origin);

    m.def("drive_profile_a", &drive_profile_a);
    m.def("drive_profile_b", &drive_profile_b);
    m.def("phi_dot", &phi_dot, py::arg("drive"), py::arg("tau"));
    m.def("phi_ddot", &phi_ddot, py::arg("drive"), py::arg("tau"));
    m.def("adiabaticity_margin", &adiabaticity_margin, py::arg("drive"), py::arg("rabi"),
          py::arg("tau_lo"), py::arg("tau_hi"));

    // ---- states ------------------------------------------------------------
    py::class_<SpinorFockState>(m, "SpinorFockState")
        .def(py::init([](const py::array_t<std::complex<double>, py::array::c_style |
                                                                     py::array::forcecast>& a,
                         const py::array_t<std::complex<double>, py::array::c_style |
                                                                     py::array::forcecast>& b,
                         double tau) {
                 SpinorFockState s;
                 s.a = from_numpy(a);
                 s.b = from_numpy(b);
                 if (s.a.size() != s.b.size())
                     throw ConfigError("spin-up and spin-down arrays differ in length");
                 s.tau = tau;
                 return s;
             }),
             py::arg("a"), py::arg("b"), py::arg("tau") = 0.0)
        .def_property_readonly("a", [](const SpinorFockState& s) { return to_numpy(s.a); })
        .def_property_readonly("b", [](const SpinorFockState& s) { return to_numpy(s.b); })
        .def_readonly("tau", &SpinorFockState::tau)
        .def("size", &SpinorFockState::size)
        .def("norm_sq", &SpinorFockState::norm_sq)
        .def("tail_mass", &SpinorFockState::tail_mass);

    m.def(
        "coherent_state",
        [](double mean_z, double mean_p, int n, double theta, double phi) {
            return coherent_state(CoherentInit::from_means(mean_z, mean_p), n,
                                  SpinorDir::from_angles(theta, phi));
        },
        py::arg("mean_z"), py::arg("mean_p"), py::arg("n"), py::arg("theta") = 0.0,
        py::arg("phi") = 0.0,
        "Truncated oscillator coherent state tensor a spinor at Bloch angles.");

    m.def("state_checksum", &state_checksum, py::arg("state"));

    // ---- quantum evolution -------------------------------------------------
    py::class_<QuantumParams>(m, "QuantumParams")
        .def(py::init<double, double, bool>(), py::arg("rabi"), py::arg("coupling"),
             py::arg("eq12_verbatim") = false)
        .def_readwrite("rabi", &QuantumParams::rabi)
        .def_readwrite("coupling", &QuantumParams::coupling)
        .def_readwrite("eq12_verbatim", &QuantumParams::eq12_verbatim);

    py::enum_<Frame>(m, "Frame")
        .value("rotated", Frame::rotated)
        .value("raw", Frame::raw);

    py::class_<EvolveControls>(m, "EvolveControls")
        .def(py::init<>())
        .def_readwrite("rtol", &EvolveControls::rtol)
        .def_readwrite("atol", &EvolveControls::atol)
        .def_readwrite("snapshot_stride", &EvolveControls::snapshot_stride)
        .def_readwrite("frame", &EvolveControls::frame)
        .def_readwrite("norm_tolerance", &EvolveControls::norm_tolerance)
        .def_readwrite("tail_threshold", &EvolveControls::tail_threshold);

    m.def(
        "evolve",
        [](SpinorFockState state, const DriveProfile& drive, const QuantumParams& qp,
           double tau_end, const EvolveControls& ctl) {
            std::vector<SpinorFockState> snaps;
            evolve(state, drive, qp, tau_end, ctl,
                   [&](const SpinorFockState& s, const SnapshotInfo&) { snaps.push_back(s); });
            return snaps;
        },
        py::arg("state"), py::arg("drive"), py::arg("params"), py::arg("tau_end"),
        py::arg("controls") = EvolveControls{}, py::call_guard<py::gil_scoped_release>(),
        "Propagate and return the snapshot states (the last one is the final state).");

    // ---- observables -------------------------------------------------------
    py::class_<SpatialGrid>(m, "SpatialGrid")
        .def(py::init<>())
        .def(py::init([](double z_min, double z_max, int points) {
                 SpatialGrid g{z_min, z_max, points};
                 g.validate();
                 return g;
             }),
             py::arg("z_min"), py::arg("z_max"), py::arg("points"))
        .def_readwrite("z_min", &SpatialGrid::z_min)
        .def_readwrite("z_max", &SpatialGrid::z_max)
        .def_readwrite("points", &SpatialGrid::points)
        .def("dz", &SpatialGrid::dz)
        .def("zs", [](const SpatialGrid& g) { return to_numpy(g.zs()); });

    py::class_<Means>(m, "Means")
        .def_readonly("z", &Means::z)
        .def_readonly("p", &Means::p)
        .def_readonly("sx", &Means::sx)
        .def_readonly("sy", &Means::sy)
        .def_readonly("sz", &Means::sz);

    py::class_<Correlations>(m, "Correlations")
        .def_readonly("z_sx", &Correlations::z_sx)
        .def_readonly("z_sy", &Correlations::z_sy)
        .def_readonly("r1", &Correlations::r1)
        .def_readonly("r2", &Correlations::r2);

    m.def("means", &means, py::arg("state"));
    m.def("populations", &populations, py::arg("state"));
    m.def("correlations", &correlations, py::arg("state"));

    py::class_<DensitySnapshot>(m, "DensitySnapshot")
        .def_readonly("tau", &DensitySnapshot::tau)
        .def_readonly("grid", &DensitySnapshot::grid)
        .def_readonly("boundary_density", &DensitySnapshot::boundary_density)
        .def_property_readonly("p_total",
                               [](const DensitySnapshot& d) { return to_numpy(d.p_total); })
        .def_property_readonly("p_up",
                               [](const DensitySnapshot& d) { return to_numpy(d.p_up); })
        .def_property_readonly("p_down",
                               [](const DensitySnapshot& d) { return to_numpy(d.p_down); })
        .def("integral", &DensitySnapshot::integral);

    m.def(
        "density",
        [](const SpinorFockState& s, const SpatialGrid& grid) {
            const HermiteBasis basis(grid, s.size());
            return density(s, basis);
        },
        py::arg("state"), py::arg("grid") = SpatialGrid{},
        py::call_guard<py::gil_scoped_release>());

    // ---- cat analysis ------------------------------------------------------
    py::class_<PeakInfo>(m, "PeakInfo")
        .def_readonly("position", &PeakInfo::position)
        .def_readonly("amplitude", &PeakInfo::amplitude)
        .def_readonly("prominence", &PeakInfo::prominence)
        .def_readonly("area", &PeakInfo::area)
        .def_readonly("up_area", &PeakInfo::up_area)
        .def_readonly("down_area", &PeakInfo::down_area)
        .def_readonly("index", &PeakInfo::index)
        .def_readonly("index_lo", &PeakInfo::index_lo)
        .def_readonly("index_hi", &PeakInfo::index_hi)
        .def("up_fraction", &PeakInfo::up_fraction);

    py::class_<CatReport>(m, "CatReport")
        .def_readonly("tau", &CatReport::tau)
        .def_readonly("grid", &CatReport::grid)
        .def_readonly("peaks", &CatReport::peaks)
        .def_readonly("major_index", &CatReport::major_index)
        .def_readonly("minor_index", &CatReport::minor_index)
        .def_readonly("separation_d", &CatReport::separation_d)
        .def("n_peaks", &CatReport::n_peaks);

    m.def("detect_peaks", &detect_peaks, py::arg("snapshot"),
          py::arg("prominence_floor") = 1e-4);

    py::class_<SplitEvent>(m, "SplitEvent")
        .def_readonly("split_tau", &SplitEvent::split_tau)
        .def_readonly("merge_tau", &SplitEvent::merge_tau)
        .def_readonly("first_index", &SplitEvent::first_index)
        .def_readonly("minor_side", &SplitEvent::minor_side);

    py::class_<SplitSeries>(m, "SplitSeries")
        .def_readonly("events", &SplitSeries::events)
        .def_readonly("period_same_side", &SplitSeries::period_same_side)
        .def_readonly("period_adjacent", &SplitSeries::period_adjacent);

    m.def("splitting_series", &splitting_series, py::arg("reports"),
          py::arg("persistence") = 3);

    // ---- classical ---------------------------------------------------------
    py::class_<ClassicalParams>(m, "ClassicalParams")
        .def(py::init<>())
        .def_readwrite("rabi", &ClassicalParams::rabi)
        .def_readwrite("coupling", &ClassicalParams::coupling)
        .def_readwrite("spin_count", &ClassicalParams::spin_count)
        .def_readwrite("drive", &ClassicalParams::drive);

    py::class_<ClassicalState>(m, "ClassicalState")
        .def(py::init<>())
        .def_readwrite("z", &ClassicalState::z)
        .def_readwrite("p", &ClassicalState::p)
        .def_readwrite("sx", &ClassicalState::sx)
        .def_readwrite("sy", &ClassicalState::sy)
        .def_readwrite("sz", &ClassicalState::sz)
        .def_readwrite("tau", &ClassicalState::tau)
        .def("energy", &ClassicalState::energy)
        .def("spin_length", &ClassicalState::spin_length);

    py::class_<ClassicalControls>(m, "ClassicalControls")
        .def(py::init<>())
        .def_property(
            "rtol", [](const ClassicalControls& c) { return c.ode.rtol; },
            [](ClassicalControls& c, double v) { c.ode.rtol = v; })
        .def_property(
            "atol", [](const ClassicalControls& c) { return c.ode.atol; },
            [](ClassicalControls& c, double v) { c.ode.atol = v; })
        .def_readwrite("snapshot_stride", &ClassicalControls::snapshot_stride)
        .def_readwrite("spin_length_tolerance", &ClassicalControls::spin_length_tolerance);

    m.def(
        "evolve_classical",
        [](const ClassicalParams& cp, const ClassicalState& init, double tau_end,
           const ClassicalControls& ctl) { return evolve_classical(cp, init, tau_end, ctl).snapshots; },
        py::arg("params"), py::arg("state"), py::arg("tau_end"),
        py::arg("controls") = ClassicalControls{}, py::call_guard<py::gil_scoped_release>());
    m.def(
        "evolve_pinned_spin",
        [](const ClassicalParams& cp, const ClassicalState& init, double tau_end,
           const ClassicalControls& ctl) { return evolve_pinned_spin(cp, init, tau_end, ctl).snapshots; },
        py::arg("params"), py::arg("state"), py::arg("tau_end"),
        py::arg("controls") = ClassicalControls{}, py::call_guard<py::gil_scoped_release>());
    m.def("resonant_envelope", &resonant_envelope, py::arg("params"), py::arg("tau"));
    m.def("stationary_amplitude", &stationary_amplitude, py::arg("params"),
          py::arg("quality_factor"));
    m.def("nonlinearity_ratio", &nonlinearity_ratio, py::arg("params"), py::arg("z"));

    // ---- collapse Monte Carlo ---------------------------------------------
    py::enum_<WindowKind>(m, "WindowKind")
        .value("sharp", WindowKind::sharp)
        .value("smooth", WindowKind::smooth);

    py::class_<CollapseSchedule>(m, "CollapseSchedule")
        .def(py::init<>())
        .def_readwrite("decoherence_time", &CollapseSchedule::decoherence_time)
        .def_readwrite("lifetimes", &CollapseSchedule::lifetimes)
        .def_readwrite("rng_seed", &CollapseSchedule::rng_seed)
        .def_readwrite("rng_stream", &CollapseSchedule::rng_stream);

    py::class_<CollapseControls>(m, "CollapseControls")
        .def(py::init<>())
        .def_readwrite("analysis_grid", &CollapseControls::analysis_grid)
        .def_readwrite("prominence_floor", &CollapseControls::prominence_floor)
        .def_readwrite("window", &CollapseControls::window)
        .def_readwrite("fine_points", &CollapseControls::fine_points)
        .def_readwrite("taper_cells", &CollapseControls::taper_cells);

    py::class_<JumpRecord>(m, "JumpRecord")
        .def_readonly("tau", &JumpRecord::tau)
        .def_readonly("deadline", &JumpRecord::deadline)
        .def_readonly("chosen_peak", &JumpRecord::chosen_peak)
        .def_readonly("chose_major", &JumpRecord::chose_major)
        .def_readonly("peak_areas", &JumpRecord::peak_areas)
        .def_readonly("pre_p11", &JumpRecord::pre_p11)
        .def_readonly("pre_p22", &JumpRecord::pre_p22)
        .def_readonly("post_p11", &JumpRecord::post_p11)
        .def_readonly("post_p22", &JumpRecord::post_p22)
        .def_readonly("captured_weight", &JumpRecord::captured_weight)
        .def_readonly("rng_counter", &JumpRecord::rng_counter);

    m.def(
        "collapse",
        [](const SpinorFockState& s, const CatReport& rep, int peak,
           const CollapseControls& ctl) {
            double captured = 0;
            SpinorFockState out = collapse(s, rep, peak, ctl, &captured);
            return std::make_pair(out, captured);
        },
        py::arg("state"), py::arg("report"), py::arg("peak"),
        py::arg("controls") = CollapseControls{},
        "Reduce the state onto one peak's basin; returns (state, captured_weight).");
    m.def("sample_peak", &sample_peak, py::arg("report"), py::arg("u"));

    m.def(
        "run_with_jumps",
        [](const SpinorFockState& init, const DriveProfile& drive, const QuantumParams& qp,
           double tau_end, const CollapseSchedule& sched, const EvolveControls& ectl,
           const CollapseControls& cctl) {
            const JumpRunResult r =
                run_with_jumps(init, drive, qp, tau_end, sched, ectl, cctl);
            return std::make_tuple(r.jumps, r.final_state, r.deferred_checks);
        },
        py::arg("state"), py::arg("drive"), py::arg("params"), py::arg("tau_end"),
        py::arg("schedule"), py::arg("evolve_controls") = EvolveControls{},
        py::arg("collapse_controls") = CollapseControls{},
        py::call_guard<py::gil_scoped_release>(),
        "Returns (jump_records, final_state, deferred_checks).");

    // ---- rng / config / runs ----------------------------------------------
    m.def("uniform_at", &CounterRng::uniform_at, py::arg("seed"), py::arg("stream"),
          py::arg("counter"), "Counter-based uniform draw in [0, 1).");

    m.def("preset_names", &preset_names);
    m.def(
        "preset_ini",
        [](const std::string& name) { return config_to_ini(preset_config(name)); },
        py::arg("name"), "INI text of a stock configuration.");

    py::class_<RunResult>(m, "RunResult")
        .def_readonly("out_dir", &RunResult::out_dir)
        .def_readonly("n_snapshots", &RunResult::n_snapshots)
        .def_readonly("n_jumps", &RunResult::n_jumps)
        .def_readonly("wall_seconds", &RunResult::wall_seconds)
        .def_readonly("final_tau", &RunResult::final_tau)
        .def_readonly("final_z", &RunResult::final_z)
        .def_readonly("final_sz", &RunResult::final_sz);

    m.def(
        "run_config_text",
        [](const std::string& text, const std::string& root) {
            return execute_run(parse_config_text(text, "<python>"), root);
        },
        py::arg("text"), py::arg("root") = std::string(),
        py::call_guard<py::gil_scoped_release>(),
        "Parse an INI config and execute it, writing the artifact directory.");
}
