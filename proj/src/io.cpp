#include "spincant/io.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <sstream>

#include "spincant/errors.hpp"

static_assert(std::endian::native == std::endian::little,
              "the snapshot stream format is little-endian only");
static_assert(sizeof(spincant::cplx) == 16, "complex128 layout expected");

namespace spincant {

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& columns)
    : path_(path), out_(path, std::ios::binary | std::ios::trunc), n_columns_(columns.size()) {
    if (!out_) throw IoError("cannot create '" + path + "'");
    for (std::size_t i = 0; i < columns.size(); i++) {
        if (i) out_ << ',';
        out_ << columns[i];
    }
    out_ << '\n';
}

void CsvWriter::row(const std::vector<double>& values) {
    if (values.size() != n_columns_)
        throw IoError("'" + path_ + "': row width does not match the header");
    char buf[32];
    std::string line;
    for (std::size_t i = 0; i < values.size(); i++) {
        if (i) line += ',';
        std::snprintf(buf, sizeof buf, "%.17g", values[i]);
        line += buf;
    }
    line += '\n';
    out_ << line;
}

void CsvWriter::close() {
    if (!out_.is_open()) return;
    out_.flush();
    if (!out_) throw IoError("write failure on '" + path_ + "'");
    out_.close();
}

CsvWriter::~CsvWriter() {
    if (out_.is_open()) out_.close();
}

SnapshotStreamWriter::SnapshotStreamWriter(const std::string& path)
    : path_(path), out_(path, std::ios::binary | std::ios::trunc) {
    if (!out_) throw IoError("cannot create '" + path + "'");
    const std::uint32_t version = 1, reserved = 0;
    out_.write(kStreamMagic, sizeof kStreamMagic);
    out_.write(reinterpret_cast<const char*>(&version), 4);
    out_.write(reinterpret_cast<const char*>(&reserved), 4);
    if (!out_) throw IoError("write failure on '" + path + "'");
}

void SnapshotStreamWriter::append(const SpinorFockState& s) {
    const std::uint32_t n = static_cast<std::uint32_t>(s.size()), pad = 0;
    out_.write(reinterpret_cast<const char*>(&s.tau), 8);
    out_.write(reinterpret_cast<const char*>(&n), 4);
    out_.write(reinterpret_cast<const char*>(&pad), 4);
    out_.write(reinterpret_cast<const char*>(s.a.data()), 16 * std::streamsize(n));
    out_.write(reinterpret_cast<const char*>(s.b.data()), 16 * std::streamsize(n));
    if (!out_) throw IoError("write failure on '" + path_ + "'");
}

void SnapshotStreamWriter::close() {
    if (!out_.is_open()) return;
    out_.flush();
    if (!out_) throw IoError("write failure on '" + path_ + "'");
    out_.close();
}

SnapshotStreamWriter::~SnapshotStreamWriter() {
    if (out_.is_open()) out_.close();
}

SnapshotStreamReader::SnapshotStreamReader(const std::string& path)
    : path_(path), in_(path, std::ios::binary) {
    if (!in_) throw IoError("cannot open '" + path + "'");
    char magic[8];
    std::uint32_t version = 0, reserved = 0;
    in_.read(magic, 8);
    in_.read(reinterpret_cast<char*>(&version), 4);
    in_.read(reinterpret_cast<char*>(&reserved), 4);
    if (!in_ || std::memcmp(magic, kStreamMagic, 8) != 0)
        throw IoError("'" + path + "' is not a snapshot stream");
    if (version != 1)
        throw IoError("'" + path + "': unsupported stream version " + std::to_string(version));
}

std::optional<SpinorFockState> SnapshotStreamReader::next() {
    double tau = 0;
    std::uint32_t n = 0, pad = 0;
    in_.read(reinterpret_cast<char*>(&tau), 8);
    if (in_.eof() && in_.gcount() == 0) return std::nullopt;
    in_.read(reinterpret_cast<char*>(&n), 4);
    in_.read(reinterpret_cast<char*>(&pad), 4);
    if (!in_) throw IoError("'" + path_ + "': torn record header");
    if (n == 0 || n > 50'000'000)
        throw IoError("'" + path_ + "': implausible basis size " + std::to_string(n));
    SpinorFockState s(static_cast<int>(n));
    s.tau = tau;
    in_.read(reinterpret_cast<char*>(s.a.data()), 16 * std::streamsize(n));
    in_.read(reinterpret_cast<char*>(s.b.data()), 16 * std::streamsize(n));
    if (!in_) throw IoError("'" + path_ + "': torn record payload");
    return s;
}

std::uint64_t fnv1a(const void* data, std::size_t n_bytes, std::uint64_t h) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n_bytes; i++) {
        h ^= p[i];
        h *= 0x100000001b3ull;
    }
    return h;
}

std::uint64_t state_checksum(const SpinorFockState& s) {
    const std::uint32_t n = static_cast<std::uint32_t>(s.size());
    std::uint64_t h = fnv1a(&s.tau, 8);
    h = fnv1a(&n, 4, h);
    h = fnv1a(s.a.data(), 16 * std::size_t(n), h);
    h = fnv1a(s.b.data(), 16 * std::size_t(n), h);
    return h;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot create '" + path + "'");
    out << content;
    out.flush();
    if (!out) throw IoError("write failure on '" + path + "'");
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

namespace {

const char* kMeanZScript = R"PY(#!/usr/bin/env python3
"""Mean position/momentum and spin projections from observables.csv."""
import numpy as np
import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

d = np.genfromtxt("observables.csv", delimiter=",", names=True)
fig, axes = plt.subplots(3, 1, sharex=True, figsize=(8, 8))
axes[0].plot(d["tau"], d["z"], lw=0.8)
axes[0].set_ylabel(r"$\langle z\rangle$")
axes[1].plot(d["tau"], d["p"], lw=0.8)
axes[1].set_ylabel(r"$\langle p\rangle$")
axes[2].plot(d["tau"], d["sz"], lw=0.8, label=r"$\langle S_z\rangle$")
axes[2].plot(d["tau"], d["sx"], lw=0.5, label=r"$\langle S_x\rangle$")
axes[2].plot(d["tau"], d["sy"], lw=0.5, label=r"$\langle S_y\rangle$")
axes[2].set_xlabel(r"$\tau$")
axes[2].legend(loc="best", fontsize=8)
fig.tight_layout()
fig.savefig("mean_z.png", dpi=160)
print("wrote mean_z.png")
)PY";

const char* kPopulationsScript = R"PY(#!/usr/bin/env python3
"""Spin populations and truncation health from observables.csv."""
import numpy as np
import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

d = np.genfromtxt("observables.csv", delimiter=",", names=True)
fig, axes = plt.subplots(2, 1, sharex=True, figsize=(8, 6))
axes[0].plot(d["tau"], d["p11"], lw=0.8, label="P11 (up)")
axes[0].plot(d["tau"], d["p22"], lw=0.8, label="P22 (down)")
axes[0].set_ylabel("population")
axes[0].legend(loc="best", fontsize=8)
axes[1].semilogy(d["tau"], np.maximum(d["norm_drift"], 1e-18), lw=0.6,
                 label="|1 - norm|")
axes[1].semilogy(d["tau"], np.maximum(d["tail"], 1e-18), lw=0.6,
                 label="top-level mass")
axes[1].set_xlabel(r"$\tau$")
axes[1].legend(loc="best", fontsize=8)
fig.tight_layout()
fig.savefig("populations.png", dpi=160)
print("wrote populations.png")
)PY";

const char* kWaterfallScript = R"PY(#!/usr/bin/env python3
"""Waterfall of |psi(z)|^2 snapshots from density.csv."""
import numpy as np
import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

d = np.genfromtxt("density.csv", delimiter=",", names=True)
taus = np.unique(d["tau"])
if taus.size == 0:
    raise SystemExit("density.csv holds no snapshots")
peak = max(d["p_total"].max(), 1e-300)
step = 1.0
fig, ax = plt.subplots(figsize=(7, 10))
for i, t in enumerate(taus):
    sel = d["tau"] == t
    ax.plot(d["z"][sel], d["p_total"][sel] / peak + i * step, lw=0.6, color="k")
ax.set_xlabel("z")
ax.set_yticks(np.arange(taus.size) * step)
ax.set_yticklabels([f"{t:.2f}" for t in taus], fontsize=6)
ax.set_ylabel(r"$\tau$")
fig.tight_layout()
fig.savefig("density_waterfall.png", dpi=160)
print("wrote density_waterfall.png")
)PY";

const char* kClassicalScript = R"PY(#!/usr/bin/env python3
"""Oscillator and spin panels from classical.csv."""
import numpy as np
import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

d = np.genfromtxt("classical.csv", delimiter=",", names=True)
fig, axes = plt.subplots(3, 1, sharex=True, figsize=(8, 8))
axes[0].plot(d["tau"], d["z"], lw=0.8)
axes[0].set_ylabel("z")
axes[1].plot(d["tau"], d["energy"], lw=0.8)
axes[1].set_ylabel(r"$(z^2+p_z^2)/2$")
axes[2].plot(d["tau"], d["sz"], lw=0.8, label=r"$S_z$")
axes[2].plot(d["tau"], d["sx"], lw=0.5, label=r"$S_x$")
axes[2].plot(d["tau"], d["sy"], lw=0.5, label=r"$S_y$")
axes[2].set_xlabel(r"$\tau$")
axes[2].legend(loc="best", fontsize=8)
fig.tight_layout()
fig.savefig("classical_panels.png", dpi=160)
print("wrote classical_panels.png")
)PY";

}  // namespace

void write_quantum_plot_scripts(const std::string& dir) {
    write_text_file(dir + "/plot_mean_z.py", kMeanZScript);
    write_text_file(dir + "/plot_populations.py", kPopulationsScript);
    write_text_file(dir + "/plot_density_waterfall.py", kWaterfallScript);
}

void write_classical_plot_scripts(const std::string& dir) {
    write_text_file(dir + "/plot_classical_panels.py", kClassicalScript);
}

}  // namespace spincant
