#pragma once

#include <cstdint>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "spincant/state.hpp"

namespace spincant {

// Numeric CSV with a fixed header; values are printed with %.17g so that a
// read-back reproduces the doubles bit-exactly.
class CsvWriter {
  public:
    CsvWriter(const std::string& path, const std::vector<std::string>& columns);
    void row(const std::vector<double>& values);
    void close();  // flushes and verifies the sink; IoError on failure
    ~CsvWriter();

  private:
    std::string path_;
    std::ofstream out_;
    std::size_t n_columns_;
};

// Binary wavefunction stream
// ==========================
// Little-endian only (enforced at compile time).
//   header: 8 bytes "SPNCANT1", u32 format version (= 1), u32 reserved (= 0)
//   record: f64 tau, u32 basis size n, u32 padding (= 0),
//           n complex128 spin-up amplitudes, n complex128 spin-down amplitudes
// Every record is 16 + 32 n bytes, 8-byte aligned.
inline constexpr char kStreamMagic[8] = {'S', 'P', 'N', 'C', 'A', 'N', 'T', '1'};

constexpr std::size_t stream_record_size(int n) {
    return 16 + 32 * static_cast<std::size_t>(n);
}

class SnapshotStreamWriter {
  public:
    explicit SnapshotStreamWriter(const std::string& path);
    void append(const SpinorFockState& s);
    void close();
    ~SnapshotStreamWriter();

  private:
    std::string path_;
    std::ofstream out_;
};

class SnapshotStreamReader {
  public:
    explicit SnapshotStreamReader(const std::string& path);
    // One record, or nothing at a clean end of stream; IoError on a torn one.
    std::optional<SpinorFockState> next();

  private:
    std::string path_;
    std::ifstream in_;
};

// FNV-1a over arbitrary bytes, and over a state's canonical serialization
// (tau, n, then the raw amplitude bytes — the stream record minus padding).
std::uint64_t fnv1a(const void* data, std::size_t n_bytes,
                    std::uint64_t h = 0xcbf29ce484222325ull);
std::uint64_t state_checksum(const SpinorFockState& s);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

// Matplotlib companion scripts dropped next to the CSV artifacts; they are
// data products and are never executed by this program.
void write_quantum_plot_scripts(const std::string& dir);
void write_classical_plot_scripts(const std::string& dir);

}  // namespace spincant
