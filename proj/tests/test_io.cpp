#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "doctest.h"
#include "spincant/errors.hpp"
#include "spincant/io.hpp"
#include "spincant/state.hpp"

using namespace spincant;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("spincant-io-test-" + std::to_string(std::random_device{}()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

SpinorFockState sample_state(int n, double tau, unsigned seed) {
    std::mt19937 gen(seed);
    std::normal_distribution<double> nd;
    SpinorFockState s(n);
    for (int k = 0; k < n; ++k) {
        s.a[k] = cplx(nd(gen), nd(gen));
        s.b[k] = cplx(nd(gen), nd(gen));
    }
    s.normalize();
    s.tau = tau;
    return s;
}

}  // namespace

TEST_CASE("snapshot stream round-trips bit for bit") {
    TempDir tmp;
    const std::string path = (tmp.path / "run.bin").string();
    const SpinorFockState s1 = sample_state(5, 0.0, 1);
    const SpinorFockState s2 = sample_state(5, 0.08, 2);
    const SpinorFockState s3 = sample_state(5, 0.16, 3);
    {
        SnapshotStreamWriter w(path);
        w.append(s1);
        w.append(s2);
        w.append(s3);
    }
    CHECK(fs::file_size(path) == 16 + 3 * stream_record_size(5));

    SnapshotStreamReader r(path);
    int count = 0;
    for (const SpinorFockState* expect : {&s1, &s2, &s3}) {
        const auto got = r.next();
        REQUIRE(got.has_value());
        CHECK(got->tau == expect->tau);
        REQUIRE(got->size() == 5);
        for (int k = 0; k < 5; ++k) {
            CHECK(got->a[k] == expect->a[k]);
            CHECK(got->b[k] == expect->b[k]);
        }
        ++count;
    }
    CHECK_FALSE(r.next().has_value());  // clean end of stream
    CHECK(count == 3);
}

TEST_CASE("record size matches the documented layout") {
    // 8 tau + 4 count + 4 pad + n * 2 components * 16 bytes
    CHECK(stream_record_size(2000) == 64016);
    CHECK(stream_record_size(1) == 48);
}

TEST_CASE("corrupt streams are refused") {
    TempDir tmp;

    const std::string bad_magic = (tmp.path / "magic.bin").string();
    std::ofstream(bad_magic, std::ios::binary) << "NOTMINE1" << std::string(8, '\0');
    CHECK_THROWS_AS(SnapshotStreamReader{bad_magic}, IoError);

    const std::string bad_version = (tmp.path / "version.bin").string();
    {
        std::ofstream f(bad_version, std::ios::binary);
        f.write(kStreamMagic, 8);
        const std::uint32_t version = 99, reserved = 0;
        f.write(reinterpret_cast<const char*>(&version), 4);
        f.write(reinterpret_cast<const char*>(&reserved), 4);
    }
    CHECK_THROWS_AS(SnapshotStreamReader{bad_version}, IoError);

    const std::string torn = (tmp.path / "torn.bin").string();
    {
        SnapshotStreamWriter w(torn);
        w.append(sample_state(5, 0.0, 1));
        w.append(sample_state(5, 0.08, 2));
    }
    fs::resize_file(torn, fs::file_size(torn) - 7);
    SnapshotStreamReader r(torn);
    CHECK(r.next().has_value());
    CHECK_THROWS_AS(r.next(), IoError);

    CHECK_THROWS_AS(SnapshotStreamReader{(tmp.path / "absent.bin").string()}, IoError);
}

TEST_CASE("state checksum separates distinct states") {
    const SpinorFockState s = sample_state(8, 0.5, 10);
    CHECK(state_checksum(s) == state_checksum(s));

    SpinorFockState t = s;
    t.a[3] += cplx(1e-12, 0);  // tiny perturbation, far below any tolerance, still changes bytes
    CHECK(state_checksum(t) != state_checksum(s));

    SpinorFockState u = s;
    u.tau = 0.5000000001;
    CHECK(state_checksum(u) != state_checksum(s));
}

TEST_CASE("csv rows print with full double precision") {
    TempDir tmp;
    const std::string path = (tmp.path / "table.csv").string();
    {
        CsvWriter csv(path, {"tau", "value"});
        csv.row({0.1, 1.0 / 3.0});
        csv.close();
    }
    std::ifstream in(path);
    std::string header, line;
    std::getline(in, header);
    std::getline(in, line);
    CHECK(header == "tau,value");
    const auto comma = line.find(',');
    REQUIRE(comma != std::string::npos);
    CHECK(std::stod(line.substr(0, comma)) == 0.1);  // %.17g round-trips exactly
    CHECK(std::stod(line.substr(comma + 1)) == 1.0 / 3.0);
}

TEST_CASE("text file helpers round-trip and report failures") {
    TempDir tmp;
    const std::string path = (tmp.path / "note.txt").string();
    const std::string body = "line one\nline two\n";
    write_text_file(path, body);
    CHECK(read_text_file(path) == body);
    CHECK_THROWS_AS(read_text_file((tmp.path / "absent.txt").string()), IoError);
    CHECK_THROWS_AS(write_text_file((tmp.path / "no" / "dir" / "x.txt").string(), "y"), IoError);
}
