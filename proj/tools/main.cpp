#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "spincant/config.hpp"
#include "spincant/errors.hpp"
#include "spincant/io.hpp"
#include "spincant/runner.hpp"
#include "spincant/version.hpp"

namespace {

void print_run_result(const spincant::RunResult& r) {
    std::printf("run complete: %s (%ld snapshots", r.out_dir.c_str(), r.n_snapshots);
    if (r.n_jumps > 0) std::printf(", %ld jumps", r.n_jumps);
    std::printf(", %.1f s)\n", r.wall_seconds);
}

}  // namespace

int main(int argc, char** argv) {
    using namespace spincant;

    CLI::App app{"spincant: spin-cantilever quantum/classical dynamics toolkit"};
    app.set_version_flag("--version", std::string("spincant ") + kVersion);
    app.require_subcommand(1);

    std::string config_path, preset_name, stream_path;
    std::string preset_out, replay_out = "replay";
    bool dry_run = false, analyze = false;

    CLI::App* run = app.add_subcommand("run", "execute the run described by an INI config");
    run->add_option("config", config_path, "path to the config file")->required();

    CLI::App* preset =
        app.add_subcommand("preset", "execute (or just write) a stock configuration");
    preset->add_option("name", preset_name, "one of: fig2, fig3, fig4, jumps_demo")
        ->required();
    preset->add_option("--out", preset_out, "output directory (default: the preset name)");
    preset->add_flag("--dry-run", dry_run, "write config.ini into the output directory only");

    CLI::App* sweep =
        app.add_subcommand("sweep", "run the cartesian sweep in the config's [sweep] section");
    sweep->add_option("config", config_path, "path to the config file")->required();

    CLI::App* replay = app.add_subcommand(
        "replay", "scan a snapshot stream; with --analyze, rebuild the CSV analysis from it");
    replay->add_option("stream", stream_path, "path to a snapshots.bin stream")->required();
    replay->add_flag("--analyze", analyze, "write observables/cat/splits/density CSVs");
    replay->add_option("--out", replay_out, "analysis output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (run->parsed()) {
            RunConfig cfg = load_config(config_path);
            if (!cfg.sweep.empty())
                throw ConfigError(config_path +
                                  ": config declares [sweep] axes; use the sweep verb");
            print_run_result(execute_run(cfg));
        } else if (preset->parsed()) {
            RunConfig cfg = preset_config(preset_name);
            if (!preset_out.empty()) cfg.out_dir = preset_out;
            if (dry_run) {
                const std::string dir = resolve_out_dir(cfg.out_dir);
                std::error_code ec;
                std::filesystem::create_directories(dir, ec);
                if (ec)
                    throw IoError("cannot create output directory '" + dir +
                                  "': " + ec.message());
                write_text_file(dir + "/config.ini", config_to_ini(cfg));
                std::printf("wrote %s/config.ini\n", dir.c_str());
            } else {
                print_run_result(execute_run(cfg));
            }
        } else if (sweep->parsed()) {
            const SweepResult r = execute_sweep(read_text_file(config_path), config_path);
            std::printf("sweep complete: %d runs, %d failed, summary in %s\n", r.n_runs,
                        r.n_failed, r.out_dir.c_str());
            if (r.n_failed > 0) return r.first_error_exit;
        } else {
            ReplayOptions opt;
            opt.analyze = analyze;
            opt.out_dir = replay_out;
            const ReplayResult r = execute_replay(stream_path, opt);
            std::printf("stream %s: %ld records, basis %d, tau %.17g..%.17g, "
                        "final checksum 0x%016llx\n",
                        stream_path.c_str(), r.n_records, r.basis_size, r.tau_first,
                        r.tau_last, static_cast<unsigned long long>(r.final_checksum));
            if (analyze) std::printf("analysis written to %s\n", r.out_dir.c_str());
        }
        return kExitOk;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const HealthError& e) {
        std::cerr << "health error: " << e.what() << "\n";
        return kExitHealth;
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
