#pragma once

// Config-driven runs writing config.resolved, diagnostics.csv and snapshots.

#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "feos/config.hpp"
#include "feos/output.hpp"
#include "feos/snapshot.hpp"
#include "feos/splitting.hpp"

namespace feos {

/// File name for a snapshot at time t, e.g. "snapshot_t000012.5000.mbef".
inline std::string snapshot_name(double t) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "snapshot_t%011.4f.mbef", t);
    return buf;
}

/// Streams snapshots to disk as they arrive and keeps the records.
struct DirectorySink {
    std::filesystem::path dir;
    std::vector<DiagnosticsRecord> records;
    std::vector<std::filesystem::path> snapshot_paths;

    void record(const DiagnosticsRecord& r) { records.push_back(r); }
    void snapshot(double t, const Field& f) {
        auto path = dir / snapshot_name(t);
        write_snapshot(f, path.string());
        snapshot_paths.push_back(std::move(path));
    }
};

struct RunOutputs {
    Field final_state;
    std::vector<DiagnosticsRecord> records;
    std::filesystem::path directory;
};

inline RunOutputs run_from_config(const ConfigFile& cfg, const std::filesystem::path& out_dir) {
    ensure_directory(out_dir);
    ConfigFile echoed = cfg;
    echoed.out_dir = out_dir.string();
    detail::write_text_file(out_dir / "config.resolved", echo(echoed));
    const Grid grid = grid_of(cfg);
    DirectorySink sink{out_dir, {}, {}};
    Field u = evolve(build_initial_condition(cfg, grid), run_config_of(cfg), sink);
    write_diagnostics_csv(sink.records, out_dir / "diagnostics.csv");
    write_snapshot(u, (out_dir / "final.mbef").string());
    return {std::move(u), std::move(sink.records), out_dir};
}

}  // namespace feos
