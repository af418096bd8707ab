#pragma once

#include <filesystem>
#include <string>

#include "spindyn/config.hpp"

namespace spindyn {

inline constexpr const char* kArtifactVersion = "0.1.0";

struct RunOutcome {
    std::filesystem::path run_dir;
    std::string manifest_json;
    std::string stdout_line;  // one-line summary printed by the CLI
};

// Execute one validated config: writes trace/spectrum/fit/lyapunov artifacts
// plus manifest.json into <out_dir>/run-<hash>/.
RunOutcome run_config(const RunConfig& cfg);

// Fan the swept parameter out over a worker pool (SPINDYN_WORKERS, default
// hardware concurrency) and write summary.csv next to the per-run dirs.
std::filesystem::path sweep_config(const RunConfig& cfg);

}  // namespace spindyn
