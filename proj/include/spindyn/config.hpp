#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace spindyn {

// One config = one run. Flat key = value lines, '#' comments; lists in
// square brackets, site lists as [[x,y,z], ...]. See the README grammar.
struct RunConfig {
    std::string engine;  // quantum | classical | lyapunov | twospin | compare

    std::optional<std::array<int, 3>> lattice;
    std::optional<std::vector<std::array<int, 3>>> coords;

    double p_d = 0.01;
    double t_max = 2000.0;
    double dt_out = 0.5;

    std::string init = "random";  // linear | random
    double s = 1.0;
    std::uint64_t seed = 1;
    std::string frame = "lab";  // lab | lab_secular | rotating_secular
    bool secular_only = false;

    bool dft = false;
    int zero_pad = 8;
    bool fit = false;
    bool t_star = false;

    // lyapunov
    double t_end = 70000.0;
    double transient_cutoff = 1000.0;
    double rescale_interval = 10.0;
    double sample_interval = 100.0;

    // twospin oracle
    std::string mode;  // period | c | sx | eigs
    double e_dip = 2.0;
    double tau = 0.0;
    double tau0 = 0.0;
    double t_eval = 0.0;

    // compare
    std::string trace_a, trace_b;

    // sweep
    std::string sweep;  // p_d | s | seed | nx | init
    std::vector<std::string> sweep_values;

    std::string out_dir = "runs";
};

RunConfig parse_config_text(const std::string& text);
RunConfig parse_config_file(const std::filesystem::path& p);

// throws config_error with an actionable message on any bad combination
void validate(const RunConfig& cfg);

// deterministic key-sorted serialization of every resolved field; the run
// directory is named by its hash
std::string canonical_text(const RunConfig& cfg);
std::string config_hash(const RunConfig& cfg);

}  // namespace spindyn
