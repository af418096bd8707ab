#include "spindyn/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "spindyn/errors.hpp"
#include "spindyn/io.hpp"
#include "spindyn/quantum.hpp"

namespace spindyn {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

[[noreturn]] void fail(int line, const std::string& msg) {
    throw config_error("config line " + std::to_string(line) + ": " + msg);
}

double parse_num(const std::string& v, int line) {
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) fail(line, "trailing characters in number '" + v + "'");
        return x;
    } catch (const config_error&) {
        throw;
    } catch (...) {
        fail(line, "expected a number, got '" + v + "'");
    }
}

bool parse_bool(const std::string& v, int line) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    fail(line, "expected true/false, got '" + v + "'");
}

// split "[a, b, c]" into item strings; items may themselves be bracketed
std::vector<std::string> split_list(const std::string& v, int line) {
    if (v.size() < 2 || v.front() != '[' || v.back() != ']')
        fail(line, "expected a [..] list, got '" + v + "'");
    std::vector<std::string> items;
    int depth = 0;
    std::string cur;
    for (std::size_t i = 1; i + 1 < v.size(); ++i) {
        const char c = v[i];
        if (c == '[') ++depth;
        if (c == ']') --depth;
        if (c == ',' && depth == 0) {
            items.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!trim(cur).empty()) items.push_back(trim(cur));
    return items;
}

std::array<int, 3> parse_int3(const std::string& v, int line) {
    const auto items = split_list(v, line);
    if (items.size() != 3) fail(line, "expected 3 integers, got " + std::to_string(items.size()));
    std::array<int, 3> out{};
    for (int i = 0; i < 3; ++i) {
        const double x = parse_num(items[i], line);
        if (x != std::floor(x)) fail(line, "site coordinates must be integers");
        out[i] = static_cast<int>(x);
    }
    return out;
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = raw;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) fail(lineno, "expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (val.empty()) fail(lineno, "empty value for key '" + key + "'");

        if (key == "engine") cfg.engine = val;
        else if (key == "lattice") cfg.lattice = parse_int3(val, lineno);
        else if (key == "coords") {
            std::vector<std::array<int, 3>> cs;
            for (const auto& item : split_list(val, lineno)) cs.push_back(parse_int3(item, lineno));
            cfg.coords = std::move(cs);
        }
        else if (key == "p_d") cfg.p_d = parse_num(val, lineno);
        else if (key == "t_max") cfg.t_max = parse_num(val, lineno);
        else if (key == "dt_out") cfg.dt_out = parse_num(val, lineno);
        else if (key == "init") cfg.init = val;
        else if (key == "s") cfg.s = parse_num(val, lineno);
        else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(parse_num(val, lineno));
        else if (key == "frame") cfg.frame = val;
        else if (key == "secular_only") cfg.secular_only = parse_bool(val, lineno);
        else if (key == "dft") cfg.dft = parse_bool(val, lineno);
        else if (key == "zero_pad") cfg.zero_pad = static_cast<int>(parse_num(val, lineno));
        else if (key == "fit") cfg.fit = parse_bool(val, lineno);
        else if (key == "t_star") cfg.t_star = parse_bool(val, lineno);
        else if (key == "t_end") cfg.t_end = parse_num(val, lineno);
        else if (key == "T_cutoff") cfg.transient_cutoff = parse_num(val, lineno);
        else if (key == "rescale_interval") cfg.rescale_interval = parse_num(val, lineno);
        else if (key == "sample_interval") cfg.sample_interval = parse_num(val, lineno);
        else if (key == "mode") cfg.mode = val;
        else if (key == "E") cfg.e_dip = parse_num(val, lineno);
        else if (key == "tau") cfg.tau = parse_num(val, lineno);
        else if (key == "tau0") cfg.tau0 = parse_num(val, lineno);
        else if (key == "t") cfg.t_eval = parse_num(val, lineno);
        else if (key == "trace_a") cfg.trace_a = val;
        else if (key == "trace_b") cfg.trace_b = val;
        else if (key == "sweep") cfg.sweep = val;
        else if (key == "values") cfg.sweep_values = split_list(val, lineno);
        else if (key == "out_dir") cfg.out_dir = val;
        else fail(lineno, "unknown key '" + key + "'");
    }
    return cfg;
}

RunConfig parse_config_file(const std::filesystem::path& p) {
    std::ifstream in(p);
    if (!in) throw config_error("cannot open config file: " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

void validate(const RunConfig& cfg) {
    const bool needs_geometry =
        cfg.engine == "quantum" || cfg.engine == "classical" || cfg.engine == "lyapunov";
    if (cfg.engine != "quantum" && cfg.engine != "classical" && cfg.engine != "lyapunov" &&
        cfg.engine != "twospin" && cfg.engine != "compare")
        throw config_error("engine must be quantum|classical|lyapunov|twospin|compare, got '" +
                           cfg.engine + "'");
    if (needs_geometry) {
        if (cfg.lattice.has_value() == cfg.coords.has_value())
            throw config_error("specify exactly one of lattice = [nx,ny,nz] or coords = [[..]..]");
        if (cfg.lattice) {
            const auto& l = *cfg.lattice;
            if (l[0] < 1 || l[1] < 1 || l[2] < 1)
                throw config_error("lattice dimensions must be >= 1");
        }
        if (cfg.p_d <= 0.0) throw config_error("p_d must be positive");
    }
    std::size_t n_sites = 0;
    if (cfg.lattice)
        n_sites = static_cast<std::size_t>((*cfg.lattice)[0]) * (*cfg.lattice)[1] * (*cfg.lattice)[2];
    if (cfg.coords) n_sites = cfg.coords->size();

    if (cfg.engine == "quantum") {
        if (n_sites > static_cast<std::size_t>(kMaxQuantumSpins))
            throw config_error("quantum engine caps at " + std::to_string(kMaxQuantumSpins) +
                               " spins; this geometry has " + std::to_string(n_sites) +
                               " (use the classical engine instead)");
        if (cfg.t_max <= 0.0) throw config_error("t_max must be positive");
    }
    if (cfg.engine == "classical" || cfg.engine == "lyapunov") {
        if (std::abs(cfg.s) > 1.0)
            throw config_error("polarization s must lie in [-1, 1], got " + fmt_double(cfg.s));
        if (cfg.init != "linear" && cfg.init != "random")
            throw config_error("init must be linear|random, got '" + cfg.init + "'");
        if (cfg.frame != "lab" && cfg.frame != "lab_secular" && cfg.frame != "rotating_secular")
            throw config_error("frame must be lab|lab_secular|rotating_secular");
    }
    if (cfg.engine == "classical" && cfg.t_max <= 0.0)
        throw config_error("t_max must be positive");
    if (cfg.engine == "lyapunov") {
        if (cfg.t_end <= cfg.transient_cutoff)
            throw config_error("t_end must exceed T_cutoff");
        if (cfg.rescale_interval <= 0.0 || cfg.sample_interval <= 0.0)
            throw config_error("rescale_interval and sample_interval must be positive");
    }
    if (cfg.engine == "twospin") {
        if (cfg.mode != "period" && cfg.mode != "c" && cfg.mode != "sx" && cfg.mode != "eigs")
            throw config_error("twospin mode must be period|c|sx|eigs, got '" + cfg.mode + "'");
    }
    if (cfg.engine == "compare") {
        if (cfg.trace_a.empty() || cfg.trace_b.empty())
            throw config_error("compare needs trace_a and trace_b paths");
    }
    if (cfg.dt_out <= 0.0) throw config_error("dt_out must be positive");
    if (cfg.zero_pad < 1) throw config_error("zero_pad must be >= 1");
    if (!cfg.sweep.empty()) {
        if (cfg.sweep != "p_d" && cfg.sweep != "s" && cfg.sweep != "seed" && cfg.sweep != "nx" &&
            cfg.sweep != "init")
            throw config_error("sweep must be one of p_d|s|seed|nx|init");
        if (cfg.sweep_values.empty()) throw config_error("sweep needs non-empty values = [..]");
    }
}

std::string canonical_text(const RunConfig& cfg) {
    std::map<std::string, std::string> kv;
    kv["engine"] = cfg.engine;
    if (cfg.lattice) {
        const auto& l = *cfg.lattice;
        kv["lattice"] = "[" + std::to_string(l[0]) + "," + std::to_string(l[1]) + "," +
                        std::to_string(l[2]) + "]";
    }
    if (cfg.coords) {
        std::string s = "[";
        for (std::size_t i = 0; i < cfg.coords->size(); ++i) {
            const auto& c = (*cfg.coords)[i];
            s += (i ? "," : "") + std::string("[") + std::to_string(c[0]) + "," +
                 std::to_string(c[1]) + "," + std::to_string(c[2]) + "]";
        }
        kv["coords"] = s + "]";
    }
    kv["p_d"] = fmt_double(cfg.p_d);
    kv["t_max"] = fmt_double(cfg.t_max);
    kv["dt_out"] = fmt_double(cfg.dt_out);
    kv["init"] = cfg.init;
    kv["s"] = fmt_double(cfg.s);
    kv["seed"] = std::to_string(cfg.seed);
    kv["frame"] = cfg.frame;
    kv["secular_only"] = cfg.secular_only ? "true" : "false";
    kv["dft"] = cfg.dft ? "true" : "false";
    kv["zero_pad"] = std::to_string(cfg.zero_pad);
    kv["fit"] = cfg.fit ? "true" : "false";
    kv["t_star"] = cfg.t_star ? "true" : "false";
    kv["t_end"] = fmt_double(cfg.t_end);
    kv["T_cutoff"] = fmt_double(cfg.transient_cutoff);
    kv["rescale_interval"] = fmt_double(cfg.rescale_interval);
    kv["sample_interval"] = fmt_double(cfg.sample_interval);
    if (!cfg.mode.empty()) kv["mode"] = cfg.mode;
    kv["E"] = fmt_double(cfg.e_dip);
    kv["tau"] = fmt_double(cfg.tau);
    kv["tau0"] = fmt_double(cfg.tau0);
    kv["t"] = fmt_double(cfg.t_eval);
    if (!cfg.trace_a.empty()) kv["trace_a"] = cfg.trace_a;
    if (!cfg.trace_b.empty()) kv["trace_b"] = cfg.trace_b;
    if (!cfg.sweep.empty()) {
        kv["sweep"] = cfg.sweep;
        std::string s = "[";
        for (std::size_t i = 0; i < cfg.sweep_values.size(); ++i)
            s += (i ? "," : "") + cfg.sweep_values[i];
        kv["values"] = s + "]";
    }
    std::string out;
    for (const auto& [k, v] : kv) out += k + " = " + v + "\n";
    return out;
}

std::string config_hash(const RunConfig& cfg) { return hex64(fnv1a64(canonical_text(cfg))); }

}  // namespace spindyn
