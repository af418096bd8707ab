#include "spindyn/runner.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "spindyn/analysis.hpp"
#include "spindyn/chaos.hpp"
#include "spindyn/classical.hpp"
#include "spindyn/errors.hpp"
#include "spindyn/io.hpp"
#include "spindyn/quantum.hpp"
#include "spindyn/twospin.hpp"

namespace spindyn {

namespace {

using nlohmann::json;

SpinGeometry geometry_of(const RunConfig& cfg) {
    if (cfg.lattice) return SpinGeometry::cubic((*cfg.lattice)[0], (*cfg.lattice)[1], (*cfg.lattice)[2]);
    if (cfg.coords) return SpinGeometry::from_sites(*cfg.coords);
    throw config_error("engine '" + cfg.engine + "' needs a geometry");
}

Frame frame_of(const RunConfig& cfg) {
    if (cfg.frame == "lab") return Frame::lab;
    if (cfg.frame == "lab_secular") return Frame::lab_secular;
    return Frame::rotating_secular;
}

json stats_json(const ode::Stats& st) {
    return {{"accepted", st.accepted},
            {"rejected_error", st.rejected_error},
            {"rejected_norm", st.rejected_constraint},
            {"h_min", st.h_min_used},
            {"h_max", st.h_max_used},
            {"max_norm_dev", st.max_constraint_dev}};
}

// trace-level analyses shared by the quantum and classical paths
void analyze_trace(const RunConfig& cfg, const FidTrace& trace,
                   const std::filesystem::path& dir, json& metrics, json& outputs);

void add_output(const std::filesystem::path& dir, const std::string& name, json& outputs) {
    outputs.push_back({{"file", name}, {"fnv1a64", hex64(fnv1a64_file(dir / name))}});
}

json config_json(const RunConfig& cfg) {
    json j;
    std::istringstream in(canonical_text(cfg));
    std::string line;
    while (std::getline(in, line)) {
        const auto eq = line.find(" = ");
        j[line.substr(0, eq)] = line.substr(eq + 3);
    }
    return j;
}

void analyze_trace(const RunConfig& cfg, const FidTrace& trace,
                   const std::filesystem::path& dir, json& metrics, json& outputs) {
    const auto env = envelope(trace);
    if (cfg.t_star || cfg.fit) {
        const auto tz = first_zero(env, trace.t);
        const auto tb = first_minimum(env, trace.t);
        metrics["t_star"] = tz ? json(*tz) : json();
        metrics["t_star_beat"] = tb ? json(*tb) : json();
        if (cfg.fit) {
            const double ref = tz ? *tz : (tb ? *tb : trace.t.back() / 2.0);
            const auto fit = fit_abragam(env, trace.t, 0.0, 2.0 * ref);
            metrics["fit"] = {{"A", fit.amplitude},
                              {"a", fit.gauss_rate},
                              {"b", fit.sinc_rate},
                              {"residual_rms", fit.residual_rms},
                              {"window", {fit.window_lo, fit.window_hi}},
                              {"converged", fit.converged}};
            std::ofstream f(dir / "fit.json");
            f << metrics["fit"].dump(2) << '\n';
            f.close();
            add_output(dir, "fit.json", outputs);
        }
    }
    if (cfg.dft) {
        const auto spec = dft(trace.sx, trace.dt(), cfg.zero_pad);
        write_spectrum_csv(dir / "spectrum.csv", spec);
        add_output(dir, "spectrum.csv", outputs);
        metrics["spectral_resolution"] = spec.resolution;
        const auto info = doublet_info(spec);
        metrics["spectral_fwhm"] = info.fwhm;
    }
}

}  // namespace

RunOutcome run_config(const RunConfig& cfg) {
    validate(cfg);
    const auto t_start = std::chrono::steady_clock::now();

    const std::string hash = config_hash(cfg);
    const std::filesystem::path dir = std::filesystem::path(cfg.out_dir) / ("run-" + hash);
    std::filesystem::create_directories(dir);

    json metrics, outputs = json::array();
    std::string summary;

    if (cfg.engine == "quantum") {
        const SpinGeometry g = geometry_of(cfg);
        const TimeGrid grid = TimeGrid::up_to(cfg.t_max, cfg.dt_out);
        const EigenSystem es = diagonalize(build_hamiltonian(g, cfg.p_d, cfg.secular_only));
        const Eigen::VectorXcd c = es.project(initial_state_x(g.size()));
        const QuantumFidResult fid = evolve_expectations(es, c, g.size(), grid);
        write_trace_csv(dir / "trace.csv", fid.trace);
        add_output(dir, "trace.csv", outputs);
        write_eigs_csv(dir / "eigs.csv", es.energies());
        add_output(dir, "eigs.csv", outputs);
        metrics["max_imag_residue"] = fid.max_imag;
        analyze_trace(cfg, fid.trace, dir, metrics, outputs);
        summary = "quantum N=" + std::to_string(g.size());
    } else if (cfg.engine == "classical") {
        const SpinGeometry g = geometry_of(cfg);
        const TimeGrid grid = TimeGrid::up_to(cfg.t_max, cfg.dt_out);
        ClassicalState st = cfg.init == "linear" ? init_linear(g, cfg.s, cfg.seed)
                                                 : init_random(g, cfg.s, cfg.seed);
        const ClassicalFidResult res = integrate(g, std::move(st), cfg.p_d, grid, frame_of(cfg));
        write_trace_csv(dir / "trace.csv", res.trace);
        add_output(dir, "trace.csv", outputs);
        metrics["e_x0"] = res.trace.sx.front();
        metrics["steps"] = stats_json(res.stats);
        analyze_trace(cfg, res.trace, dir, metrics, outputs);
        summary = "classical N=" + std::to_string(g.size());
    } else if (cfg.engine == "lyapunov") {
        const SpinGeometry g = geometry_of(cfg);
        ClassicalState st = cfg.init == "linear" ? init_linear(g, cfg.s, cfg.seed)
                                                 : init_random(g, cfg.s, cfg.seed);
        LyapunovOptions opt;
        opt.t_end = cfg.t_end;
        opt.transient_cutoff = cfg.transient_cutoff;
        opt.rescale_interval = cfg.rescale_interval;
        opt.sample_interval = cfg.sample_interval;
        opt.frame = frame_of(cfg);
        const TangentState f0 = random_tangent(g.size(), cfg.seed ^ 0x9e3779b97f4a7c15ull);
        const LyapunovSeries series = lyapunov(g, std::move(st), f0, cfg.p_d, opt);
        write_lyapunov_csv(dir / "lyapunov.csv", series);
        add_output(dir, "lyapunov.csv", outputs);
        metrics["L_final"] = series.L_final;
        metrics["T_cutoff"] = series.transient_cutoff;
        metrics["steps"] = stats_json(series.stats);
        summary = "lyapunov N=" + std::to_string(g.size()) + " L(" + fmt_double(cfg.t_end) +
                  ") = " + fmt_double(series.L_final);
    } else if (cfg.engine == "twospin") {
        json oracle;
        if (cfg.mode == "period") {
            oracle["period"] = twospin::period(cfg.e_dip);
            summary = fmt_double(oracle["period"].get<double>());
        } else if (cfg.mode == "c") {
            oracle["c_squared"] = twospin::c_squared(cfg.e_dip, cfg.tau, cfg.tau0);
            summary = fmt_double(oracle["c_squared"].get<double>());
        } else if (cfg.mode == "sx") {
            oracle["sx"] = twospin::quantum_sx(cfg.t_eval, cfg.p_d);
            summary = fmt_double(oracle["sx"].get<double>());
        } else {
            const auto eigs = twospin::two_spin_eigs(cfg.p_d);
            oracle["computed"] = eigs.computed;
            oracle["printed_form"] = eigs.printed;
            oracle["alpha"] = eigs.alpha;
            summary = "alpha = " + fmt_double(eigs.alpha);
        }
        std::ofstream f(dir / "oracle.json");
        f << oracle.dump(2) << '\n';
        f.close();
        add_output(dir, "oracle.json", outputs);
        metrics = oracle;
    } else if (cfg.engine == "compare") {
        const FidTrace a = read_trace_csv(cfg.trace_a);
        const FidTrace b = read_trace_csv(cfg.trace_b);
        const CompareReport rep = compare(a, b, cfg.zero_pad);
        const json j = {{"t_split", rep.t_split},
                        {"max_before", rep.max_before},
                        {"rms_before", rep.rms_before},
                        {"max_after", rep.max_after},
                        {"rms_after", rep.rms_after},
                        {"width_a", rep.width_a},
                        {"width_b", rep.width_b}};
        std::ofstream f(dir / "compare.json");
        f << j.dump(2) << '\n';
        f.close();
        add_output(dir, "compare.json", outputs);
        metrics = j;
        summary = "compare max_after = " + fmt_double(rep.max_after);
    }

    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    json manifest = {{"artifact_version", kArtifactVersion},
                     {"config", config_json(cfg)},
                     {"config_hash", hash},
                     {"wall_seconds", wall},
                     {"metrics", metrics},
                     {"outputs", outputs}};
    {
        std::ofstream f(dir / "manifest.json");
        f << manifest.dump(2) << '\n';
    }

    RunOutcome out;
    out.run_dir = dir;
    out.manifest_json = manifest.dump(2);
    out.stdout_line = summary.empty() ? dir.string() : summary;
    return out;
}

std::filesystem::path sweep_config(const RunConfig& cfg) {
    validate(cfg);
    if (cfg.sweep.empty()) throw config_error("sweep requires 'sweep = <param>'");

    std::vector<RunConfig> runs;
    for (const auto& v : cfg.sweep_values) {
        RunConfig r = cfg;
        r.sweep.clear();
        r.sweep_values.clear();
        if (cfg.sweep == "p_d") r.p_d = std::stod(v);
        else if (cfg.sweep == "s") r.s = std::stod(v);
        else if (cfg.sweep == "seed") r.seed = static_cast<std::uint64_t>(std::stoull(v));
        else if (cfg.sweep == "nx") {
            if (!r.lattice) throw config_error("sweep = nx needs lattice = [nx,ny,nz]");
            (*r.lattice)[0] = std::stoi(v);
        } else if (cfg.sweep == "init") {
            r.init = v;
        }
        validate(r);
        runs.push_back(std::move(r));
    }

    unsigned workers = std::thread::hardware_concurrency();
    if (const char* env = std::getenv("SPINDYN_WORKERS")) {
        const int w = std::atoi(env);
        if (w >= 1) workers = static_cast<unsigned>(w);
    }
    workers = std::min<unsigned>(workers, static_cast<unsigned>(runs.size()));

    std::vector<RunOutcome> outcomes(runs.size());
    std::vector<std::string> errors(runs.size());
    std::mutex next_mtx;
    std::size_t next = 0;
    auto worker = [&]() {
        for (;;) {
            std::size_t i;
            {
                std::lock_guard<std::mutex> lock(next_mtx);
                if (next >= runs.size()) return;
                i = next++;
            }
            try {
                outcomes[i] = run_config(runs[i]);
            } catch (const std::exception& ex) {
                errors[i] = ex.what();
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();

    for (std::size_t i = 0; i < runs.size(); ++i)
        if (!errors[i].empty())
            throw numerical_error("sweep point " + cfg.sweep + " = " + cfg.sweep_values[i] +
                                  " failed: " + errors[i]);

    const std::filesystem::path summary_path =
        std::filesystem::path(cfg.out_dir) / ("sweep-" + config_hash(cfg) + ".csv");
    std::ofstream out(summary_path);
    out << cfg.sweep << ",run_dir,t_star,t_star_beat,L_final,fit_A,fit_a,fit_b\n";
    for (std::size_t i = 0; i < runs.size(); ++i) {
        const json m = json::parse(outcomes[i].manifest_json)["metrics"];
        auto field = [&](const char* k) -> std::string {
            if (!m.contains(k) || m[k].is_null()) return "";
            return fmt_double(m[k].get<double>());
        };
        std::string fit_a, fit_b, fit_amp;
        if (m.contains("fit")) {
            fit_amp = fmt_double(m["fit"]["A"].get<double>());
            fit_a = fmt_double(m["fit"]["a"].get<double>());
            fit_b = fmt_double(m["fit"]["b"].get<double>());
        }
        out << cfg.sweep_values[i] << ',' << outcomes[i].run_dir.filename().string() << ','
            << field("t_star") << ',' << field("t_star_beat") << ',' << field("L_final") << ','
            << fit_amp << ',' << fit_a << ',' << fit_b << '\n';
    }
    return summary_path;
}

}  // namespace spindyn
