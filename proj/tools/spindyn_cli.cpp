#include <cstdio>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "spindyn/config.hpp"
#include "spindyn/errors.hpp"
#include "spindyn/io.hpp"
#include "spindyn/runner.hpp"
#include "spindyn/twospin.hpp"

namespace {

int guarded(int (*body)(const std::vector<std::string>&), const std::vector<std::string>& args) {
    try {
        return body(args);
    } catch (const spindyn::config_error& ex) {
        std::cerr << "config error: " << ex.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& ex) {
        std::cerr << "invalid argument: " << ex.what() << "\n";
        return 2;
    } catch (const std::domain_error& ex) {
        std::cerr << "domain error: " << ex.what() << "\n";
        return 2;
    } catch (const std::length_error& ex) {
        std::cerr << "resource limit: " << ex.what() << "\n";
        return 2;
    } catch (const spindyn::numerical_error& ex) {
        std::cerr << "numerical failure: " << ex.what() << "\n";
        return 3;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    }
}

int do_run(const std::vector<std::string>& args) {
    const auto cfg = spindyn::parse_config_file(args[0]);
    const auto out = spindyn::run_config(cfg);
    std::cout << out.stdout_line << "\n" << out.run_dir.string() << "\n";
    return 0;
}

int do_sweep(const std::vector<std::string>& args) {
    const auto cfg = spindyn::parse_config_file(args[0]);
    const auto summary = spindyn::sweep_config(cfg);
    std::cout << summary.string() << "\n";
    return 0;
}

int do_oracle(const std::vector<std::string>& args) {
    using namespace spindyn;
    const std::string& mode = args[0];
    auto need = [&](std::size_t n) {
        if (args.size() < n + 1)
            throw config_error("oracle twospin " + mode + " needs " + std::to_string(n) +
                               " numeric argument(s)");
    };
    if (mode == "period") {
        need(1);
        std::cout << fmt_double(twospin::period(std::stod(args[1]))) << "\n";
    } else if (mode == "c") {
        need(2);
        const double tau0 = args.size() > 3 ? std::stod(args[3]) : 0.0;
        std::cout << fmt_double(twospin::c_squared(std::stod(args[1]), std::stod(args[2]), tau0))
                  << "\n";
    } else if (mode == "sx") {
        need(2);
        std::cout << fmt_double(twospin::quantum_sx(std::stod(args[1]), std::stod(args[2])))
                  << "\n";
    } else if (mode == "eigs") {
        need(1);
        const auto eigs = twospin::two_spin_eigs(std::stod(args[1]));
        std::cout << "computed:";
        for (double e : eigs.computed) std::cout << ' ' << fmt_double(e);
        std::cout << "\nprinted_form:";
        for (double e : eigs.printed) std::cout << ' ' << fmt_double(e);
        std::cout << "\nalpha: " << fmt_double(eigs.alpha) << "\n";
    } else {
        throw config_error("unknown oracle mode '" + mode + "' (period|c|sx|eigs)");
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dipolar spin FID simulator: exact quantum and classical engines"};
    app.require_subcommand(1);

    std::string run_cfg, sweep_cfg;
    auto* run_cmd = app.add_subcommand("run", "execute one config file");
    run_cmd->add_option("config", run_cfg, "config file path")->required();

    auto* sweep_cmd = app.add_subcommand("sweep", "fan a swept parameter out over workers");
    sweep_cmd->add_option("config", sweep_cfg, "config file with sweep = <param>")->required();

    auto* oracle_cmd = app.add_subcommand("oracle", "closed-form two-spin values");
    std::string oracle_system;
    std::vector<std::string> oracle_args;
    oracle_cmd->add_option("system", oracle_system, "only 'twospin'")->required();
    oracle_cmd->add_option("args", oracle_args, "mode and numeric arguments")->expected(-1);

    CLI11_PARSE(app, argc, argv);

    if (run_cmd->parsed()) return guarded(do_run, {run_cfg});
    if (sweep_cmd->parsed()) return guarded(do_sweep, {sweep_cfg});
    if (oracle_cmd->parsed()) {
        if (oracle_system != "twospin") {
            std::cerr << "config error: unknown oracle system '" << oracle_system << "'\n";
            return 2;
        }
        if (oracle_args.empty()) {
            std::cerr << "config error: oracle twospin needs a mode (period|c|sx|eigs)\n";
            return 2;
        }
        return guarded(do_oracle, oracle_args);
    }
    return 2;
}
