#include <CLI11.hpp>
#include <fmt/format.h>

#include <fstream>
#include <iostream>

#include "hyqmom/cli_harness.hpp"
#include "hyqmom/errors.hpp"
#include "hyqmom/qmom_diagnostics.hpp"

using namespace hyqmom;

int main(int argc, char** argv) {
    CLI::App app{"HyQMOM moment closure and Lax-Wendroff DG solver"};
    app.require_subcommand(1);

    // run
    auto* run_cmd = app.add_subcommand("run", "run one simulation and write profile, limiter log and metadata");
    std::string config_path;
    std::vector<std::string> overrides;
    std::string problem, pipeline, limiters, output;
    int order = 0, nelem = 0;
    double cfl = -1.0, eps = -1.0, t_final = -1.0, a0 = -1.0;
    run_cmd->add_option("--config", config_path, "key=value config file");
    run_cmd->add_option("--problem", problem, "smooth|shock1|shock2|vacuum|bgk_sod|manufactured");
    run_cmd->add_option("--pipeline", pipeline, "dg|rusanov");
    run_cmd->add_option("--order", order, "scheme order M_O (1-4)");
    run_cmd->add_option("--nelem", nelem, "number of elements");
    run_cmd->add_option("--cfl", cfl, "CFL number (0 = order default)");
    run_cmd->add_option("--limiters", limiters, "on|off for all four limiters");
    run_cmd->add_option("--eps", eps, "Knudsen number");
    run_cmd->add_option("--t-final", t_final, "final time");
    run_cmd->add_option("--a0", a0, "oscillation limiter bound factor");
    run_cmd->add_option("--output", output, "output directory");
    run_cmd->add_option("--set", overrides, "extra key=value overrides");

    // converge
    auto* conv_cmd = app.add_subcommand("converge", "convergence study on a problem with exact solution");
    std::string c_problem = "smooth", c_limiters = "off", c_csv;
    std::vector<int> c_orders{2, 3, 4};
    int c_levels = 6, c_base = 10;
    double c_eps = 1.0;
    conv_cmd->add_option("--problem", c_problem, "smooth|manufactured");
    conv_cmd->add_option("--order", c_orders, "orders to run")->expected(1, -1);
    conv_cmd->add_option("--levels", c_levels, "number of resolutions N = base * 2^l");
    conv_cmd->add_option("--base", c_base, "coarsest N");
    conv_cmd->add_option("--limiters", c_limiters, "on|off");
    conv_cmd->add_option("--eps", c_eps, "Knudsen number (manufactured)");
    conv_cmd->add_option("--csv", c_csv, "write the table as CSV to this file");

    // qmom-report
    auto* rep_cmd = app.add_subcommand("qmom-report", "weak hyperbolicity diagnostics on random Dirac quadratures");
    int r_count = 100;
    std::uint64_t r_seed = 1;
    rep_cmd->add_option("--count", r_count, "quadratures per N");
    rep_cmd->add_option("--seed", r_seed, "random seed");

    // positivity-fuzz
    auto* fuzz_cmd = app.add_subcommand("positivity-fuzz", "randomized Rusanov positivity trials");
    long f_trials = 1000000;
    double f_cfl = 0.99;
    unsigned long f_seed = 1;
    fuzz_cmd->add_option("--trials", f_trials, "number of trials");
    fuzz_cmd->add_option("--cfl", f_cfl, "CFL number");
    fuzz_cmd->add_option("--seed", f_seed, "random seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run_cmd) {
            RunConfig cfg;
            if (!config_path.empty()) cfg = load_config(config_path, cfg);
            if (!problem.empty()) cfg.set("problem", problem);
            if (!pipeline.empty()) cfg.set("pipeline", pipeline);
            if (order > 0) cfg.order = order;
            if (nelem > 0) cfg.n_elem = nelem;
            if (cfl >= 0.0) cfg.cfl = cfl;
            if (!limiters.empty()) cfg.set("limiters", limiters);
            if (eps >= 0.0) cfg.knudsen = eps;
            if (t_final >= 0.0) cfg.t_final = t_final;
            if (a0 >= 0.0) cfg.set("a0", fmt::format("{:.17g}", a0));
            if (!output.empty()) cfg.output_dir = output;
            for (const auto& kv : overrides) {
                const auto p = kv.find('=');
                if (p == std::string::npos) throw std::invalid_argument("--set expects key=value, got '" + kv + "'");
                cfg.set(kv.substr(0, p), kv.substr(p + 1));
            }
            const RunResult r = run(cfg);
            fmt::print("steps={} final_time={:.6g} wall={:.2f}s\n", r.steps, r.final_time, r.wall_seconds);
            fmt::print("limiter activity: I={} II={} (fallback {}) III={} IV={}\n", r.activity.prediction,
                       r.activity.mean_faces, r.activity.mean_fallback, r.activity.correction, r.activity.oscillation);
            for (const auto& a : r.artifacts) fmt::print("wrote {}\n", a);
            if (r.exit_code != 0) fmt::print(stderr, "fatal: {}\n", r.message);
            return r.exit_code;
        }
        if (*conv_cmd) {
            LimiterConfig lim = (c_limiters == "on") ? LimiterConfig{} : LimiterConfig::all_off();
            const ProblemSpec p = make_problem(c_problem, c_eps);
            std::vector<int> ns;
            for (int l = 0; l < c_levels; ++l) ns.push_back(c_base << l);
            std::string csv;
            for (int o : c_orders) {
                const auto rows = convergence_study(p, o, ns, lim, c_eps);
                fmt::print("{}\n", format_convergence_text(rows, o));
                std::string block = format_convergence_csv(rows, o);
                if (!csv.empty()) block = block.substr(block.find('\n') + 1);
                csv += block;
            }
            if (!c_csv.empty()) {
                std::ofstream f(c_csv);
                if (!f) throw std::runtime_error("cannot write '" + c_csv + "'");
                f << csv;
            }
            return 0;
        }
        if (*rep_cmd) {
            fmt::print("{}", qmom_report(r_count, r_seed));
            return 0;
        }
        if (*fuzz_cmd) {
            const FuzzResult r = positivity_fuzz(f_trials, f_cfl, f_seed);
            fmt::print("trials={} violations={} rejected={}\n", r.trials, r.violations, r.rejected);
            return 0;
        }
    } catch (const std::exception& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return 1;
    }
    return 0;
}
