#include "fvfp/runner.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <iostream>

namespace {

void add_overrides(CLI::App* cmd, fvfp::RunConfig& cfg, std::string& config_path) {
    cmd->add_option("-c,--config", config_path, "JSON config file");
    cmd->add_option("-p,--problem", cfg.problem, "builtin problem id");
    cmd->add_option("--scheme", cfg.scheme, "first|second|explicit");
    cmd->add_option("-n,--n", cfg.n, "1D cell count");
    cmd->add_option("--nx", cfg.nx, "2D cells in x");
    cmd->add_option("--ny", cfg.ny, "2D cells in y");
    cmd->add_option("--tau", cfg.tau, "time step or tau-rule coefficient");
    cmd->add_option("--tau-rule", cfg.tau_rule, "fixed|ch|ch2");
    cmd->add_option("--t-end", cfg.t_end, "final time");
    cmd->add_option("-o,--outdir", cfg.outdir, "output directory");
    cmd->add_option("--seed", cfg.seed, "fixture seed (schemes are deterministic)");
    cmd->add_flag(
        "--limiter,!--no-limiter",
        [&cfg](std::int64_t count) { cfg.limiter = count > 0; },
        "enable the positivity limiter");
}

// flags override config-file fields
fvfp::RunConfig merge(const fvfp::RunConfig& base, const fvfp::RunConfig& flags) {
    fvfp::RunConfig out = base;
    if (!flags.problem.empty()) out.problem = flags.problem;
    if (!flags.scheme.empty()) out.scheme = flags.scheme;
    if (flags.n > 0) out.n = flags.n;
    if (flags.nx > 0) out.nx = flags.nx;
    if (flags.ny > 0) out.ny = flags.ny;
    if (!flags.tau_rule.empty()) out.tau_rule = flags.tau_rule;
    if (flags.tau > 0.0) out.tau = flags.tau;
    if (flags.t_end > 0.0) out.t_end = flags.t_end;
    if (flags.limiter) out.limiter = flags.limiter;
    if (!flags.outdir.empty()) out.outdir = flags.outdir;
    if (!flags.levels.empty()) out.levels = flags.levels;
    if (flags.seed != 0) out.seed = flags.seed;
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Finite-volume solver for diffusion equations with interaction potentials"};
    app.require_subcommand(1);

    fvfp::RunConfig run_flags, conv_flags;
    std::string run_config_path, conv_config_path;

    CLI::App* run_cmd = app.add_subcommand("run", "execute one configured run");
    add_overrides(run_cmd, run_flags, run_config_path);

    CLI::App* conv_cmd = app.add_subcommand("converge", "grid-refinement convergence study");
    add_overrides(conv_cmd, conv_flags, conv_config_path);
    conv_cmd->add_option("--levels", conv_flags.levels, "cell counts, e.g. 40,80,160,320")
        ->delimiter(',');

    CLI::App* list_cmd = app.add_subcommand("list-problems", "show the builtin problem catalog");

    CLI11_PARSE(app, argc, argv);

    try {
        if (list_cmd->parsed()) {
            for (const fvfp::BuiltinProblem& p : fvfp::builtin_problems())
                std::printf("%-20s %s\n", p.id.c_str(), p.summary.c_str());
            return 0;
        }
        if (run_cmd->parsed()) {
            fvfp::RunConfig cfg = run_config_path.empty() ? fvfp::RunConfig{}
                                                          : fvfp::load_config(run_config_path);
            cfg = merge(cfg, run_flags);
            const fvfp::RunResult result = fvfp::run(cfg);
            std::printf("# %s\n", result.metadata.c_str());
            const fvfp::EnergyReport& last = result.energy.back();
            std::printf("finished: t=%.6g mass=%.12g energy=%.12g\n", last.time, last.mass,
                        last.energy);
            for (const std::string& w : result.warnings) std::fprintf(stderr, "warning: %s\n",
                                                                      w.c_str());
            return 0;
        }
        // converge
        fvfp::RunConfig cfg = conv_config_path.empty() ? fvfp::RunConfig{}
                                                       : fvfp::load_config(conv_config_path);
        cfg = merge(cfg, conv_flags);
        if (cfg.levels.empty())
            throw std::invalid_argument("converge: no refinement levels given (--levels)");
        const auto rows = fvfp::convergence_study(cfg, cfg.levels);
        const std::string label = "problem=" + cfg.problem;
        std::fputs(fvfp::format_convergence_table(rows).c_str(), stdout);
        if (!cfg.outdir.empty()) fvfp::write_convergence(rows, label, cfg.outdir);
        return 0;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
