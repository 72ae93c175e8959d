#include "fvfp/runner.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace fvfp {

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double min_width(const Grid1D& g) {
    return *std::min_element(g.widths.begin(), g.widths.end());
}

struct Schedule {
    double tau = 0.0;
    int steps = 0;
};

// round the requested step so an integer number of uniform steps hits t_end
Schedule make_schedule(const std::string& rule, double coeff, double h, double t_end) {
    if (!(coeff > 0.0)) throw std::invalid_argument("tau (or its coefficient) must be positive");
    if (!(t_end > 0.0)) throw std::invalid_argument("t_end must be positive");
    double requested;
    if (rule == "fixed")
        requested = coeff;
    else if (rule == "ch")
        requested = coeff * h;
    else if (rule == "ch2")
        requested = coeff * h * h;
    else
        throw std::invalid_argument("unknown tau_rule: " + rule + " (want fixed|ch|ch2)");
    Schedule s;
    s.steps = std::max(1, static_cast<int>(std::llround(t_end / requested)));
    s.tau = t_end / s.steps;
    return s;
}

void check_scheme(const std::string& scheme) {
    if (scheme != "first" && scheme != "second" && scheme != "explicit")
        throw std::invalid_argument("unknown scheme: " + scheme + " (want first|second|explicit)");
}

// snapshot step indices, deduplicated, keyed to requested times
std::vector<std::pair<int, double>> snapshot_steps(const std::vector<double>& times, double tau,
                                                   int steps, double t_end) {
    std::vector<std::pair<int, double>> out;
    std::set<int> seen;
    for (double t : times) {
        if (t < 0.0 || t > t_end * (1.0 + 1e-12))
            throw std::invalid_argument("snapshot time " + fmt17(t) + " outside [0, t_end]");
        const int idx = std::min<int>(steps, std::max<long long>(0, std::llround(t / tau)));
        if (seen.insert(idx).second) out.emplace_back(idx, t);
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

RunConfig config_from_json_text(const std::string& text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
    static const std::set<std::string> known = {
        "problem", "scheme", "n",     "nx",        "ny",     "widths", "tau_rule",
        "tau",     "t_end",  "limiter", "snapshots", "outdir", "levels", "seed"};
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!known.count(it.key()))
            throw std::invalid_argument("unknown config key: " + it.key());

    RunConfig cfg;
    cfg.problem = j.value("problem", std::string());
    cfg.scheme = j.value("scheme", std::string());
    cfg.n = j.value("n", 0);
    cfg.nx = j.value("nx", 0);
    cfg.ny = j.value("ny", 0);
    if (j.contains("widths")) cfg.widths = j.at("widths").get<std::vector<double>>();
    cfg.tau_rule = j.value("tau_rule", std::string());
    cfg.tau = j.value("tau", 0.0);
    cfg.t_end = j.value("t_end", 0.0);
    if (j.contains("limiter")) cfg.limiter = j.at("limiter").get<bool>();
    if (j.contains("snapshots")) cfg.snapshots = j.at("snapshots").get<std::vector<double>>();
    cfg.outdir = j.value("outdir", std::string());
    if (j.contains("levels")) cfg.levels = j.at("levels").get<std::vector<int>>();
    cfg.seed = j.value("seed", 0u);
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return config_from_json_text(ss.str());
}

namespace {

std::string metadata_line(const RunResult& r, const std::string& problem) {
    std::ostringstream os;
    os << "problem=" << problem << " scheme=" << r.scheme;
    if (r.two_d)
        os << " nx=" << r.grid2.nx() << " ny=" << r.grid2.ny();
    else
        os << " n=" << r.grid1.n();
    os << " tau=" << fmt17(r.tau) << " steps=" << r.steps << " t_end=" << fmt17(r.t_final)
       << " limiter=" << (r.limiter ? "on" : "off")
       << " self_term=" << (r.singular_self_term_skipped ? "skip" : "include");
    return os.str();
}

void warn_on_negatives(RunResult& result, int step, double raw_min, bool limiter) {
    if (!limiter)
        result.warnings.push_back("step " + std::to_string(step) +
                                  " produced negative cell averages (min " + fmt17(raw_min) +
                                  "); limiter is off");
}

RunResult run_1d(const RunConfig& cfg, const Problem1D& prob, const std::string& id) {
    const ProblemSpec1D& spec = prob.spec;
    validate_problem(spec);

    RunResult result;
    result.two_d = false;
    result.scheme = cfg.scheme.empty() ? prob.default_scheme : cfg.scheme;
    check_scheme(result.scheme);
    result.limiter = cfg.limiter.value_or(false);
    result.singular_self_term_skipped = singular_interaction(spec);

    if (!cfg.widths.empty())
        result.grid1 = build_grid_1d(spec.xmin, spec.xmax, cfg.widths);
    else
        result.grid1 = uniform_grid_1d(spec.xmin, spec.xmax, cfg.n > 0 ? cfg.n : prob.default_n);
    const Grid1D& grid = result.grid1;

    const std::string rule = cfg.tau_rule.empty() ? prob.default_tau_rule : cfg.tau_rule;
    const double coeff = cfg.tau > 0.0 ? cfg.tau : prob.default_tau;
    const double t_end = cfg.t_end > 0.0 ? cfg.t_end : prob.default_t_end;
    const Schedule sched = make_schedule(rule, coeff, min_width(grid), t_end);
    result.tau = sched.tau;
    result.steps = sched.steps;

    const std::vector<double>& snap_times =
        cfg.snapshots.empty() ? prob.default_snapshots : cfg.snapshots;
    const auto snaps = snapshot_steps(snap_times, sched.tau, sched.steps, t_end);
    std::size_t next_snap = 0;

    SolverState1D state;
    state.rho_curr = cell_average_init_1d(spec.rho0, grid);

    auto record = [&](double dissipation) {
        EnergyReport row;
        row.step_index = state.step_index;
        row.time = state.time;
        row.mass = total_mass(state.rho_curr, grid);
        row.energy = min_value(state.rho_curr) >= 0.0
                         ? discrete_energy_1d(state.rho_curr, grid, spec)
                         : std::nan("");
        row.dissipation = dissipation;
        result.energy.push_back(row);
    };
    record(0.0);
    if (next_snap < snaps.size() && snaps[next_snap].first == 0) {
        result.snapshots.push_back({0.0, snaps[next_snap].second, state.rho_curr});
        ++next_snap;
    }

    const StepOptions opts{result.limiter};
    for (int n = 0; n < sched.steps; ++n) {
        MobilityProfile mob;
        if (result.scheme == "second" && state.rho_prev)
            mob = mobility_profile_1d(grid, spec, state.rho_curr);
        const std::size_t repairs_before = state.repair_log.size();

        if (result.scheme == "explicit")
            step_explicit_euler_1d(state, grid, spec, sched.tau, opts, &mob);
        else if (result.scheme == "second" && state.rho_prev)
            step_second_order_1d(state, grid, spec, sched.tau, opts);
        else
            step_first_order_1d(state, grid, spec, sched.tau, opts, &mob);

        for (std::size_t r = repairs_before; r < state.repair_log.size(); ++r)
            if (state.repair_log[r].limiter.empty() && state.repair_log[r].clamped_cells == 0)
                warn_on_negatives(result, state.step_index, state.repair_log[r].min_before,
                                  result.limiter);
        if (result.scheme == "explicit" && min_value(state.rho_curr) < 0.0)
            warn_on_negatives(result, state.step_index, min_value(state.rho_curr), false);

        record(dissipation_1d(state.rho_curr, mob, grid));
        if (next_snap < snaps.size() && snaps[next_snap].first == state.step_index) {
            result.snapshots.push_back({state.time, snaps[next_snap].second, state.rho_curr});
            ++next_snap;
        }
    }

    result.final_state = state.rho_curr;
    result.t_final = state.time;
    result.repairs = state.repair_log;
    result.metadata = metadata_line(result, id);
    return result;
}

RunResult run_2d(const RunConfig& cfg, const Problem2D& prob, const std::string& id) {
    const ProblemSpec2D& spec = prob.spec;
    validate_problem(spec);

    RunResult result;
    result.two_d = true;
    result.scheme = cfg.scheme.empty() ? prob.default_scheme : cfg.scheme;
    check_scheme(result.scheme);
    if (result.scheme == "explicit")
        throw std::invalid_argument("explicit scheme is available in 1D only");
    result.limiter = cfg.limiter.value_or(false);
    result.singular_self_term_skipped = singular_interaction(spec);

    const int nx = cfg.nx > 0 ? cfg.nx : (cfg.n > 0 ? cfg.n : prob.default_nx);
    const int ny = cfg.ny > 0 ? cfg.ny : (cfg.n > 0 ? cfg.n : prob.default_ny);
    result.grid2 = uniform_grid_2d(spec.xmin, spec.xmax, nx, spec.ymin, spec.ymax, ny);
    const Grid2D& grid = result.grid2;

    const std::string rule = cfg.tau_rule.empty() ? prob.default_tau_rule : cfg.tau_rule;
    const double coeff = cfg.tau > 0.0 ? cfg.tau : prob.default_tau;
    const double t_end = cfg.t_end > 0.0 ? cfg.t_end : prob.default_t_end;
    const double h = std::min(min_width(grid.gx), min_width(grid.gy));
    const Schedule sched = make_schedule(rule, coeff, h, t_end);
    result.tau = sched.tau;
    result.steps = sched.steps;

    const std::vector<double>& snap_times =
        cfg.snapshots.empty() ? prob.default_snapshots : cfg.snapshots;
    const auto snaps = snapshot_steps(snap_times, sched.tau, sched.steps, t_end);
    std::size_t next_snap = 0;

    SolverState2D state;
    state.rho_curr = cell_average_init_2d(spec.rho0, grid);

    auto record = [&](double dissipation) {
        EnergyReport row;
        row.step_index = state.step_index;
        row.time = state.time;
        row.mass = total_mass(state.rho_curr, grid);
        row.energy = min_value(state.rho_curr) >= 0.0
                         ? discrete_energy_2d(state.rho_curr, grid, spec)
                         : std::nan("");
        row.dissipation = dissipation;
        result.energy.push_back(row);
    };
    record(0.0);
    if (next_snap < snaps.size() && snaps[next_snap].first == 0) {
        result.snapshots.push_back({0.0, snaps[next_snap].second, state.rho_curr});
        ++next_snap;
    }

    const StepOptions opts{result.limiter};
    for (int n = 0; n < sched.steps; ++n) {
        MobilityProfile2D mob;
        if (result.scheme == "second" && state.rho_prev)
            mob = mobility_profile_2d(grid, spec, state.rho_curr);
        const std::size_t repairs_before = state.repair_log.size();

        if (result.scheme == "second" && state.rho_prev)
            step_second_order_2d(state, grid, spec, sched.tau, opts);
        else
            step_first_order_2d(state, grid, spec, sched.tau, opts, &mob);

        for (std::size_t r = repairs_before; r < state.repair_log.size(); ++r)
            if (state.repair_log[r].limiter.empty() && state.repair_log[r].clamped_cells == 0)
                warn_on_negatives(result, state.step_index, state.repair_log[r].min_before,
                                  result.limiter);

        record(dissipation_2d(state.rho_curr, mob, grid));
        if (next_snap < snaps.size() && snaps[next_snap].first == state.step_index) {
            result.snapshots.push_back({state.time, snaps[next_snap].second, state.rho_curr});
            ++next_snap;
        }
    }

    result.final_state = state.rho_curr;
    result.t_final = state.time;
    result.repairs = state.repair_log;
    result.metadata = metadata_line(result, id);
    return result;
}

}  // namespace

RunResult run(const RunConfig& cfg) {
    if (cfg.problem.empty()) throw std::invalid_argument("config must name a problem");
    const BuiltinProblem& prob = find_problem(cfg.problem);
    RunResult result = prob.is_2d() ? run_2d(cfg, std::get<Problem2D>(prob.def), prob.id)
                                    : run_1d(cfg, std::get<Problem1D>(prob.def), prob.id);
    if (!cfg.outdir.empty()) emit_outputs(result, cfg.outdir);
    return result;
}

namespace {

void write_field_csv(const std::string& path, const std::string& meta, const RunResult& r,
                     const Field& field, double time, double requested) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "# " << meta << " time=" << fmt17(time) << " requested=" << fmt17(requested)
        << " columns=" << (r.two_d ? "x,y,rho" : "x,rho") << "\n";
    if (r.two_d) {
        const Grid2D& g = r.grid2;
        for (int j = 0; j < g.ny(); ++j)
            for (int i = 0; i < g.nx(); ++i)
                out << fmt17(g.gx.centers[i]) << ',' << fmt17(g.gy.centers[j]) << ','
                    << fmt17(field[g.index(i, j)]) << "\n";
    } else {
        for (int j = 0; j < r.grid1.n(); ++j)
            out << fmt17(r.grid1.centers[j]) << ',' << fmt17(field[j]) << "\n";
    }
}

}  // namespace

void emit_outputs(const RunResult& result, const std::string& outdir) {
    namespace fs = std::filesystem;
    fs::create_directories(outdir);
    const std::string meta = result.metadata;

    {
        std::ofstream out(fs::path(outdir) / "energy.csv", std::ios::binary);
        if (!out) throw std::runtime_error("cannot write energy.csv");
        out << "# " << meta << " columns=step,time,mass,energy,dissipation\n";
        for (const EnergyReport& e : result.energy)
            out << e.step_index << ',' << fmt17(e.time) << ',' << fmt17(e.mass) << ','
                << fmt17(e.energy) << ',' << fmt17(e.dissipation) << "\n";
    }
    {
        std::ofstream out(fs::path(outdir) / "limiter_log.csv", std::ios::binary);
        if (!out) throw std::runtime_error("cannot write limiter_log.csv");
        out << "# " << meta << " columns=step,anchor,set_size,theta,mass_before,mass_after\n";
        for (const StepRepairRecord& rec : result.repairs)
            for (const LimiterAction& a : rec.limiter)
                out << rec.step_index << ',' << a.anchor << ',' << a.set_size << ','
                    << fmt17(a.theta) << ',' << fmt17(a.mass_before) << ','
                    << fmt17(a.mass_after) << "\n";
    }
    for (std::size_t k = 0; k < result.snapshots.size(); ++k) {
        char name[32];
        std::snprintf(name, sizeof name, "snapshot_%02zu.csv", k);
        write_field_csv((fs::path(outdir) / name).string(), meta, result,
                        result.snapshots[k].field, result.snapshots[k].time,
                        result.snapshots[k].requested);
    }
    write_field_csv((fs::path(outdir) / "final_state.csv").string(), meta, result,
                    result.final_state, result.t_final, result.t_final);
}

namespace {

void fill_orders(std::vector<ConvergenceRow>& rows) {
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (i == 0) {
            rows[i].l1_order = std::nan("");
            rows[i].linf_order = std::nan("");
            continue;
        }
        const double ratio = std::log2(static_cast<double>(rows[i].n) / rows[i - 1].n);
        rows[i].l1_order = std::log2(rows[i - 1].l1 / rows[i].l1) / ratio;
        rows[i].linf_order = std::log2(rows[i - 1].linf / rows[i].linf) / ratio;
    }
}

int max_set_size(const std::vector<StepRepairRecord>& log) {
    int m = 0;
    for (const StepRepairRecord& rec : log)
        for (const LimiterAction& a : rec.limiter) m = std::max(m, a.set_size);
    return m;
}

}  // namespace

std::vector<ConvergenceRow> convergence_study_1d(
    const ProblemSpec1D& spec, const std::function<double(double, double)>& exact,
    const StudyParams& params, const std::vector<int>& levels,
    std::vector<int>* max_set_sizes) {
    if (!exact) throw std::invalid_argument("convergence_study_1d: exact solution required");
    check_scheme(params.scheme);
    validate_problem(spec);
    std::vector<ConvergenceRow> rows;
    if (max_set_sizes) max_set_sizes->clear();

    for (int n : levels) {
        const Grid1D grid = uniform_grid_1d(spec.xmin, spec.xmax, n);
        const Schedule sched =
            make_schedule(params.tau_rule, params.tau, grid.widths[0], params.t_end);
        SolverState1D state;
        state.rho_curr = cell_average_init_1d(spec.rho0, grid);
        const StepOptions opts{params.limiter};
        for (int s = 0; s < sched.steps; ++s) {
            if (params.scheme == "explicit")
                step_explicit_euler_1d(state, grid, spec, sched.tau, opts);
            else if (params.scheme == "second" && state.rho_prev)
                step_second_order_1d(state, grid, spec, sched.tau, opts);
            else
                step_first_order_1d(state, grid, spec, sched.tau, opts);
        }
        const Field ref = cell_average_init_1d(
            [&](double x) { return exact(x, state.time); }, grid);
        const ErrorNorms e = error_norms(state.rho_curr, ref, grid);
        rows.push_back({n, e.l1, 0.0, e.linf, 0.0});
        if (max_set_sizes) max_set_sizes->push_back(max_set_size(state.repair_log));
    }
    fill_orders(rows);
    return rows;
}

std::vector<ConvergenceRow> convergence_study_2d(
    const ProblemSpec2D& spec, const std::function<double(double, double, double)>& exact,
    const StudyParams& params, const std::vector<int>& levels,
    std::vector<int>* max_set_sizes) {
    if (!exact) throw std::invalid_argument("convergence_study_2d: exact solution required");
    check_scheme(params.scheme);
    if (params.scheme == "explicit")
        throw std::invalid_argument("explicit scheme is available in 1D only");
    validate_problem(spec);
    std::vector<ConvergenceRow> rows;
    if (max_set_sizes) max_set_sizes->clear();

    for (int n : levels) {
        const Grid2D grid = uniform_grid_2d(spec.xmin, spec.xmax, n, spec.ymin, spec.ymax, n);
        const double h = std::min(grid.gx.widths[0], grid.gy.widths[0]);
        const Schedule sched = make_schedule(params.tau_rule, params.tau, h, params.t_end);
        SolverState2D state;
        state.rho_curr = cell_average_init_2d(spec.rho0, grid);
        const StepOptions opts{params.limiter};
        for (int s = 0; s < sched.steps; ++s) {
            if (params.scheme == "second" && state.rho_prev)
                step_second_order_2d(state, grid, spec, sched.tau, opts);
            else
                step_first_order_2d(state, grid, spec, sched.tau, opts);
        }
        const Field ref = cell_average_init_2d(
            [&](double x, double y) { return exact(x, y, state.time); }, grid);
        const ErrorNorms e = error_norms(state.rho_curr, ref, grid);
        rows.push_back({n, e.l1, 0.0, e.linf, 0.0});
        if (max_set_sizes) max_set_sizes->push_back(max_set_size(state.repair_log));
    }
    fill_orders(rows);
    return rows;
}

std::vector<ConvergenceRow> convergence_study(const RunConfig& cfg,
                                              const std::vector<int>& levels) {
    if (cfg.problem.empty()) throw std::invalid_argument("config must name a problem");
    const BuiltinProblem& prob = find_problem(cfg.problem);
    StudyParams params;
    params.limiter = cfg.limiter.value_or(false);
    if (prob.is_2d()) {
        const Problem2D& p = std::get<Problem2D>(prob.def);
        params.scheme = cfg.scheme.empty() ? p.default_scheme : cfg.scheme;
        params.tau_rule = cfg.tau_rule.empty() ? p.default_tau_rule : cfg.tau_rule;
        params.tau = cfg.tau > 0.0 ? cfg.tau : p.default_tau;
        params.t_end = cfg.t_end > 0.0 ? cfg.t_end : p.default_t_end;
        return convergence_study_2d(p.spec, p.exact, params, levels);
    }
    const Problem1D& p = std::get<Problem1D>(prob.def);
    params.scheme = cfg.scheme.empty() ? p.default_scheme : cfg.scheme;
    params.tau_rule = cfg.tau_rule.empty() ? p.default_tau_rule : cfg.tau_rule;
    params.tau = cfg.tau > 0.0 ? cfg.tau : p.default_tau;
    params.t_end = cfg.t_end > 0.0 ? cfg.t_end : p.default_t_end;
    return convergence_study_1d(p.spec, p.exact, params, levels);
}

std::string format_convergence_table(const std::vector<ConvergenceRow>& rows) {
    std::ostringstream os;
    char line[160];
    std::snprintf(line, sizeof line, "%8s %14s %9s %14s %9s\n", "N", "l1", "order", "linf",
                  "order");
    os << line;
    for (const ConvergenceRow& r : rows) {
        char l1o[16] = "-", lio[16] = "-";
        if (!std::isnan(r.l1_order)) std::snprintf(l1o, sizeof l1o, "%.4f", r.l1_order);
        if (!std::isnan(r.linf_order)) std::snprintf(lio, sizeof lio, "%.4f", r.linf_order);
        std::snprintf(line, sizeof line, "%8d %14.6e %9s %14.6e %9s\n", r.n, r.l1, l1o, r.linf,
                      lio);
        os << line;
    }
    return os.str();
}

void write_convergence(const std::vector<ConvergenceRow>& rows, const std::string& label,
                       const std::string& outdir) {
    namespace fs = std::filesystem;
    fs::create_directories(outdir);
    {
        std::ofstream out(fs::path(outdir) / "convergence.csv", std::ios::binary);
        if (!out) throw std::runtime_error("cannot write convergence.csv");
        out << "# " << label << " columns=n,l1,l1_order,linf,linf_order\n";
        for (const ConvergenceRow& r : rows) {
            out << r.n << ',' << fmt17(r.l1) << ',';
            if (!std::isnan(r.l1_order)) out << fmt17(r.l1_order);
            out << ',' << fmt17(r.linf) << ',';
            if (!std::isnan(r.linf_order)) out << fmt17(r.linf_order);
            out << "\n";
        }
    }
    std::ofstream out(fs::path(outdir) / "convergence.txt", std::ios::binary);
    if (!out) throw std::runtime_error("cannot write convergence.txt");
    out << "# " << label << "\n" << format_convergence_table(rows);
}

}  // namespace fvfp
