// Command line driver: forward simulation, single-case optimization,
// multi-case comparison and heatmap export for the controlled
// reaction-diffusion epidemic model.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <seiqr/export.hpp>

namespace fs = std::filesystem;
using namespace seiqr;

namespace
{

struct CommonArgs
{
    std::string config_path;
    std::string out_dir = "seiqr_out";
    std::optional<int> case_id;
    std::optional<double> omega;
    std::optional<int> max_iter;
    std::optional<std::string> sign;
    std::vector<double> snapshot_times;
};

void add_common(CLI::App* cmd, CommonArgs& a)
{
    cmd->add_option("--config", a.config_path, "scenario config file (key = value sections)");
    cmd->add_option("--out", a.out_dir, "output directory");
    cmd->add_option("--case", a.case_id, "intervention case 1..8, overrides the config")
        ->check(CLI::Range(1, 8));
    cmd->add_option("--omega", a.omega, "sweep relaxation weight in (0, 1]");
    cmd->add_option("--max-iter", a.max_iter, "sweep iteration cap");
    cmd->add_option("--sign", a.sign, "adjoint sign convention")
        ->check(CLI::IsMember({"paper", "duality"}));
    cmd->add_option("--snapshot-times", a.snapshot_times,
                    "times whose fields are rendered as heatmaps")
        ->delimiter(',');
}

ScenarioSpec make_spec(const CommonArgs& a)
{
    ScenarioSpec spec = a.config_path.empty()
        ? default_paper_scenario(1)
        : load_config(a.config_path);
    if (a.case_id) {
        spec.case_id = *a.case_id;
        spec.active = case_mask(*a.case_id);
    }
    if (a.omega) spec.fbs.omega = *a.omega;
    if (a.max_iter) spec.fbs.max_iter = *a.max_iter;
    if (a.sign) {
        spec.fbs.sign = (*a.sign == "paper") ? SignConvention::paper
                                             : SignConvention::duality;
    }
    spec.validate();
    return spec;
}

/// Maps a requested time to its step index; the time must land on the grid.
int snapshot_index(double t, double dt, int nt)
{
    const int n = static_cast<int>(std::lround(t / dt));
    if (n < 0 || n > nt || std::abs(n * dt - t) > 1e-9 * std::max(1.0, t)) {
        throw std::runtime_error(
            "snapshot time " + std::to_string(t) + " does not land on a step in [0, T]");
    }
    return n;
}

std::string time_tag(double t)
{
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", t);
    std::string s = buf;
    for (char& c : s) {
        if (c == '.') c = 'p';
    }
    return s;
}

void write_snapshot_heatmaps(const std::string& dir, const Grid& g,
                             const StateTrajectory& states,
                             const std::vector<double>& times, bool with_csv)
{
    for (double t : times) {
        const int n = snapshot_index(t, states.dt, states.num_steps());
        for (int c = 0; c < kNumCompartments; ++c) {
            const std::string base = dir + "/state_" + compartment_name(c)
                                   + "_t" + time_tag(t);
            export_heatmap(base + ".pgm", g, states.snaps[n].comp(c));
            if (with_csv) {
                write_field_csv(base + ".csv", g, states.snaps[n].comp(c));
            }
        }
    }
}

int cmd_simulate(const CommonArgs& a)
{
    const ScenarioSpec spec = make_spec(a);
    const Grid g = Grid::from(spec.grid);
    fs::create_directories(a.out_dir);

    const StateSnapshot ic = build_initial_condition(g, spec.ic);
    const ControlTrajectory u = zero_controls(g, spec.grid.dt, spec.grid.num_steps());
    const StateTrajectory states =
        solve_forward(g, spec.params, ic, u, spec.grid.dt, spec.grid.num_steps());

    write_state_series_csv(a.out_dir + "/states.csv", g, states);
    write_snapshot_heatmaps(a.out_dir, g, states, a.snapshot_times, false);
    write_manifest(a.out_dir + "/manifest.txt", {"simulate", spec, {}, {}});

    const StateSnapshot& sT = states.snaps.back();
    std::cout << "simulated " << spec.grid.num_steps() << " steps; final totals:"
              << " S=" << integrate_domain(g, sT.S)
              << " E=" << integrate_domain(g, sT.E)
              << " I=" << integrate_domain(g, sT.I)
              << " Q=" << integrate_domain(g, sT.Q)
              << " R=" << integrate_domain(g, sT.R) << "\n";
    std::cout << "wrote " << a.out_dir << "/states.csv\n";
    return 0;
}

int cmd_optimize(const CommonArgs& a)
{
    const ScenarioSpec spec = make_spec(a);
    const Grid g = Grid::from(spec.grid);
    fs::create_directories(a.out_dir);

    const CaseResult r = run_case(spec);
    write_history_csv(a.out_dir + "/history.csv", r.fbs.history);
    write_state_series_csv(a.out_dir + "/states.csv", g, r.fbs.states);
    write_control_fields_csv(a.out_dir + "/controls_u1.csv", spec.grid.dt, r.fbs.controls.u1);
    write_control_fields_csv(a.out_dir + "/controls_u2.csv", spec.grid.dt, r.fbs.controls.u2);
    write_control_fields_csv(a.out_dir + "/controls_u3.csv", spec.grid.dt, r.fbs.controls.u3);
    write_snapshot_heatmaps(a.out_dir, g, r.fbs.states, a.snapshot_times, false);
    write_manifest(a.out_dir + "/manifest.txt", {"optimize", spec, {r.report}, {}});

    std::cout << "case " << spec.case_id << ": J = " << r.report.cost.total()
              << " after " << r.report.iterations << " iterations"
              << (r.report.converged ? "" : " (not converged)") << "\n";
    std::cout << "wrote " << a.out_dir << "/history.csv\n";
    return 0;
}

int cmd_compare(const CommonArgs& a)
{
    const ScenarioSpec spec = make_spec(a);
    fs::create_directories(a.out_dir);

    std::vector<int> cases;
    if (a.case_id) cases.push_back(*a.case_id);
    const std::vector<CaseResult> results = run_all_cases(spec, cases);

    write_compare_csv(a.out_dir + "/compare.csv", results);
    RunManifest m{"compare", spec, {}, nesting_violations(results)};
    for (const CaseResult& r : results) m.reports.push_back(r.report);
    write_manifest(a.out_dir + "/manifest.txt", m);

    std::printf("%4s %8s %14s %10s %s\n", "case", "controls", "J", "iters", "converged");
    for (const CaseResult& r : results) {
        const CaseReport& c = r.report;
        std::printf("%4d %d%d%d      %14.4f %10d %s\n", c.case_id,
                    c.active[0], c.active[1], c.active[2],
                    c.cost.total(), c.iterations, c.converged ? "yes" : "no");
    }
    for (const std::string& w : m.warnings) {
        std::cerr << "warning: nesting violated: " << w << "\n";
    }
    std::cout << "wrote " << a.out_dir << "/compare.csv\n";
    return m.warnings.empty() ? 0 : 2;
}

int cmd_export(const CommonArgs& a)
{
    if (a.snapshot_times.empty()) {
        throw std::runtime_error("export requires --snapshot-times");
    }
    const ScenarioSpec spec = make_spec(a);
    const Grid g = Grid::from(spec.grid);
    fs::create_directories(a.out_dir);

    const StateSnapshot ic = build_initial_condition(g, spec.ic);
    const ControlTrajectory u = zero_controls(g, spec.grid.dt, spec.grid.num_steps());
    const StateTrajectory states =
        solve_forward(g, spec.params, ic, u, spec.grid.dt, spec.grid.num_steps());

    write_snapshot_heatmaps(a.out_dir, g, states, a.snapshot_times, true);
    write_manifest(a.out_dir + "/manifest.txt", {"export", spec, {}, {}});
    std::cout << "wrote heatmaps for " << a.snapshot_times.size()
              << " times to " << a.out_dir << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Spatiotemporal epidemic control: forward solves, "
                 "adjoint-based optimization and case comparison"};
    app.require_subcommand(1);

    CommonArgs sim_args, opt_args, cmp_args, exp_args;
    CLI::App* sim = app.add_subcommand("simulate", "forward solve without controls");
    add_common(sim, sim_args);
    CLI::App* opt = app.add_subcommand("optimize", "optimize one intervention case");
    add_common(opt, opt_args);
    CLI::App* cmp = app.add_subcommand("compare", "optimize and compare intervention cases");
    add_common(cmp, cmp_args);
    CLI::App* exp = app.add_subcommand("export", "render field heatmaps from a forward solve");
    add_common(exp, exp_args);

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) return cmd_simulate(sim_args);
        if (opt->parsed()) return cmd_optimize(opt_args);
        if (cmp->parsed()) return cmd_compare(cmp_args);
        if (exp->parsed()) return cmd_export(exp_args);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
