#ifndef SEIQR_SCENARIO_HPP
#define SEIQR_SCENARIO_HPP

#include <chrono>

#include "fbs.hpp"

namespace seiqr
{

/// Uniform susceptible background with one seeded hotspot cell, where the
/// background density splits into S, E and I fractions.  Q and R start at
/// zero everywhere.
inline StateSnapshot build_initial_condition(const Grid& g, const InitialCondition& ic)
{
    StateSnapshot s(g);
    std::fill(s.S.begin(), s.S.end(), ic.background_s);
    const int k = g.index(ic.hotspot_ix, ic.hotspot_iy);
    s.S[k] = ic.background_s * ic.frac_s;
    s.E[k] = ic.background_s * ic.frac_e;
    s.I[k] = ic.background_s * ic.frac_i;
    return s;
}

/// Summary of one optimized intervention case.
struct CaseReport
{
    int case_id = 0;
    std::array<bool, 3> active = {false, false, false};
    CostBreakdown cost;
    int iterations = 0;
    bool converged = false;
    double wall_seconds = 0.0;
};

struct CaseResult
{
    CaseReport report;
    FbsResult fbs;
};

/// Runs the sweep for one scenario and wraps the outcome in a report.
inline CaseResult run_case(const ScenarioSpec& spec)
{
    spec.validate();
    const Grid g = Grid::from(spec.grid);
    const StateSnapshot ic = build_initial_condition(g, spec.ic);
    const auto t0 = std::chrono::steady_clock::now();
    CaseResult r;
    r.fbs = run_fbs(g, spec.params, spec.weights, ic, spec.active, spec.fbs,
                    spec.grid.dt, spec.grid.num_steps());
    const auto t1 = std::chrono::steady_clock::now();
    r.report.case_id = spec.case_id;
    r.report.active = spec.active;
    r.report.cost = r.fbs.cost;
    r.report.iterations = r.fbs.iterations;
    r.report.converged = r.fbs.converged;
    r.report.wall_seconds = std::chrono::duration<double>(t1 - t0).count();
    return r;
}

/// Runs the given cases (all eight when empty) of the base scenario.  Each
/// case differs only in its control mask.  Cases are independent and may
/// run concurrently; results come back ordered by case number.
inline std::vector<CaseResult> run_all_cases(const ScenarioSpec& base,
                                             std::vector<int> cases = {})
{
    if (cases.empty()) {
        cases = {1, 2, 3, 4, 5, 6, 7, 8};
    }
    std::vector<CaseResult> results(cases.size());
    parallel_for_n(static_cast<int>(cases.size()), [&](int k) {
        ScenarioSpec spec = base;
        spec.case_id = cases[k];
        spec.active = case_mask(cases[k]);
        results[k] = run_case(spec);
    });
    return results;
}

/// Feasible-set nesting: a case whose control set contains another case's
/// can never do worse at the same weights.  Returns one message per
/// violated inequality beyond the tolerance; empty means all hold.
inline std::vector<std::string> nesting_violations(const std::vector<CaseResult>& results,
                                                   double rel_tol = 1e-6)
{
    double J[9];
    bool seen[9] = {};
    for (const CaseResult& r : results) {
        const int id = r.report.case_id;
        if (id >= 1 && id <= 8) {
            J[id] = r.report.cost.total();
            seen[id] = true;
        }
    }
    // Supersets per case: every case that enables at least the same controls.
    static const std::pair<int, int> order[] = {
        {2, 1}, {3, 1}, {4, 1}, {5, 2}, {5, 3}, {6, 2}, {6, 4},
        {7, 3}, {7, 4}, {8, 5}, {8, 6}, {8, 7}, {8, 2}, {8, 3}, {8, 4}, {8, 1},
        {5, 1}, {6, 1}, {7, 1},
    };
    std::vector<std::string> bad;
    for (const auto& [big, small] : order) {
        if (!seen[big] || !seen[small]) continue;
        const double scale = std::max(std::abs(J[small]), 1e-300);
        if (J[big] > J[small] + rel_tol * scale) {
            bad.push_back("case " + std::to_string(big) + " (J=" + std::to_string(J[big]) +
                          ") exceeds case " + std::to_string(small) +
                          " (J=" + std::to_string(J[small]) + ")");
        }
    }
    return bad;
}

} // namespace seiqr

#endif
