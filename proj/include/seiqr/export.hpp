#ifndef SEIQR_EXPORT_HPP
#define SEIQR_EXPORT_HPP

#include <algorithm>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <string>

#include "config.hpp"
#include "scenario.hpp"

namespace seiqr
{

constexpr const char* kVersion = "1.0.0";

namespace detail
{

/// Fixed-precision, locale-independent number formatting for CSV output.
/// Identical inputs always produce identical bytes.
inline std::string csv_num(double v, int precision = 17)
{
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.*g", precision, v);
    return buf;
}

inline std::ofstream open_out(const std::string& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open output file " + path);
    }
    return out;
}

} // namespace detail

/// Per-step compartment totals: t, the five domain integrals and their sum.
inline void write_state_series_csv(const std::string& path, const Grid& g,
                                   const StateTrajectory& states)
{
    auto out = detail::open_out(path);
    out << "t,S,E,I,Q,R,N\n";
    for (int n = 0; n <= states.num_steps(); ++n) {
        const StateSnapshot& s = states.snaps[n];
        double totals[kNumCompartments];
        double N = 0.0;
        for (int c = 0; c < kNumCompartments; ++c) {
            totals[c] = integrate_domain(g, s.comp(c));
            N += totals[c];
        }
        out << detail::csv_num(n * states.dt);
        for (int c = 0; c < kNumCompartments; ++c) out << ',' << detail::csv_num(totals[c]);
        out << ',' << detail::csv_num(N) << '\n';
    }
}

/// Objective history of one optimization run, one row per sweep iteration.
inline void write_history_csv(const std::string& path,
                              const std::vector<FbsIterRecord>& history)
{
    auto out = detail::open_out(path);
    out << "iter,J,running_disease,running_control,terminal_disease,terminal_control,"
           "control_change,accepted\n";
    for (const FbsIterRecord& r : history) {
        out << r.iter
            << ',' << detail::csv_num(r.cost.total())
            << ',' << detail::csv_num(r.cost.running_disease)
            << ',' << detail::csv_num(r.cost.running_control)
            << ',' << detail::csv_num(r.cost.terminal_disease)
            << ',' << detail::csv_num(r.cost.terminal_control)
            << ',' << detail::csv_num(r.control_change)
            << ',' << (r.accepted ? 1 : 0) << '\n';
    }
}

/// Comparison table across cases, one row per case.
inline void write_compare_csv(const std::string& path,
                              const std::vector<CaseResult>& results)
{
    auto out = detail::open_out(path);
    out << "case,active_u1,active_u2,active_u3,J,running_disease,running_control,"
           "terminal_disease,terminal_control,iterations,converged\n";
    for (const CaseResult& r : results) {
        const CaseReport& c = r.report;
        out << c.case_id
            << ',' << (c.active[0] ? 1 : 0)
            << ',' << (c.active[1] ? 1 : 0)
            << ',' << (c.active[2] ? 1 : 0)
            << ',' << detail::csv_num(c.cost.total())
            << ',' << detail::csv_num(c.cost.running_disease)
            << ',' << detail::csv_num(c.cost.running_control)
            << ',' << detail::csv_num(c.cost.terminal_disease)
            << ',' << detail::csv_num(c.cost.terminal_control)
            << ',' << c.iterations
            << ',' << (c.converged ? 1 : 0) << '\n';
    }
}

/// One control channel over time: each row holds t followed by the nx * ny
/// cell values in row-major order.
inline void write_control_fields_csv(const std::string& path, double dt,
                                     const std::vector<Field>& channel)
{
    auto out = detail::open_out(path);
    for (std::size_t n = 0; n < channel.size(); ++n) {
        out << detail::csv_num(n * dt);
        for (double v : channel[n]) out << ',' << detail::csv_num(v, 10);
        out << '\n';
    }
}

/// One field as an ny by nx matrix, row j = 0 first.
inline void write_field_csv(const std::string& path, const Grid& g, const Field& f)
{
    auto out = detail::open_out(path);
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            if (i) out << ',';
            out << detail::csv_num(f[g.index(i, j)]);
        }
        out << '\n';
    }
}

/// 16-bit ASCII PGM heatmap with linear scaling between the field extremes
/// (or the given bounds).  File row 0 is grid row j = 0.  A sidecar
/// "<path>.scale.txt" records the mapping so pixel values can be converted
/// back to densities.  A constant field renders as all zeros.
inline void export_heatmap(const std::string& path, const Grid& g, const Field& f,
                           double vmin = 0.0, double vmax = -1.0)
{
    if (!(vmin < vmax)) {
        vmin = *std::min_element(f.begin(), f.end());
        vmax = *std::max_element(f.begin(), f.end());
    }
    const double span = vmax - vmin;
    const int maxval = 65535;

    auto out = detail::open_out(path);
    out << "P2\n" << g.nx << ' ' << g.ny << '\n' << maxval << '\n';
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            int pix = 0;
            if (span > 0.0) {
                const double t = (f[g.index(i, j)] - vmin) / span;
                pix = static_cast<int>(std::lround(t * maxval));
                pix = std::min(maxval, std::max(0, pix));
            }
            out << pix << (i + 1 < g.nx ? ' ' : '\n');
        }
    }

    auto side = detail::open_out(path + ".scale.txt");
    side << "min = " << detail::csv_num(vmin) << '\n'
         << "max = " << detail::csv_num(vmax) << '\n'
         << "maxval = " << maxval << '\n'
         << "nx = " << g.nx << '\n'
         << "ny = " << g.ny << '\n';
}

/// Everything needed to rerun a result: tool version, timestamp, the
/// canonical config text and its hash, solver settings and per-case
/// summaries.
struct RunManifest
{
    std::string command;
    ScenarioSpec spec;
    std::vector<CaseReport> reports;
    std::vector<std::string> warnings;
};

inline void write_manifest(const std::string& path, const RunManifest& m)
{
    const std::string config = serialize_config(m.spec);
    auto out = detail::open_out(path);
    out << "tool = seiqr " << kVersion << '\n';
    std::time_t now = std::time(nullptr);
    char stamp[32];
    std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    out << "created_utc = " << stamp << '\n';
    out << "command = " << m.command << '\n';
    out << "config_hash = fnv1a:" << fnv1a_hex(config) << '\n';
    out << "threads = " << thread_budget() << '\n';
    for (const CaseReport& r : m.reports) {
        out << "case " << r.case_id
            << ": J = " << detail::csv_num(r.cost.total())
            << ", running_disease = " << detail::csv_num(r.cost.running_disease)
            << ", running_control = " << detail::csv_num(r.cost.running_control)
            << ", terminal_disease = " << detail::csv_num(r.cost.terminal_disease)
            << ", terminal_control = " << detail::csv_num(r.cost.terminal_control)
            << ", iterations = " << r.iterations
            << ", converged = " << (r.converged ? 1 : 0)
            << ", wall_seconds = " << detail::csv_num(r.wall_seconds, 4) << '\n';
    }
    for (const std::string& wmsg : m.warnings) {
        out << "warning = " << wmsg << '\n';
    }
    out << "[config]\n" << config;
}

} // namespace seiqr

#endif
