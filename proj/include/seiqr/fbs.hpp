#ifndef SEIQR_FBS_HPP
#define SEIQR_FBS_HPP

#include <limits>

#include "sensitivity.hpp"

namespace seiqr
{

/// Bang-bang control target at one time level: 1 where the switching
/// function is nonpositive, 0 where it is positive, 0 on inactive channels.
inline void bang_bang_update(const SwitchingFields& phi,
                             const std::array<bool, 3>& active,
                             Field& u1, Field& u2, Field& u3)
{
    const std::size_t n = phi.phi1.size();
    u1.assign(n, 0.0);
    u2.assign(n, 0.0);
    u3.assign(n, 0.0);
    if (active[0]) {
        for (std::size_t k = 0; k < n; ++k) u1[k] = (phi.phi1[k] <= 0.0) ? 1.0 : 0.0;
    }
    if (active[1]) {
        for (std::size_t k = 0; k < n; ++k) u2[k] = (phi.phi2[k] <= 0.0) ? 1.0 : 0.0;
    }
    if (active[2]) {
        for (std::size_t k = 0; k < n; ++k) u3[k] = (phi.phi3[k] <= 0.0) ? 1.0 : 0.0;
    }
}

/// Relaxed update u_new = (1 - omega) u_old + omega u_target, clamped to
/// the admissible box.  A convex combination of admissible controls is
/// admissible; the clamp only absorbs roundoff.
inline void relax_controls(const Field& u_old, const Field& u_target, double omega,
                           Field& u_new)
{
    u_new.resize(u_old.size());
    for (std::size_t k = 0; k < u_old.size(); ++k) {
        const double v = (1.0 - omega) * u_old[k] + omega * u_target[k];
        u_new[k] = std::min(1.0, std::max(0.0, v));
    }
}

/// One iteration record of the sweep.
struct FbsIterRecord
{
    int iter = 0;
    CostBreakdown cost;
    double control_change = 0.0;  ///< relative L2 change of the previous update
    bool accepted = false;        ///< true when this iterate became the best
};

/// Result of the forward-backward sweep.  The returned controls, states,
/// adjoints and cost belong to the best iterate seen, which need not be
/// the last one.  final_controls holds the iterate after the last
/// relaxation update; when the sweep stopped because the update left the
/// controls unchanged, it is a fixed point of the relaxed update map.
struct FbsResult
{
    ControlTrajectory controls;
    ControlTrajectory final_controls;
    StateTrajectory states;
    AdjointTrajectory adjoints;
    CostBreakdown cost;
    std::vector<FbsIterRecord> history;
    int iterations = 0;
    bool converged = false;
    long long forward_cg_iterations = 0;
    long long adjoint_cg_iterations = 0;
};

/// Forward-backward sweep with relaxation.
///
/// Each iteration solves the forward system, evaluates the objective,
/// solves the adjoint system along the iterate, forms the switching
/// functions level by level, and relaxes the controls toward the bang-bang
/// target on the active channels.  Convergence requires both the relative
/// L2 control change of the latest update and the relative objective
/// change to fall below their thresholds.  With no active channel the
/// sweep reduces to a single forward solve.
///
/// The sweep starts from zero controls unless init is given, in which case
/// it starts from a copy of init with the inactive channels zeroed.
inline FbsResult run_fbs(const Grid& g, const ModelParams& p, const CostWeights& w,
                         const StateSnapshot& ic, const std::array<bool, 3>& active,
                         const FbsSettings& fbs, double dt, int nt,
                         const ControlTrajectory* init = nullptr)
{
    if (!w.all_sigma_zero()) {
        throw std::invalid_argument(
            "run_fbs: the bang-bang law requires sigma1 = sigma2 = sigma3 = 0");
    }
    fbs.validate();

    FbsResult res;
    ControlTrajectory u = zero_controls(g, dt, nt);
    if (init != nullptr) {
        if (init->num_steps() < nt) {
            throw std::invalid_argument("run_fbs: initial controls shorter than nt");
        }
        if (control_box_violation(*init) > 0.0) {
            throw std::invalid_argument("run_fbs: initial controls leave the [0, 1] box");
        }
        for (int c = 0; c < 3; ++c) {
            if (!active[c]) continue;
            for (int n = 0; n <= nt; ++n) u.channel(c)[n] = init->channel(c)[n];
        }
    }

    const bool any_active = active[0] || active[1] || active[2];
    if (!any_active) {
        ForwardDiagnostics fd;
        res.states = solve_forward(g, p, ic, u, dt, nt, &fd);
        res.cost = evaluate_J(g, w, res.states, u);
        AdjointDiagnostics ad;
        res.adjoints = solve_adjoint(g, p, w, res.states, u, fbs.sign, &ad);
        res.controls = u;
        res.final_controls = std::move(u);
        res.history.push_back({1, res.cost, 0.0, true});
        res.iterations = 1;
        res.converged = true;
        res.forward_cg_iterations = fd.cg_iterations;
        res.adjoint_cg_iterations = ad.cg_iterations;
        return res;
    }

    double best_J = std::numeric_limits<double>::infinity();
    double prev_J = 0.0;
    double pending_change = 0.0;  // control change that produced this iterate
    bool have_prev = false;

    for (int iter = 1; iter <= fbs.max_iter; ++iter) {
        ForwardDiagnostics fd;
        StateTrajectory states = solve_forward(g, p, ic, u, dt, nt, &fd);
        res.forward_cg_iterations += fd.cg_iterations;
        const CostBreakdown cost = evaluate_J(g, w, states, u);
        AdjointDiagnostics ad;
        AdjointTrajectory adjoints = solve_adjoint(g, p, w, states, u, fbs.sign, &ad);
        res.adjoint_cg_iterations += ad.cg_iterations;

        const bool accepted = cost.total() < best_J;
        res.history.push_back({iter, cost, pending_change, accepted});
        res.iterations = iter;
        if (accepted) {
            best_J = cost.total();
            res.cost = cost;
            res.controls = u;
            res.states = std::move(states);
            res.adjoints = std::move(adjoints);
        }

        // Relax toward the bang-bang target of this iterate.
        const StateTrajectory& sref = accepted ? res.states : states;
        const AdjointTrajectory& aref = accepted ? res.adjoints : adjoints;
        double change_sq = 0.0;
        double norm_sq = 0.0;
        Field t1, t2, t3, v;
        for (int n = 0; n <= nt; ++n) {
            const SwitchingFields phi = switching_functions(
                p, w, sref.snaps[n], aref.snaps[n], fbs.sign);
            bang_bang_update(phi, active, t1, t2, t3);
            Field* targets[3] = {&t1, &t2, &t3};
            for (int c = 0; c < 3; ++c) {
                Field& uc = u.channel(c)[n];
                relax_controls(uc, *targets[c], fbs.omega, v);
                for (std::size_t k = 0; k < uc.size(); ++k) {
                    const double d = v[k] - uc[k];
                    change_sq += d * d;
                    norm_sq += v[k] * v[k];
                }
                uc.swap(v);
            }
        }
        // Change relative to the iterate it produced; a zero new iterate
        // can only arise with zero change, which short-circuits below.
        const double change = std::sqrt(change_sq);
        const double rel_change = change / std::max(std::sqrt(norm_sq), 1e-300);
        pending_change = rel_change;

        const double rel_cost = have_prev
            ? std::abs(cost.total() - prev_J) / std::max(std::abs(prev_J), 1e-300)
            : std::numeric_limits<double>::infinity();
        prev_J = cost.total();
        have_prev = true;

        const bool controls_settled = (change == 0.0) || (rel_change <= fbs.tol_control);
        const bool cost_settled = (change == 0.0) || (rel_cost <= fbs.tol_cost);
        if (controls_settled && cost_settled) {
            res.converged = true;
            break;
        }
    }
    res.final_controls = std::move(u);
    return res;
}

} // namespace seiqr

#endif
