#ifndef SEIQR_ADJOINT_HPP
#define SEIQR_ADJOINT_HPP

#include "forward.hpp"

namespace seiqr
{

/// Terminal adjoint values.  The terminal cost depends on E, I through
/// kappa3 and on Q through kappa4, so those components start the backward
/// sweep at the terminal weights; S and R start at zero.  The duality
/// convention stores +kappa, the paper convention the negated fields.
inline AdjointSnapshot terminal_adjoint(const Grid& g, const CostWeights& w,
                                        SignConvention sign)
{
    const double sgn = (sign == SignConvention::duality) ? 1.0 : -1.0;
    AdjointSnapshot p(g);
    std::fill(p.E.begin(), p.E.end(), sgn * w.kappa3);
    std::fill(p.I.begin(), p.I.end(), sgn * w.kappa3);
    std::fill(p.Q.begin(), p.Q.end(), sgn * w.kappa4);
    return p;
}

/// Applies the transposed reaction Jacobian at the frozen state and
/// controls: out = (df/dpsi)^T q, cell by cell.  The R column is diagonal
/// (-mu), so a zero R adjoint stays exactly zero along the sweep.
inline void adjoint_reaction_transpose(const ModelParams& p, const StateSnapshot& s,
                                       const Field& u1, const Field& u2, const Field& u3,
                                       const AdjointSnapshot& q, AdjointSnapshot& out)
{
    const std::size_t n = s.S.size();
    out.S.resize(n);
    out.E.resize(n);
    out.I.resize(n);
    out.Q.resize(n);
    out.R.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double S = s.S[k];
        const double E = s.E[k];
        const double I = s.I[k];
        const double open = 1.0 - u3[k];
        const double b1 = p.beta1 * open;
        const double b2 = p.beta2 * open;
        const double qS = q.S[k];
        const double qE = q.E[k];
        const double qI = q.I[k];
        const double qQ = q.Q[k];
        const double qR = q.R[k];
        out.S[k] = -(p.mu + u1[k] + b1 * E + b2 * I) * qS
                 + b1 * E * qE + b2 * I * qI + u1[k] * qR;
        out.E[k] = -b1 * S * qS + (b1 * S - (p.delta + p.mu)) * qE + p.delta * qI;
        out.I[k] = -b2 * S * qS + (b2 * S - (p.gamma + p.mu)) * qI + p.gamma * qQ;
        out.Q[k] = p.rho * qS - (p.alpha + p.rho + p.mu + u2[k]) * qQ
                 + (p.alpha + u2[k]) * qR;
        out.R[k] = -p.mu * qR;
    }
}

struct AdjointOptions
{
    double cg_tol = 1e-12;
    bool parallel_components = true;
};

struct AdjointDiagnostics
{
    long long cg_iterations = 0;
};

/// One backward step of the transposed splitting scheme.  The forward map
/// applies reaction then diffusion, so its transpose diffuses the carry
/// first and applies the transposed reaction second:
///
///   stored_n = diffuse(carry_{n+1})
///   carry_n  = stored_n + dt (df/dpsi)_n^T stored_n + source_n
///
/// stored_n is the field the exact chain rule pairs with the state at
/// level n; it is what the trajectory keeps and what the switching
/// functions consume.  source_n carries the running infection cost with
/// the trapezoid weight of the cost quadrature (sign flipped under the
/// paper convention).
struct BackwardStepResult
{
    AdjointSnapshot stored;
    AdjointSnapshot carry;
};

inline BackwardStepResult step_backward(const Grid& g, const ModelParams& p,
                                        const CostWeights& w,
                                        const AdjointSnapshot& carry_next,
                                        const StateSnapshot& s_n,
                                        const Field& u1, const Field& u2, const Field& u3,
                                        double dt, double trapezoid_w,
                                        SignConvention sign,
                                        AdjointDiagnostics* diag = nullptr,
                                        const AdjointOptions& opt = {})
{
    const double sgn = (sign == SignConvention::duality) ? 1.0 : -1.0;
    BackwardStepResult r;
    r.stored = AdjointSnapshot(g);

    const auto lam = diffusivities(p);
    std::array<long long, kNumCompartments> iters{};
    const auto solve_one = [&](int c) {
        const auto info = implicit_diffusion_solve(
            g, carry_next.comp(c), dt * lam[c], r.stored.comp(c), opt.cg_tol);
        iters[c] = info.iterations;
    };
    if (opt.parallel_components) {
        parallel_for_n(kNumCompartments, solve_one);
    } else {
        for (int c = 0; c < kNumCompartments; ++c) solve_one(c);
    }
    if (diag) {
        for (long long it : iters) diag->cg_iterations += it;
    }

    AdjointSnapshot jac;
    adjoint_reaction_transpose(p, s_n, u1, u2, u3, r.stored, jac);
    r.carry = AdjointSnapshot(g);
    const double srcE = sgn * w.kappa1 * dt * trapezoid_w;
    const double srcQ = sgn * w.kappa2 * dt * trapezoid_w;
    for (int c = 0; c < kNumCompartments; ++c) {
        const Field& q = r.stored.comp(c);
        const Field& j = jac.comp(c);
        Field& out = r.carry.comp(c);
        const double src = (c == 1 || c == 2) ? srcE : (c == 3 ? srcQ : 0.0);
        for (std::size_t k = 0; k < q.size(); ++k) out[k] = q[k] + dt * j[k] + src;
    }
    return r;
}

/// Backward sweep along a frozen state and control trajectory.  Snapshot
/// nt is the terminal condition; snapshot n < nt is the stored field of
/// step_backward at level n.  Zero weights give an identically zero
/// trajectory, and the R component is zero for every input because nothing
/// in the cost or the dynamics feeds back into it.
inline AdjointTrajectory solve_adjoint(const Grid& g, const ModelParams& p,
                                       const CostWeights& w,
                                       const StateTrajectory& states,
                                       const ControlTrajectory& u,
                                       SignConvention sign,
                                       AdjointDiagnostics* diag = nullptr,
                                       const AdjointOptions& opt = {})
{
    const int nt = states.num_steps();
    if (nt < 1) {
        throw std::invalid_argument("solve_adjoint: need at least one time step");
    }
    if (u.num_steps() < nt) {
        throw std::invalid_argument("solve_adjoint: control trajectory shorter than nt");
    }
    const double dt = states.dt;
    const double sgn = (sign == SignConvention::duality) ? 1.0 : -1.0;

    AdjointTrajectory traj;
    traj.grid = g;
    traj.dt = dt;
    traj.snaps.resize(nt + 1);
    traj.snaps[nt] = terminal_adjoint(g, w, sign);

    // Terminal carry folds in the trapezoid endpoint of the running cost.
    AdjointSnapshot carry = traj.snaps[nt];
    const double srcE = sgn * w.kappa1 * dt * trapezoid_weight(nt, nt);
    const double srcQ = sgn * w.kappa2 * dt * trapezoid_weight(nt, nt);
    for (double& v : carry.E) v += srcE;
    for (double& v : carry.I) v += srcE;
    for (double& v : carry.Q) v += srcQ;

    for (int n = nt - 1; n >= 0; --n) {
        BackwardStepResult r = step_backward(
            g, p, w, carry, states.snaps[n], u.u1[n], u.u2[n], u.u3[n],
            dt, trapezoid_weight(n, nt), sign, diag, opt);
        traj.snaps[n] = std::move(r.stored);
        carry = std::move(r.carry);
    }
    return traj;
}

} // namespace seiqr

#endif
