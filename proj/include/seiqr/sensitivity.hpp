#ifndef SEIQR_SENSITIVITY_HPP
#define SEIQR_SENSITIVITY_HPP

#include "objective.hpp"

namespace seiqr
{

/// Perturbation trajectory of the linearized dynamics.
struct SensitivityTrajectory
{
    Grid grid;
    double dt = 0.0;
    std::vector<SensitivitySnapshot> snaps;

    int num_steps() const { return static_cast<int>(snaps.size()) - 1; }
};

/// Applies the reaction Jacobian at the frozen state and controls plus the
/// control derivative in the given direction:
/// out = (df/dpsi) y + (df/du) du, cell by cell.
inline void linearized_reaction(const ModelParams& p, const StateSnapshot& s,
                                const Field& u1, const Field& u2, const Field& u3,
                                const SensitivitySnapshot& y,
                                const Field& du1, const Field& du2, const Field& du3,
                                SensitivitySnapshot& out)
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
        const double Q = s.Q[k];
        const double open = 1.0 - u3[k];
        const double b1 = p.beta1 * open;
        const double b2 = p.beta2 * open;
        const double yS = y.S[k];
        const double yE = y.E[k];
        const double yI = y.I[k];
        const double yQ = y.Q[k];
        const double yR = y.R[k];
        // State part: exact Jacobian of the reaction terms.
        double fS = -(p.mu + u1[k] + b1 * E + b2 * I) * yS
                  - b1 * S * yE - b2 * S * yI + p.rho * yQ;
        double fE = b1 * E * yS + (b1 * S - (p.delta + p.mu)) * yE;
        double fI = b2 * I * yS + p.delta * yE + (b2 * S - (p.gamma + p.mu)) * yI;
        double fQ = p.gamma * yI - (p.alpha + p.rho + p.mu + u2[k]) * yQ;
        double fR = u1[k] * yS + (p.alpha + u2[k]) * yQ - p.mu * yR;
        // Control part: derivative with respect to (u1, u2, u3).
        const double pressure = (p.beta1 * E + p.beta2 * I) * S;
        fS += -S * du1[k] + pressure * du3[k];
        fE += -p.beta1 * S * E * du3[k];
        fI += -p.beta2 * S * I * du3[k];
        fQ += -Q * du2[k];
        fR += S * du1[k] + Q * du2[k];
        out.S[k] = fS;
        out.E[k] = fE;
        out.I[k] = fI;
        out.Q[k] = fQ;
        out.R[k] = fR;
    }
}

/// Propagates a control perturbation through the exact linearization of
/// the splitting scheme: explicit linearized reaction, then the same
/// implicit diffusion solves as the forward map.  Starts from a zero
/// perturbation.  Zero directions stay exactly zero.
inline SensitivityTrajectory solve_linearized(const Grid& g, const ModelParams& p,
                                              const StateTrajectory& states,
                                              const ControlTrajectory& u,
                                              const ControlTrajectory& dir,
                                              double cg_tol = 1e-12)
{
    const int nt = states.num_steps();
    const double dt = states.dt;
    if (u.num_steps() < nt || dir.num_steps() < nt) {
        throw std::invalid_argument("solve_linearized: trajectory shorter than nt");
    }

    SensitivityTrajectory traj;
    traj.grid = g;
    traj.dt = dt;
    traj.snaps.reserve(nt + 1);
    traj.snaps.emplace_back(g);

    const auto lam = diffusivities(p);
    SensitivitySnapshot rate;
    for (int n = 0; n < nt; ++n) {
        const SensitivitySnapshot& y = traj.snaps.back();
        linearized_reaction(p, states.snaps[n], u.u1[n], u.u2[n], u.u3[n],
                            y, dir.u1[n], dir.u2[n], dir.u3[n], rate);
        SensitivitySnapshot stage(g);
        for (int c = 0; c < kNumCompartments; ++c) {
            const Field& yc = y.comp(c);
            const Field& rc = rate.comp(c);
            Field& sc = stage.comp(c);
            for (std::size_t k = 0; k < yc.size(); ++k) sc[k] = yc[k] + dt * rc[k];
        }
        SensitivitySnapshot next(g);
        parallel_for_n(kNumCompartments, [&](int c) {
            implicit_diffusion_solve(g, stage.comp(c), dt * lam[c], next.comp(c), cg_tol);
        });
        traj.snaps.push_back(std::move(next));
    }
    return traj;
}

/// Directional derivative of the objective from a linearized solve: the
/// running and terminal disease terms pair the perturbation with the
/// kappa weights, the control terms are the direct derivative of the
/// control cost.
inline double sensitivity_directional_derivative(const Grid& g, const CostWeights& w,
                                                 const SensitivityTrajectory& sens,
                                                 const ControlTrajectory& dir)
{
    const int nt = sens.num_steps();
    const double dt = sens.dt;
    std::vector<double> disease(nt + 1), control(nt + 1);
    for (int n = 0; n <= nt; ++n) {
        const SensitivitySnapshot& y = sens.snaps[n];
        double d = 0.0;
        for (std::size_t k = 0; k < y.S.size(); ++k) {
            d += w.kappa1 * (y.E[k] + y.I[k]) + w.kappa2 * y.Q[k];
        }
        disease[n] = d * g.cell_area();
        double c = 0.0;
        for (std::size_t k = 0; k < y.S.size(); ++k) {
            c += w.w1 * dir.u1[n][k] + w.w2 * dir.u2[n][k] + w.w3 * dir.u3[n][k];
        }
        control[n] = c * g.cell_area();
    }
    double acc = integrate_time(disease, dt) + integrate_time(control, dt);

    const SensitivitySnapshot& yT = sens.snaps[nt];
    double td = 0.0;
    for (std::size_t k = 0; k < yT.S.size(); ++k) {
        td += w.kappa3 * (yT.E[k] + yT.I[k]) + w.kappa4 * yT.Q[k];
    }
    double tc = 0.0;
    for (std::size_t k = 0; k < yT.S.size(); ++k) {
        tc += w.sigma1 * dir.u1[nt][k] + w.sigma2 * dir.u2[nt][k] + w.sigma3 * dir.u3[nt][k];
    }
    return acc + (td + tc) * g.cell_area();
}

/// Shifts the base controls by eps times the direction.
inline ControlTrajectory shifted_controls(const ControlTrajectory& base,
                                          const ControlTrajectory& dir, double eps)
{
    ControlTrajectory u = base;
    for (int c = 0; c < 3; ++c) {
        auto& dst = u.channel(c);
        const auto& d = dir.channel(c);
        for (std::size_t n = 0; n < dst.size(); ++n) {
            for (std::size_t k = 0; k < dst[n].size(); ++k) {
                dst[n][k] += eps * d[n][k];
            }
        }
    }
    return u;
}

/// Reference directional derivative by central finite differences of the
/// full nonlinear objective, Richardson-extrapolated over the two largest
/// eps values (the central difference has even error, so the extrapolated
/// value cancels the eps^2 term).  Independent of the adjoint and
/// linearized paths: it touches only the forward solver and the objective.
inline double fd_directional_derivative(const Grid& g, const ModelParams& p,
                                        const CostWeights& w,
                                        const StateSnapshot& ic,
                                        const ControlTrajectory& base,
                                        const ControlTrajectory& dir,
                                        double dt, int nt,
                                        double eps1 = 1e-3, double eps2 = 1e-4)
{
    const auto value = [&](double eps) {
        const ControlTrajectory u = shifted_controls(base, dir, eps);
        const StateTrajectory states = solve_forward(g, p, ic, u, dt, nt);
        return evaluate_J(g, w, states, u).total();
    };
    const auto central = [&](double eps) {
        return (value(eps) - value(-eps)) / (2.0 * eps);
    };
    const double d1 = central(eps1);
    const double d2 = central(eps2);
    const double r = eps1 / eps2;
    return (r * r * d2 - d1) / (r * r - 1.0);
}

} // namespace seiqr

#endif
