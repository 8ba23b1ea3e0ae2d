#ifndef SEIQR_OBJECTIVE_HPP
#define SEIQR_OBJECTIVE_HPP

#include "adjoint.hpp"
#include "state.hpp"

namespace seiqr
{

/// The four parts of the objective.  total() is their exact sum.
struct CostBreakdown
{
    double running_disease = 0.0;   ///< integral of kappa1 (E + I) + kappa2 Q
    double running_control = 0.0;   ///< integral of w1 u1 + w2 u2 + w3 u3
    double terminal_disease = 0.0;  ///< kappa3 (E + I)(T) + kappa4 Q(T)
    double terminal_control = 0.0;  ///< sigma1 u1(T) + sigma2 u2(T) + sigma3 u3(T)

    double total() const
    {
        return running_disease + running_control + terminal_disease + terminal_control;
    }
};

/// Evaluates the objective along a trajectory: trapezoid rule in time over
/// midpoint-rule domain integrals, plus the terminal terms.
inline CostBreakdown evaluate_J(const Grid& g, const CostWeights& w,
                                const StateTrajectory& states,
                                const ControlTrajectory& u)
{
    const int nt = states.num_steps();
    if (u.num_steps() < nt) {
        throw std::invalid_argument("evaluate_J: control trajectory shorter than nt");
    }
    const double dt = states.dt;
    CostBreakdown cost;

    std::vector<double> disease(nt + 1), control(nt + 1);
    for (int n = 0; n <= nt; ++n) {
        const StateSnapshot& s = states.snaps[n];
        double d = 0.0;
        for (std::size_t k = 0; k < s.S.size(); ++k) {
            d += w.kappa1 * (s.E[k] + s.I[k]) + w.kappa2 * s.Q[k];
        }
        disease[n] = d * g.cell_area();
        double c = 0.0;
        for (std::size_t k = 0; k < s.S.size(); ++k) {
            c += w.w1 * u.u1[n][k] + w.w2 * u.u2[n][k] + w.w3 * u.u3[n][k];
        }
        control[n] = c * g.cell_area();
    }
    cost.running_disease = integrate_time(disease, dt);
    cost.running_control = integrate_time(control, dt);

    const StateSnapshot& sT = states.snaps[nt];
    double td = 0.0;
    for (std::size_t k = 0; k < sT.S.size(); ++k) {
        td += w.kappa3 * (sT.E[k] + sT.I[k]) + w.kappa4 * sT.Q[k];
    }
    cost.terminal_disease = td * g.cell_area();
    double tc = 0.0;
    for (std::size_t k = 0; k < sT.S.size(); ++k) {
        tc += w.sigma1 * u.u1[nt][k] + w.sigma2 * u.u2[nt][k] + w.sigma3 * u.u3[nt][k];
    }
    cost.terminal_control = tc * g.cell_area();
    return cost;
}

/// Pointwise derivative of the Hamiltonian with respect to each control,
/// without the control-cost weight.  In the duality convention these are
///
///   g1 = S (P_R - P_S)
///   g2 = Q (P_R - P_Q)
///   g3 = beta1 S E (P_S - P_E) + beta2 S I (P_S - P_I)
///
/// and the paper convention negates every adjoint factor, which leaves the
/// values unchanged.  The full switching functions are g_i + w_i.
inline void control_gradient_terms(const ModelParams& p, const StateSnapshot& s,
                                   const AdjointSnapshot& adj, SignConvention sign,
                                   Field& g1, Field& g2, Field& g3)
{
    const double sgn = (sign == SignConvention::duality) ? 1.0 : -1.0;
    const std::size_t n = s.S.size();
    g1.resize(n);
    g2.resize(n);
    g3.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double S = s.S[k];
        const double E = s.E[k];
        const double I = s.I[k];
        const double Q = s.Q[k];
        const double pS = sgn * adj.S[k];
        const double pE = sgn * adj.E[k];
        const double pI = sgn * adj.I[k];
        const double pQ = sgn * adj.Q[k];
        const double pR = sgn * adj.R[k];
        g1[k] = S * (pR - pS);
        g2[k] = Q * (pR - pQ);
        g3[k] = p.beta1 * S * E * (pS - pE) + p.beta2 * S * I * (pS - pI);
    }
}

/// Switching functions of the bang-bang law at one time level.  The
/// optimal control is 1 where phi <= 0 and 0 where phi > 0.  Valid only
/// for zero terminal control weights (sigma), which the law requires.
struct SwitchingFields
{
    Field phi1, phi2, phi3;
};

inline SwitchingFields switching_functions(const ModelParams& p, const CostWeights& w,
                                           const StateSnapshot& s, const AdjointSnapshot& adj,
                                           SignConvention sign)
{
    if (!w.all_sigma_zero()) {
        throw std::invalid_argument(
            "switching_functions: the bang-bang law requires sigma1 = sigma2 = sigma3 = 0");
    }
    SwitchingFields phi;
    control_gradient_terms(p, s, adj, sign, phi.phi1, phi.phi2, phi.phi3);
    for (double& v : phi.phi1) v += w.w1;
    for (double& v : phi.phi2) v += w.w2;
    for (double& v : phi.phi3) v += w.w3;
    return phi;
}

/// Directional derivative of the objective from the adjoint sweep.  The
/// state-dependent part pairs the stored adjoint at levels 0..nt-1 with
/// the direction at the same levels and weight dt (the exact chain rule
/// through the splitting scheme: the control at level nt never enters the
/// forward map); the control-cost part reuses the trapezoid weights of the
/// cost quadrature.  The result is the exact derivative of the discrete
/// objective, which the finite-difference and linearized-solve oracles
/// reproduce to their own accuracy.
inline double adjoint_directional_derivative(const Grid& g, const ModelParams& p,
                                             const CostWeights& w,
                                             const StateTrajectory& states,
                                             const AdjointTrajectory& adjoints,
                                             const ControlTrajectory& dir,
                                             SignConvention sign)
{
    const int nt = states.num_steps();
    const double dt = states.dt;
    double acc = 0.0;
    Field g1, g2, g3;
    for (int n = 0; n <= nt; ++n) {
        double state_part = 0.0;
        if (n < nt) {
            control_gradient_terms(p, states.snaps[n], adjoints.snaps[n], sign, g1, g2, g3);
            for (std::size_t k = 0; k < g1.size(); ++k) {
                state_part += g1[k] * dir.u1[n][k] + g2[k] * dir.u2[n][k]
                            + g3[k] * dir.u3[n][k];
            }
        }
        double cost_part = 0.0;
        for (std::size_t k = 0; k < dir.u1[n].size(); ++k) {
            cost_part += w.w1 * dir.u1[n][k] + w.w2 * dir.u2[n][k] + w.w3 * dir.u3[n][k];
        }
        acc += dt * state_part + dt * trapezoid_weight(n, nt) * cost_part;
    }
    double terminal = 0.0;
    for (std::size_t k = 0; k < dir.u1[nt].size(); ++k) {
        terminal += w.sigma1 * dir.u1[nt][k] + w.sigma2 * dir.u2[nt][k]
                  + w.sigma3 * dir.u3[nt][k];
    }
    return (acc + terminal) * g.cell_area();
}

} // namespace seiqr

#endif
