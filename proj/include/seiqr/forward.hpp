#ifndef SEIQR_FORWARD_HPP
#define SEIQR_FORWARD_HPP

#include <array>
#include <string>

#include "parallel.hpp"
#include "params.hpp"
#include "state.hpp"

namespace seiqr
{

/// Reaction terms of the controlled model at one time level.
///
///   S' = Lambda + rho Q - (mu + u1) S - (1 - u3) (beta1 E + beta2 I) S
///   E' = beta1 (1 - u3) S E - (delta + mu) E
///   I' = beta2 (1 - u3) S I + delta E - (gamma + mu) I
///   Q' = gamma I - (alpha + rho + mu + u2) Q
///   R' = alpha Q + u1 S + u2 Q - mu R
///
/// Every transfer appears with opposite signs in two equations, so the
/// reaction terms sum to Lambda - mu (S + E + I + Q + R) cell by cell.
inline void reaction_rates(const ModelParams& p, const StateSnapshot& s,
                           const Field& u1, const Field& u2, const Field& u3,
                           StateSnapshot& out)
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
        const double R = s.R[k];
        const double open = 1.0 - u3[k];
        const double newE = p.beta1 * open * S * E;
        const double newI = p.beta2 * open * S * I;
        out.S[k] = p.Lambda + p.rho * Q - (p.mu + u1[k]) * S - newE - newI;
        out.E[k] = newE - (p.delta + p.mu) * E;
        out.I[k] = newI + p.delta * E - (p.gamma + p.mu) * I;
        out.Q[k] = p.gamma * I - (p.alpha + p.rho + p.mu + u2[k]) * Q;
        out.R[k] = p.alpha * Q + u1[k] * S + u2[k] * Q - p.mu * R;
    }
}

inline std::array<double, kNumCompartments> diffusivities(const ModelParams& p)
{
    return {p.lambda_S, p.lambda_E, p.lambda_I, p.lambda_Q, p.lambda_R};
}

struct ForwardOptions
{
    double cg_tol = 1e-12;
    /// Densities below this are treated as a scheme failure, not clamped.
    double negativity_tol = -1e-6;
    bool parallel_components = true;
};

struct ForwardDiagnostics
{
    long long cg_iterations = 0;
    /// Running maximum of the sup norm of the reaction terms, per compartment.
    std::array<double, kNumCompartments> eta{};
    /// Most negative density seen across all steps and compartments.
    double min_value = 0.0;
};

/// One step of the splitting scheme: explicit reaction update followed by
/// an implicit diffusion solve per compartment.  Controls are sampled at
/// the left endpoint of the step.  Negative densities beyond the tolerance
/// raise an error instead of being clamped.
inline StateSnapshot step_forward(const Grid& g, const ModelParams& p,
                                  const StateSnapshot& s,
                                  const Field& u1, const Field& u2, const Field& u3,
                                  double dt,
                                  ForwardDiagnostics* diag = nullptr,
                                  const ForwardOptions& opt = {})
{
    StateSnapshot rates;
    reaction_rates(p, s, u1, u2, u3, rates);

    StateSnapshot stage(g);
    for (int c = 0; c < kNumCompartments; ++c) {
        const Field& f = s.comp(c);
        const Field& r = rates.comp(c);
        Field& out = stage.comp(c);
        for (std::size_t k = 0; k < f.size(); ++k) out[k] = f[k] + dt * r[k];
        if (diag) diag->eta[c] = std::max(diag->eta[c], norm_inf(r));
    }

    StateSnapshot next(g);
    const auto lam = diffusivities(p);
    std::array<long long, kNumCompartments> iters{};
    const auto solve_one = [&](int c) {
        const auto info = implicit_diffusion_solve(
            g, stage.comp(c), dt * lam[c], next.comp(c), opt.cg_tol);
        iters[c] = info.iterations;
    };
    if (opt.parallel_components) {
        parallel_for_n(kNumCompartments, solve_one);
    } else {
        for (int c = 0; c < kNumCompartments; ++c) solve_one(c);
    }

    double min_value = 0.0;
    for (int c = 0; c < kNumCompartments; ++c) {
        for (double v : next.comp(c)) min_value = std::min(min_value, v);
    }
    if (diag) {
        for (long long it : iters) diag->cg_iterations += it;
        diag->min_value = std::min(diag->min_value, min_value);
    }
    if (min_value < opt.negativity_tol) {
        throw std::runtime_error(
            "step_forward: density dropped to " + std::to_string(min_value) +
            ", below the negativity tolerance; the step size is too large for these rates");
    }
    return next;
}

/// Integrates the controlled system over nt steps and returns all nt + 1
/// snapshots.  Along the way the sup-norm growth envelope
///   max |psi_c(t_n)| <= max |psi_c(0)| + eta_c t_n
/// (eta_c the running reaction bound) is asserted for every compartment;
/// the splitting scheme obeys it because the implicit diffusion step does
/// not increase the sup norm.
inline StateTrajectory solve_forward(const Grid& g, const ModelParams& p,
                                     const StateSnapshot& ic,
                                     const ControlTrajectory& u,
                                     double dt, int nt,
                                     ForwardDiagnostics* diag = nullptr,
                                     const ForwardOptions& opt = {})
{
    if (u.num_steps() < nt) {
        throw std::invalid_argument("solve_forward: control trajectory shorter than nt");
    }
    StateTrajectory traj;
    traj.grid = g;
    traj.dt = dt;
    traj.snaps.reserve(nt + 1);
    traj.snaps.push_back(ic);

    ForwardDiagnostics local;
    ForwardDiagnostics* d = diag ? diag : &local;

    std::array<double, kNumCompartments> ic_sup{};
    for (int c = 0; c < kNumCompartments; ++c) ic_sup[c] = norm_inf(ic.comp(c));

    for (int n = 0; n < nt; ++n) {
        traj.snaps.push_back(step_forward(
            g, p, traj.snaps.back(), u.u1[n], u.u2[n], u.u3[n], dt, d, opt));
        const StateSnapshot& s = traj.snaps.back();
        const double t = (n + 1) * dt;
        for (int c = 0; c < kNumCompartments; ++c) {
            const double bound = ic_sup[c] + d->eta[c] * t;
            const double sup = norm_inf(s.comp(c));
            if (sup > bound + 1e-9 * (1.0 + bound)) {
                throw std::runtime_error(
                    std::string("solve_forward: sup-norm envelope violated for ") +
                    compartment_name(c) + " at step " + std::to_string(n + 1));
            }
        }
    }
    return traj;
}

/// Integral of S + E + I + Q + R over the domain.
inline double total_population(const Grid& g, const StateSnapshot& s)
{
    double sum = 0.0;
    for (int c = 0; c < kNumCompartments; ++c) {
        for (double v : s.comp(c)) sum += v;
    }
    return sum * g.cell_area();
}

} // namespace seiqr

#endif
