// Reference implementations used only by the tests.  Everything here is
// deliberately independent of the solver code paths it checks: the dense
// Laplacian is assembled entry by entry from the stencil definition, the
// ODE references use a classical fourth-order Runge-Kutta scheme, and the
// quadrature reference integrates trigonometric polynomials in closed
// form.

#ifndef SEIQR_TESTS_ORACLES_HPP
#define SEIQR_TESTS_ORACLES_HPP

#include <array>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include <seiqr/forward.hpp>

namespace oracle
{

using Vec = std::vector<double>;
using Mat = std::vector<Vec>;
using State5 = std::array<double, 5>;

/// Dense matrix of the five-point Laplacian with reflective ghost cells,
/// assembled independently of the solver: for each interior face the
/// coupling 1/h^2 appears symmetrically, boundary faces contribute
/// nothing.
inline Mat dense_neumann_laplacian(int nx, int ny, double hx, double hy)
{
    const int n = nx * ny;
    Mat A(n, Vec(n, 0.0));
    const double ax = 1.0 / (hx * hx);
    const double ay = 1.0 / (hy * hy);
    const auto idx = [nx](int i, int j) { return j * nx + i; };
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const int k = idx(i, j);
            if (i > 0) {
                A[k][idx(i - 1, j)] += ax;
                A[k][k] -= ax;
            }
            if (i < nx - 1) {
                A[k][idx(i + 1, j)] += ax;
                A[k][k] -= ax;
            }
            if (j > 0) {
                A[k][idx(i, j - 1)] += ay;
                A[k][k] -= ay;
            }
            if (j < ny - 1) {
                A[k][idx(i, j + 1)] += ay;
                A[k][k] -= ay;
            }
        }
    }
    return A;
}

inline Vec matvec(const Mat& A, const Vec& x)
{
    Vec y(A.size(), 0.0);
    for (std::size_t r = 0; r < A.size(); ++r) {
        for (std::size_t c = 0; c < x.size(); ++c) y[r] += A[r][c] * x[c];
    }
    return y;
}

/// Classical fourth-order Runge-Kutta over [0, T] in steps of dt_ref.
template <std::size_t N>
std::array<double, N> rk4(std::array<double, N> y, double T, double dt_ref,
                          const std::function<std::array<double, N>(
                              double, const std::array<double, N>&)>& f)
{
    const int steps = static_cast<int>(std::llround(T / dt_ref));
    const double dt = T / steps;
    double t = 0.0;
    for (int n = 0; n < steps; ++n) {
        const auto k1 = f(t, y);
        std::array<double, N> y2;
        for (std::size_t i = 0; i < N; ++i) y2[i] = y[i] + 0.5 * dt * k1[i];
        const auto k2 = f(t + 0.5 * dt, y2);
        for (std::size_t i = 0; i < N; ++i) y2[i] = y[i] + 0.5 * dt * k2[i];
        const auto k3 = f(t + 0.5 * dt, y2);
        for (std::size_t i = 0; i < N; ++i) y2[i] = y[i] + dt * k3[i];
        const auto k4 = f(t + dt, y2);
        for (std::size_t i = 0; i < N; ++i) {
            y[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        t += dt;
    }
    return y;
}

/// Space-free reaction system with constant controls, written directly
/// from the model equations.
inline State5 seiqr_rhs(const seiqr::ModelParams& p, const State5& y,
                        double u1 = 0.0, double u2 = 0.0, double u3 = 0.0)
{
    const double S = y[0], E = y[1], I = y[2], Q = y[3], R = y[4];
    const double open = 1.0 - u3;
    return {
        p.Lambda + p.rho * Q - (p.mu + u1) * S - p.beta1 * open * S * E - p.beta2 * open * S * I,
        p.beta1 * open * S * E - (p.delta + p.mu) * E,
        p.beta2 * open * S * I + p.delta * E - (p.gamma + p.mu) * I,
        p.gamma * I - (p.alpha + p.rho + p.mu + u2) * Q,
        p.alpha * Q + u1 * S + u2 * Q - p.mu * R,
    };
}

/// Space-free adjoint system along a constant frozen state, standard
/// (duality) signs, integrated in reverse time tau = T - t:
/// dp/dtau = A(frozen)^T p + source, p(tau = 0) = terminal.
/// The transpose is assembled from the forward Jacobian entry by entry so
/// it cannot share a mistake with the solver's hand-derived transpose.
inline State5 adjoint_reference(const seiqr::ModelParams& p, const seiqr::CostWeights& w,
                                const State5& frozen, double u1, double u2, double u3,
                                double T, double dt_ref)
{
    // Forward Jacobian at the frozen state.
    const double S = frozen[0], E = frozen[1], I = frozen[2];
    const double open = 1.0 - u3;
    double A[5][5] = {};
    A[0][0] = -(p.mu + u1) - open * (p.beta1 * E + p.beta2 * I);
    A[0][1] = -open * p.beta1 * S;
    A[0][2] = -open * p.beta2 * S;
    A[0][3] = p.rho;
    A[1][0] = open * p.beta1 * E;
    A[1][1] = open * p.beta1 * S - (p.delta + p.mu);
    A[2][0] = open * p.beta2 * I;
    A[2][1] = p.delta;
    A[2][2] = open * p.beta2 * S - (p.gamma + p.mu);
    A[3][2] = p.gamma;
    A[3][3] = -(p.alpha + p.rho + p.mu + u2);
    A[4][0] = u1;
    A[4][3] = p.alpha + u2;
    A[4][4] = -p.mu;

    const State5 source = {0.0, w.kappa1, w.kappa1, w.kappa2, 0.0};
    const State5 terminal = {0.0, w.kappa3, w.kappa3, w.kappa4, 0.0};
    const auto rhs = [&](double, const State5& q) {
        State5 out;
        for (int c = 0; c < 5; ++c) {
            double acc = source[c];
            for (int r = 0; r < 5; ++r) acc += A[r][c] * q[r];
            out[c] = acc;
        }
        return out;
    };
    return rk4<5>(terminal, T, dt_ref, rhs);
}

/// Random trigonometric polynomial with a closed-form time integral,
/// used as the quadrature reference.
struct TrigPoly
{
    std::vector<double> a, b;  // sum_k a_k cos(k w t) + b_k sin(k w t)
    double omega = 1.0;

    double value(double t) const
    {
        double v = a[0];
        for (std::size_t k = 1; k < a.size(); ++k) {
            v += a[k] * std::cos(k * omega * t) + b[k] * std::sin(k * omega * t);
        }
        return v;
    }

    double integral(double T) const
    {
        double v = a[0] * T;
        for (std::size_t k = 1; k < a.size(); ++k) {
            const double kw = k * omega;
            v += a[k] * std::sin(kw * T) / kw + b[k] * (1.0 - std::cos(kw * T)) / kw;
        }
        return v;
    }

    /// Bound on the second derivative, for the trapezoid error estimate.
    double second_derivative_bound() const
    {
        double m = 0.0;
        for (std::size_t k = 1; k < a.size(); ++k) {
            const double kw = k * omega;
            m += kw * kw * (std::abs(a[k]) + std::abs(b[k]));
        }
        return m;
    }

    static TrigPoly random(std::mt19937_64& rng, int modes, double omega)
    {
        std::uniform_real_distribution<double> dist(-1.0, 1.0);
        TrigPoly p;
        p.omega = omega;
        p.a.resize(modes + 1);
        p.b.resize(modes + 1);
        for (int k = 0; k <= modes; ++k) {
            p.a[k] = dist(rng);
            p.b[k] = (k == 0) ? 0.0 : dist(rng);
        }
        return p;
    }
};

inline seiqr::Field random_field(std::mt19937_64& rng, const seiqr::Grid& g,
                                 double lo, double hi)
{
    std::uniform_real_distribution<double> dist(lo, hi);
    seiqr::Field f(static_cast<std::size_t>(g.size()));
    for (double& v : f) v = dist(rng);
    return f;
}

inline seiqr::ControlTrajectory random_controls(std::mt19937_64& rng, const seiqr::Grid& g,
                                                double dt, int nt, double lo, double hi)
{
    seiqr::ControlTrajectory u = seiqr::zero_controls(g, dt, nt);
    for (int c = 0; c < 3; ++c) {
        for (auto& f : u.channel(c)) f = random_field(rng, g, lo, hi);
    }
    return u;
}

/// Small scenario with the default rates, used throughout the suites.
inline seiqr::ScenarioSpec desk_spec(int nx, int ny, double T, double dt)
{
    seiqr::ScenarioSpec s = seiqr::default_paper_scenario(1);
    s.grid.nx = nx;
    s.grid.ny = ny;
    s.grid.T = T;
    s.grid.dt = dt;
    s.ic.hotspot_ix = nx / 2;
    s.ic.hotspot_iy = ny / 2;
    return s;
}

} // namespace oracle

#endif
