#ifndef SEIQR_GRID_HPP
#define SEIQR_GRID_HPP

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "params.hpp"

namespace seiqr
{

/// Scalar field on a cell-centered grid, flat row-major storage: cell
/// (i, j) lives at index j * nx + i, i running along x.
using Field = std::vector<double>;

/// Cell-centered uniform grid over a rectangle with reflecting (zero flux)
/// boundaries.
struct Grid
{
    int nx = 1;
    int ny = 1;
    double hx = 1.0;
    double hy = 1.0;

    int size() const { return nx * ny; }
    int index(int i, int j) const { return j * nx + i; }
    double cell_area() const { return hx * hy; }
    double domain_area() const { return nx * ny * hx * hy; }

    static Grid from(const Discretization& d)
    {
        return Grid{d.nx, d.ny, d.hx, d.hy};
    }
};

inline Field make_field(const Grid& g, double value = 0.0)
{
    return Field(static_cast<std::size_t>(g.size()), value);
}

inline double dot(const Field& a, const Field& b)
{
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
    return s;
}

inline double norm2(const Field& a)
{
    return std::sqrt(dot(a, a));
}

inline double norm_inf(const Field& a)
{
    double m = 0.0;
    for (double v : a) m = std::max(m, std::abs(v));
    return m;
}

/// Five-point Laplacian with reflective ghost cells: a neighbor outside the
/// grid mirrors the center value, so boundary differences vanish and the
/// discrete operator carries zero net flux.  out must not alias f.
inline void laplacian_apply(const Grid& g, const Field& f, Field& out)
{
    const int nx = g.nx;
    const int ny = g.ny;
    const double ax = 1.0 / (g.hx * g.hx);
    const double ay = 1.0 / (g.hy * g.hy);
    out.resize(f.size());
    for (int j = 0; j < ny; ++j) {
        const int row = j * nx;
        const int below = (j > 0) ? row - nx : row;
        const int above = (j < ny - 1) ? row + nx : row;
        for (int i = 0; i < nx; ++i) {
            const double c = f[row + i];
            const double left = (i > 0) ? f[row + i - 1] : c;
            const double right = (i < nx - 1) ? f[row + i + 1] : c;
            out[row + i] = ax * (left + right - 2.0 * c)
                         + ay * (f[below + i] + f[above + i] - 2.0 * c);
        }
    }
}

/// Result of one implicit diffusion solve.
struct DiffusionSolveInfo
{
    int iterations = 0;
    double relative_residual = 0.0;
};

/// Solves (I - dt_lambda * Laplacian) x = rhs by conjugate gradients,
/// matrix free.  The operator is symmetric positive definite for
/// dt_lambda >= 0 and stays within a few percent of the identity at the
/// shipped step sizes, so convergence takes a handful of iterations.
/// Stops when the residual falls below rel_tol * ||rhs||.
inline DiffusionSolveInfo implicit_diffusion_solve(
    const Grid& g, const Field& rhs, double dt_lambda, Field& x,
    double rel_tol = 1e-12)
{
    if (!(dt_lambda >= 0.0)) {
        throw std::invalid_argument("implicit_diffusion_solve: dt_lambda must be nonnegative");
    }
    x = rhs;
    if (dt_lambda == 0.0) {
        return {0, 0.0};
    }
    const double rhs_norm = norm2(rhs);
    if (rhs_norm == 0.0) {
        return {0, 0.0};
    }

    const auto apply = [&](const Field& v, Field& out) {
        laplacian_apply(g, v, out);
        for (std::size_t k = 0; k < v.size(); ++k) out[k] = v[k] - dt_lambda * out[k];
    };

    // Initial guess x = rhs gives r = rhs - A rhs = dt_lambda * Laplacian rhs.
    Field r(x.size());
    laplacian_apply(g, x, r);
    for (double& v : r) v *= dt_lambda;

    Field p = r;
    Field ap(x.size());
    double rr = dot(r, r);
    const double stop = rel_tol * rhs_norm;
    int iter = 0;
    const int max_iter = std::max(200, g.size());
    while (std::sqrt(rr) > stop && iter < max_iter) {
        apply(p, ap);
        const double alpha = rr / dot(p, ap);
        for (std::size_t k = 0; k < x.size(); ++k) {
            x[k] += alpha * p[k];
            r[k] -= alpha * ap[k];
        }
        const double rr_next = dot(r, r);
        const double beta = rr_next / rr;
        rr = rr_next;
        for (std::size_t k = 0; k < p.size(); ++k) p[k] = r[k] + beta * p[k];
        ++iter;
    }
    if (std::sqrt(rr) > stop) {
        throw std::runtime_error("implicit_diffusion_solve: CG failed to converge");
    }
    return {iter, std::sqrt(rr) / rhs_norm};
}

/// Midpoint-rule integral over the domain: cell values times cell area.
inline double integrate_domain(const Grid& g, const Field& f)
{
    double s = 0.0;
    for (double v : f) s += v;
    return s * g.cell_area();
}

/// Trapezoidal rule over a uniformly sampled time series of length nt + 1.
inline double integrate_time(const std::vector<double>& series, double dt)
{
    if (series.size() < 2) {
        throw std::invalid_argument("integrate_time: need at least two samples");
    }
    double s = 0.5 * (series.front() + series.back());
    for (std::size_t k = 1; k + 1 < series.size(); ++k) s += series[k];
    return s * dt;
}

/// Trapezoidal weight of time index n among nt + 1 samples.
inline double trapezoid_weight(int n, int nt)
{
    return (n == 0 || n == nt) ? 0.5 : 1.0;
}

} // namespace seiqr

#endif
