#ifndef SEIQR_STATE_HPP
#define SEIQR_STATE_HPP

#include <stdexcept>
#include <vector>

#include "grid.hpp"

namespace seiqr
{

constexpr int kNumCompartments = 5;

inline const char* compartment_name(int k)
{
    static const char* names[kNumCompartments] = {"S", "E", "I", "Q", "R"};
    return names[k];
}

/// Densities of the five compartments at one time level.
struct StateSnapshot
{
    Field S, E, I, Q, R;

    StateSnapshot() = default;
    explicit StateSnapshot(const Grid& g)
        : S(make_field(g)), E(make_field(g)), I(make_field(g)),
          Q(make_field(g)), R(make_field(g))
    {
    }

    Field& comp(int k)
    {
        switch (k) {
            case 0: return S;
            case 1: return E;
            case 2: return I;
            case 3: return Q;
            default: return R;
        }
    }
    const Field& comp(int k) const
    {
        return const_cast<StateSnapshot*>(this)->comp(k);
    }
};

/// Adjoint fields paired with the five compartments at one time level.
struct AdjointSnapshot
{
    Field S, E, I, Q, R;

    AdjointSnapshot() = default;
    explicit AdjointSnapshot(const Grid& g)
        : S(make_field(g)), E(make_field(g)), I(make_field(g)),
          Q(make_field(g)), R(make_field(g))
    {
    }

    Field& comp(int k)
    {
        switch (k) {
            case 0: return S;
            case 1: return E;
            case 2: return I;
            case 3: return Q;
            default: return R;
        }
    }
    const Field& comp(int k) const
    {
        return const_cast<AdjointSnapshot*>(this)->comp(k);
    }
};

/// State perturbations propagated by the linearized dynamics.
struct SensitivitySnapshot
{
    Field S, E, I, Q, R;

    SensitivitySnapshot() = default;
    explicit SensitivitySnapshot(const Grid& g)
        : S(make_field(g)), E(make_field(g)), I(make_field(g)),
          Q(make_field(g)), R(make_field(g))
    {
    }

    Field& comp(int k)
    {
        switch (k) {
            case 0: return S;
            case 1: return E;
            case 2: return I;
            case 3: return Q;
            default: return R;
        }
    }
    const Field& comp(int k) const
    {
        return const_cast<SensitivitySnapshot*>(this)->comp(k);
    }
};

/// Snapshots at time levels 0..nt on a shared grid.
struct StateTrajectory
{
    Grid grid;
    double dt = 0.0;
    std::vector<StateSnapshot> snaps;

    int num_steps() const { return static_cast<int>(snaps.size()) - 1; }
};

struct AdjointTrajectory
{
    Grid grid;
    double dt = 0.0;
    std::vector<AdjointSnapshot> snaps;

    int num_steps() const { return static_cast<int>(snaps.size()) - 1; }
};

/// The three control fields at time levels 0..nt.  The forward map uses
/// levels 0..nt-1 (left endpoint of each step); level nt enters only the
/// cost quadrature.
struct ControlTrajectory
{
    Grid grid;
    double dt = 0.0;
    std::vector<Field> u1, u2, u3;

    int num_steps() const { return static_cast<int>(u1.size()) - 1; }

    std::vector<Field>& channel(int k)
    {
        switch (k) {
            case 0: return u1;
            case 1: return u2;
            default: return u3;
        }
    }
    const std::vector<Field>& channel(int k) const
    {
        return const_cast<ControlTrajectory*>(this)->channel(k);
    }
};

inline ControlTrajectory zero_controls(const Grid& g, double dt, int nt)
{
    ControlTrajectory u;
    u.grid = g;
    u.dt = dt;
    u.u1.assign(nt + 1, make_field(g));
    u.u2.assign(nt + 1, make_field(g));
    u.u3.assign(nt + 1, make_field(g));
    return u;
}

/// Largest violation of the admissible box [0, 1] over all channels and
/// time levels; zero for admissible controls.
inline double control_box_violation(const ControlTrajectory& u)
{
    double worst = 0.0;
    for (int c = 0; c < 3; ++c) {
        for (const Field& f : u.channel(c)) {
            for (double v : f) {
                worst = std::max(worst, std::max(0.0 - v, v - 1.0));
            }
        }
    }
    return worst;
}

} // namespace seiqr

#endif
