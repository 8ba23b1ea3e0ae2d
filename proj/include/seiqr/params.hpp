#ifndef SEIQR_PARAMS_HPP
#define SEIQR_PARAMS_HPP

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace seiqr
{

/// Sign convention for the adjoint fields.
///
/// Both conventions produce the same switching functions and the same
/// optimizer behavior; they differ only in the sign of the stored and
/// exported adjoint fields.  "duality" uses the standard Lagrangian signs
/// (terminal values +kappa3/+kappa4, running sources subtracted along the
/// backward sweep), "paper" stores the negated fields (terminal values
/// -kappa3/-kappa4).
enum class SignConvention
{
    paper,
    duality
};

inline std::string to_string(SignConvention s)
{
    return s == SignConvention::paper ? "paper" : "duality";
}

/// Epidemiological and diffusion parameters.  Rates are per day, densities
/// per km^2, diffusivities km^2 per day.  Defaults are the baseline rates
/// used by all shipped scenarios.
struct ModelParams
{
    double Lambda = 1.0;    ///< susceptible recruitment density rate
    double beta1 = 0.06;    ///< transmission rate from exposed contacts
    double beta2 = 0.07;    ///< transmission rate from infective contacts
    double mu = 0.01;       ///< natural death rate (all compartments)
    double delta = 0.05;    ///< exposed to infective progression rate
    double gamma = 0.02;    ///< infective to quarantined transfer rate
    double alpha = 0.05;    ///< quarantined recovery rate
    double rho = 0.01;      ///< quarantined back-transfer rate to susceptible

    double lambda_S = 0.1;    ///< diffusivity of S
    double lambda_E = 0.1;    ///< diffusivity of E
    double lambda_I = 0.1;    ///< diffusivity of I
    double lambda_Q = 0.001;  ///< diffusivity of Q (quarantine limits movement)
    double lambda_R = 0.1;    ///< diffusivity of R

    void validate() const
    {
        check_nonneg(Lambda, "ModelParams.Lambda");
        check_nonneg(beta1, "ModelParams.beta1");
        check_nonneg(beta2, "ModelParams.beta2");
        check_nonneg(mu, "ModelParams.mu");
        check_nonneg(delta, "ModelParams.delta");
        check_nonneg(gamma, "ModelParams.gamma");
        check_nonneg(alpha, "ModelParams.alpha");
        check_nonneg(rho, "ModelParams.rho");
        check_nonneg(lambda_S, "ModelParams.lambda_S");
        check_nonneg(lambda_E, "ModelParams.lambda_E");
        check_nonneg(lambda_I, "ModelParams.lambda_I");
        check_nonneg(lambda_Q, "ModelParams.lambda_Q");
        check_nonneg(lambda_R, "ModelParams.lambda_R");
    }

private:
    static void check_nonneg(double v, const char* name)
    {
        if (!std::isfinite(v) || v < 0.0) {
            throw std::invalid_argument(
                std::string(name) + " must be finite and nonnegative");
        }
    }
};

/// Objective weights.  kappa1/kappa2 price the running infection burden
/// (E+I and Q), kappa3/kappa4 the terminal burden, w1..w3 the running
/// control effort, sigma1..sigma3 the terminal control effort.  The
/// bang-bang control law requires sigma = 0.
struct CostWeights
{
    double kappa1 = 1.0;
    double kappa2 = 1.0;
    double kappa3 = 1.0;
    double kappa4 = 1.0;
    double w1 = 1.0;
    double w2 = 1.0;
    double w3 = 1.0;
    double sigma1 = 0.0;
    double sigma2 = 0.0;
    double sigma3 = 0.0;

    bool all_sigma_zero() const
    {
        return sigma1 == 0.0 && sigma2 == 0.0 && sigma3 == 0.0;
    }

    void validate() const
    {
        check_nonneg(kappa1, "CostWeights.kappa1");
        check_nonneg(kappa2, "CostWeights.kappa2");
        check_nonneg(kappa3, "CostWeights.kappa3");
        check_nonneg(kappa4, "CostWeights.kappa4");
        check_nonneg(w1, "CostWeights.w1");
        check_nonneg(w2, "CostWeights.w2");
        check_nonneg(w3, "CostWeights.w3");
        check_nonneg(sigma1, "CostWeights.sigma1");
        check_nonneg(sigma2, "CostWeights.sigma2");
        check_nonneg(sigma3, "CostWeights.sigma3");
    }

private:
    static void check_nonneg(double v, const char* name)
    {
        if (!std::isfinite(v) || v < 0.0) {
            throw std::invalid_argument(
                std::string(name) + " must be finite and nonnegative");
        }
    }
};

/// Space-time discretization.  Cell-centered grid of nx by ny cells with
/// spacings hx, hy; time interval [0, T] in steps of dt.  T must be an
/// integer multiple of dt.
struct Discretization
{
    int nx = 50;
    int ny = 50;
    double hx = 1.0;
    double hy = 1.0;
    double T = 60.0;
    double dt = 0.1;

    /// Number of time steps; the trajectory holds num_steps() + 1 snapshots.
    int num_steps() const
    {
        return static_cast<int>(std::lround(T / dt));
    }

    void validate() const
    {
        if (nx < 1 || ny < 1) {
            throw std::invalid_argument(
                "Discretization.nx and Discretization.ny must be at least 1");
        }
        if (!(hx > 0.0) || !(hy > 0.0)) {
            throw std::invalid_argument(
                "Discretization.hx and Discretization.hy must be positive");
        }
        if (!(T > 0.0) || !(dt > 0.0)) {
            throw std::invalid_argument(
                "Discretization.T and Discretization.dt must be positive");
        }
        const int nt = num_steps();
        if (nt < 1 || std::abs(nt * dt - T) > 1e-9 * T) {
            throw std::invalid_argument(
                "Discretization.T must be an integer multiple of Discretization.dt");
        }
    }
};

/// Initial condition: uniform susceptible background with one seeded
/// hotspot cell.  At the hotspot the background density is split into
/// fractions frac_s, frac_e, frac_i of S, E and I, preserving the cell
/// total when the fractions sum to 1.
struct InitialCondition
{
    double background_s = 100.0;
    int hotspot_ix = 15;
    int hotspot_iy = 15;
    double frac_s = 0.75;
    double frac_e = 0.15;
    double frac_i = 0.10;

    void validate(const Discretization& grid) const
    {
        if (!std::isfinite(background_s) || background_s < 0.0) {
            throw std::invalid_argument(
                "InitialCondition.background_s must be finite and nonnegative");
        }
        if (hotspot_ix < 0 || hotspot_ix >= grid.nx ||
            hotspot_iy < 0 || hotspot_iy >= grid.ny) {
            throw std::invalid_argument(
                "InitialCondition.hotspot_ix/hotspot_iy must lie inside the grid");
        }
        if (frac_s < 0.0 || frac_e < 0.0 || frac_i < 0.0) {
            throw std::invalid_argument(
                "InitialCondition.frac_s/frac_e/frac_i must be nonnegative");
        }
        if (frac_s + frac_e + frac_i > 1.0 + 1e-12) {
            throw std::invalid_argument(
                "InitialCondition.frac_s + frac_e + frac_i must not exceed 1");
        }
    }
};

/// Forward-backward sweep settings.
struct FbsSettings
{
    int max_iter = 100;
    double omega = 0.5;           ///< relaxation weight on the control update
    double tol_control = 1e-5;    ///< relative L2 control change threshold
    double tol_cost = 1e-7;       ///< relative cost change threshold
    SignConvention sign = SignConvention::duality;

    void validate() const
    {
        if (max_iter < 1) {
            throw std::invalid_argument("FbsSettings.max_iter must be at least 1");
        }
        if (!(omega > 0.0) || omega > 1.0) {
            throw std::invalid_argument("FbsSettings.omega must lie in (0, 1]");
        }
        if (!(tol_control >= 0.0) || !(tol_cost >= 0.0)) {
            throw std::invalid_argument(
                "FbsSettings.tol_control and FbsSettings.tol_cost must be nonnegative");
        }
    }
};

/// Which of the three controls a given intervention case may use.
/// Case 1 is uncontrolled; cases 2, 3, 4 enable vaccination, treatment and
/// social distancing alone; cases 5, 6, 7 the three pairs; case 8 all three.
inline std::array<bool, 3> case_mask(int case_id)
{
    switch (case_id) {
        case 1: return {false, false, false};
        case 2: return {true, false, false};
        case 3: return {false, true, false};
        case 4: return {false, false, true};
        case 5: return {true, true, false};
        case 6: return {true, false, true};
        case 7: return {false, true, true};
        case 8: return {true, true, true};
        default:
            throw std::invalid_argument(
                "case_id must lie in 1..8, got " + std::to_string(case_id));
    }
}

/// Full description of one optimization run.
struct ScenarioSpec
{
    ModelParams params;
    CostWeights weights;
    Discretization grid;
    InitialCondition ic;
    FbsSettings fbs;
    int case_id = 1;
    std::array<bool, 3> active = {false, false, false};

    void validate() const
    {
        params.validate();
        weights.validate();
        grid.validate();
        ic.validate(grid);
        fbs.validate();
        if (case_id < 0 || case_id > 8) {
            throw std::invalid_argument(
                "ScenarioSpec.case_id must lie in 0..8 (0 marks a custom mask)");
        }
    }
};

/// Baseline scenario: default rates and weights, 50x50 km grid of 1 km
/// cells, 60 day horizon at dt = 0.1, hotspot seeded at cell (15, 15),
/// control mask taken from the case number.
inline ScenarioSpec default_paper_scenario(int case_id)
{
    ScenarioSpec s;
    s.case_id = case_id;
    s.active = case_mask(case_id);
    return s;
}

} // namespace seiqr

#endif
