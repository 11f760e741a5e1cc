#ifndef NUTAXIS_REDUCED_MODELS_HPP
#define NUTAXIS_REDUCED_MODELS_HPP

#include "nutaxis/grid.hpp"
#include "nutaxis/integrator.hpp"
#include "nutaxis/model.hpp"

#include <vector>

namespace nutaxis {

// ---------------------------------------------------------------------------
// Migration-free system: u' = δuw, v' = αvw, w' = -βuw - γvw.
// ---------------------------------------------------------------------------

struct OdeState {
    double t = 0.0;
    double u = 0.0;
    double v = 0.0;
    double w = 0.0;

    friend bool operator==(const OdeState&, const OdeState&) = default;
};

/// Classical RK4. Throws InvalidArgument for dt <= 0.
OdeState ode_step_rk4(const OdeState& s, const ModelParams& params, double dt);

/// Trajectory including both endpoints; the last step is shortened to hit t_end.
std::vector<OdeState> ode_solve(const OdeState& s0, const ModelParams& params, double t_end, double dt);

/// Endpoint only, without storing the trajectory.
OdeState ode_integrate(const OdeState& s0, const ModelParams& params, double t_end, double dt);

/// (β/δ)u + (γ/α)v + w, constant along exact trajectories.
double conserved_quantity(const OdeState& s, const ModelParams& params);

/// Integrates from u0 = v0 to t_end and returns sgn(u - v), which the
/// migration-free dynamics fix to sgn(δ - α). Throws HorizonTooShort unless
/// w(t_end) < 1e-10 w0, InvalidArgument unless u0 == v0.
int sign_law_check(double u0, double v0, double w0, const ModelParams& params, double t_end,
                   double dt = 1e-3);

// ---------------------------------------------------------------------------
// Heat comparison problem U_t = D ΔU with no-flux boundary.
// ---------------------------------------------------------------------------

struct JensenReport {
    double c1 = 0.0;  ///< ln(mean φ) - mean(ln φ)
    bool strict = false;
};

/// Jensen gap for Ψ = ln. `strict` is set when c1 > 1e-12 (φ numerically nonconstant).
JensenReport jensen_gap(const Field& phi, const Grid& grid);

struct HeatSample {
    double t = 0.0;
    double log_integral = 0.0;  ///< ∫ ln U
    double sup_deviation = 0.0; ///< ‖U - mean U‖∞
};

/// Output times t_first·factor^k up to and including t_end.
std::vector<double> geometric_schedule(double t_first, double factor, double t_end);

/// Runs the integrator with χ = 0 and every reaction switched off.
std::vector<HeatSample> heat_solve(const Field& u0, double diffusivity, const Grid& grid,
                                   std::span<const double> schedule, const StepperConfig& cfg = {});

struct HeatConstants {
    double L = 0.0;       ///< c1 |Ω| / 2
    double t0 = 0.0;      ///< first sampled time where ∫ln U - ∫ln u0 ≥ L
    double c1 = 0.0;
    double limit = 0.0;   ///< c1 |Ω|
    std::vector<HeatSample> samples;
};

/// Runs heat_solve on a geometric schedule (first 1e-4/D, factor 1.25) until
/// 10/(D λ1) with λ1 the first nonzero Neumann eigenvalue scale π²/ℓ², ℓ the
/// domain extent, and returns L and the first crossing t0.
HeatConstants lemma15_constants(const Field& u0, double diffusivity, const Grid& grid,
                                const StepperConfig& cfg = {});

}  // namespace nutaxis

#endif  // NUTAXIS_REDUCED_MODELS_HPP
