#ifndef NUTAXIS_ORACLES_HPP
#define NUTAXIS_ORACLES_HPP

#include "nutaxis/experiments.hpp"
#include "nutaxis/integrator.hpp"
#include "nutaxis/reduced_models.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace nutaxis {

/// Least-squares slope of log(error) against log(step). Zero errors are skipped;
/// fewer than two usable points give NaN.
double fitted_order(std::span<const double> steps, std::span<const double> errors);

struct ConvergenceStudy {
    std::vector<double> steps;   ///< h or dt
    std::vector<double> errors;  ///< max-norm errors
    double order = 0.0;
};

enum class ManufacturedProblem {
    heat,                 ///< U_t = ΔU from 1 + A cos(πx) on [0, 1] against the exact solution at t = 0.1
    advection_diffusion,  ///< D_u Δu - χ∇·(u∇w) for u = 1 + A cos(πx), w = cos(πx) against its closed form
};

/// Spatial order over `resolutions` (cell counts, at least three). For heat,
/// `amplitude` = 0 gives constant data and zero error at every resolution.
ConvergenceStudy manufactured_convergence(ManufacturedProblem problem, std::span<const int> resolutions,
                                          double amplitude = 0.5);

/// Temporal order on the heat eigenmode 1 + A cos(πx) at fixed n. cos(πx_i) is an
/// exact eigenvector of the discrete Neumann Laplacian, so the reference
/// 1 + A exp(-λ_h t) cos(πx_i) carries no spatial error.
ConvergenceStudy temporal_convergence(TimeScheme scheme, std::span<const double> dts, int n_cells = 64,
                                      double t_end = 0.5, double amplitude = 0.5);

/// Self-convergence of the coupled system: runs `cfg` to t_end with dt, dt/2, dt/4
/// (the controller limits must not bind) and returns log2 of the ratio of
/// successive max-norm differences in (u, v, w).
double coupled_temporal_order(const ScenarioConfig& cfg, double t_end, double dt);

struct RegularizationReport {
    std::vector<double> eps;
    std::vector<double> distances;  ///< (∫|u_ε - u_0|² + ∫|w_ε - w_0|²)^{1/2} at t_sample
    bool decreasing = false;        ///< strictly
};

/// Runs cfg with each ε (must be strictly decreasing and nonnegative) and with ε = 0
/// up to t_sample. Integrator failures propagate.
RegularizationReport regularization_study(const ScenarioConfig& cfg, std::span<const double> eps_list,
                                          double t_sample);

/// RK4 with dt = 1e-5.
OdeState ode_reference(const ModelParams& params, const OdeState& s0, double t_end);

struct OracleCase {
    std::string name;
    bool passed = false;
    double value = 0.0;
    double threshold = 0.0;
    std::string detail;
};

struct VerificationReport {
    std::vector<OracleCase> cases;
    bool passed() const;
};

struct VerifyOptions {
    std::uint64_t seed = 1;
    int threads = 1;
    /// Scenario audited in addition to the built-in suite.
    std::optional<ScenarioConfig> scenario;
};

/// Oracle cases, randomized operator properties (seeded) and, if given, the audits
/// of a user scenario. Cases run in parallel; the report keeps a fixed order.
VerificationReport run_verification(const VerifyOptions& opts);

}  // namespace nutaxis

#endif  // NUTAXIS_ORACLES_HPP
