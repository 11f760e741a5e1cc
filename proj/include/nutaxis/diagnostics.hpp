#ifndef NUTAXIS_DIAGNOSTICS_HPP
#define NUTAXIS_DIAGNOSTICS_HPP

#include "nutaxis/grid.hpp"
#include "nutaxis/model.hpp"
#include "nutaxis/state.hpp"

#include <array>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

namespace nutaxis {

/// Floor applied to face weights that divide gradient energies (w may decay to 0).
inline constexpr double kWeightFloor = 1e-12;
/// Floor applied inside every logarithm after positivity has been checked.
inline constexpr double kLogFloor = 1e-300;
/// Relative allowance in the mass monotonicity audits. Face fluxes of the discrete
/// Laplacian cancel only to round-off, and the drift accumulates over ~1e5 steps.
inline constexpr double kMassRoundoff = 1e-9;

/// One output-time row. cum_D and cum_w are trapezoidal sums over the output
/// schedule of D(t) and ∫w.
struct DiagnosticsRecord {
    double t = 0.0;
    double I = 0.0;
    double mass_u = 0.0;
    double mass_w = 0.0;
    double max_w = 0.0;
    double min_u = 0.0;
    double F_quasi = 0.0;
    double D_dissip = 0.0;
    double L_lyap = 0.0;
    double fisher_u = 0.0;    ///< ∫|∇u|²/u²
    double grad_w_L2 = 0.0;   ///< ∫|∇w|²
    double max_grad_u = 0.0;  ///< max_faces |∂u/∂r|
    double cum_D = 0.0;
    double cum_w = 0.0;

    static constexpr std::size_t kFieldCount = 14;
    static const std::array<std::string_view, kFieldCount>& field_names();
    std::array<double, kFieldCount> values() const;
    static DiagnosticsRecord from_values(const std::array<double, kFieldCount>& v);
};

/// Constants fixed by the initial data.
struct DerivedConstants {
    double kappa = 0.0;       ///< γ · inf v0 (profile infimum when the profiles are known)
    double kappa_cells = 0.0; ///< γ · min_i v0, the rate the discrete audits use
    double a = 0.0;           ///< (α + 1/4) / κ
    double b = 0.0;           ///< χ² / (4 D_u)
    double M_star = 0.0;      ///< ∫|∇w0|²/w0
    double sigma_star = 0.0;  ///< ‖w0‖∞ (profile supremum when the profile is known)
    double w0_max_cells = 0.0;  ///< max_i w0 at cell centers
    double jensen_c1 = 0.0;   ///< ln(mean u0) - mean(ln u0)
    double v0_min = 0.0;
    double v0_max = 0.0;
    double u0_mass = 0.0;
    double w0_mass = 0.0;
    double w0_sq = 0.0;  ///< ∫w0²

    friend bool operator==(const DerivedConstants&, const DerivedConstants&) = default;
};

/// ∫ ln(v/u). Throws NonpositiveField if u or v is not positive somewhere.
double competition_index(const State& s, const Grid& grid);

/// With `profiles`, kappa and sigma_star use the exact infimum of v0 and supremum
/// of w0 over the domain; otherwise the cell extrema.
DerivedConstants derived_constants(const State& initial, const ModelParams& params, const Grid& grid,
                                   const InitialProfiles* profiles = nullptr);

/// β∫u ln u + (γχ/2α)∫|∇v|²/v + (χ/2)∫|∇w|²/w.
double quasi_energy(const State& s, const ModelParams& params, const Grid& grid);

/// ∫|∇u|²/u + ∫|Δ_h w|² + ∫|∇w|⁴.
double dissipation(const State& s, const Grid& grid);

/// ∫|∇u|²/u², face weights are face means of u².
double fisher_information(const Field& u, const Grid& grid);

/// I + a∫w + b∫w².
double lyapunov(const State& s, const DerivedConstants& consts, const Grid& grid);

/// Record at s; `prev` (null for the first row) feeds the cumulative columns.
DiagnosticsRecord make_record(const State& s, const ModelParams& params, const DerivedConstants& consts,
                              const Grid& grid, const DiagnosticsRecord* prev);

struct AuditCheck {
    std::string name;
    bool passed = true;
    double worst_slack = 0.0;  ///< min over times of (bound - value); negative means violated
    double worst_time = 0.0;
};

struct AuditReport {
    std::vector<AuditCheck> checks;

    bool passed() const;
    const AuditCheck* find(std::string_view name) const;
};

/// Time-series audits on a record series:
///   mass_bound     Σm u ≤ Σm u0 + Σm w0/β  (+1e-8 relative)
///   w_decay        max w ≤ max_i w0 e^{-κ̂t} (1 + 1e-6), κ̂ = kappa_cells
///   lyapunov       L_{k+1} ≤ L_k + 1e-3 Δt (1 + |L_k|)
///   integrated     I + (D_u/2)∫∫|∇u|²/u² + (1/4)∫∫w ≤ I0 + a∫w0 + b∫w0²
///   grad_w         ∫∫|∇w|² ≤ (1/2)∫w0²
///   mass_u_monotone / mass_w_monotone  (relative allowance kMassRoundoff)
/// Time integrals use the trapezoid rule on the record times.
AuditReport audit_records(const std::vector<DiagnosticsRecord>& records, const DerivedConstants& consts,
                          const ModelParams& params);

/// Just the `integrated` and `grad_w` checks.
AuditReport integrated_inequality_audit(const std::vector<DiagnosticsRecord>& records,
                                        const DerivedConstants& consts, const ModelParams& params);

/// Tracks min v ≥ min v0 and max v ≤ max v0 exp(α max w0 / κ̂)(1 + 1e-6) over observed states.
class VBoundsAudit {
public:
    VBoundsAudit(const DerivedConstants& consts, const ModelParams& params);
    void observe(const State& s);
    AuditCheck lower() const { return lower_; }
    AuditCheck upper() const { return upper_; }

private:
    double lo_bound_;
    double hi_bound_;
    AuditCheck lower_{"v_lower", true, std::numeric_limits<double>::infinity(), 0.0};
    AuditCheck upper_{"v_upper", true, std::numeric_limits<double>::infinity(), 0.0};
};

}  // namespace nutaxis

#endif  // NUTAXIS_DIAGNOSTICS_HPP
