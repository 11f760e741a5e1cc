#include "nutaxis/diagnostics.hpp"

#include "nutaxis/errors.hpp"
#include "nutaxis/reduced_models.hpp"
#include "nutaxis/spatial_ops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace nutaxis {

const std::array<std::string_view, DiagnosticsRecord::kFieldCount>& DiagnosticsRecord::field_names() {
    static const std::array<std::string_view, kFieldCount> names = {
        "t",        "I",        "mass_u",    "mass_w",     "max_w", "min_u", "F_quasi",
        "D_dissip", "L_lyap",   "fisher_u",  "grad_w_L2",  "max_grad_u", "cum_D", "cum_w"};
    return names;
}

std::array<double, DiagnosticsRecord::kFieldCount> DiagnosticsRecord::values() const {
    return {t, I, mass_u, mass_w, max_w, min_u, F_quasi, D_dissip, L_lyap, fisher_u, grad_w_L2, max_grad_u,
            cum_D, cum_w};
}

DiagnosticsRecord DiagnosticsRecord::from_values(const std::array<double, kFieldCount>& v) {
    return {v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7], v[8], v[9], v[10], v[11], v[12], v[13]};
}

namespace {

void require_positive(const Field& f, const char* name) {
    for (Eigen::Index i = 0; i < f.size(); ++i)
        if (!(f[i] > 0.0)) throw NonpositiveField(name, static_cast<long>(i));
}

Eigen::ArrayXd safe_log(const Field& f) { return f.array().max(kLogFloor).log(); }

}  // namespace

double competition_index(const State& s, const Grid& grid) {
    require_positive(s.u, "u");
    require_positive(s.v, "v");
    return integrate((safe_log(s.v) - safe_log(s.u)).matrix(), grid);
}

DerivedConstants derived_constants(const State& initial, const ModelParams& params, const Grid& grid,
                                   const InitialProfiles* profiles) {
    require_positive(initial.u, "u");
    require_positive(initial.v, "v");
    if ((initial.w.array() < 0.0).any()) throw NonpositiveField("w", 0);

    DerivedConstants c;
    c.v0_min = initial.v.minCoeff();
    c.v0_max = initial.v.maxCoeff();
    const double lo = grid.faces[0];
    const double hi = grid.faces[grid.size()];
    c.kappa_cells = params.gamma * c.v0_min;
    c.kappa = profiles ? params.gamma * profiles->v.infimum(lo, hi) : c.kappa_cells;
    c.a = c.kappa > 0.0 ? (params.alpha + 0.25) / c.kappa : std::numeric_limits<double>::infinity();
    c.b = params.chi * params.chi / (4.0 * params.D_u);
    c.M_star = weighted_gradient_energy(initial.w, initial.w, 2.0, grid, kWeightFloor);
    c.w0_max_cells = initial.w.maxCoeff();
    c.sigma_star = profiles ? profiles->w.supremum(lo, hi) : c.w0_max_cells;
    c.jensen_c1 = jensen_gap(initial.u, grid).c1;
    c.u0_mass = integrate(initial.u, grid);
    c.w0_mass = integrate(initial.w, grid);
    c.w0_sq = integrate(initial.w.cwiseAbs2(), grid);
    return c;
}

double quasi_energy(const State& s, const ModelParams& params, const Grid& grid) {
    require_positive(s.u, "u");
    require_positive(s.v, "v");
    const double entropy = integrate((s.u.array() * safe_log(s.u)).matrix(), grid);
    double energy = params.beta * entropy;
    if (params.gamma * params.chi != 0.0 && params.alpha > 0.0)
        energy += params.gamma * params.chi / (2.0 * params.alpha) *
                  weighted_gradient_energy(s.v, s.v, 2.0, grid, kWeightFloor);
    if (params.chi != 0.0)
        energy += 0.5 * params.chi * weighted_gradient_energy(s.w, s.w, 2.0, grid, kWeightFloor);
    return energy;
}

double dissipation(const State& s, const Grid& grid) {
    require_positive(s.u, "u");
    const double fisher = weighted_gradient_energy(s.u, s.u, 2.0, grid, kWeightFloor);
    const double lap_sq = integrate(laplacian_neumann(s.w, grid).cwiseAbs2(), grid);
    const double grad4 = gradient_energy(s.w, 4.0, grid);
    return fisher + lap_sq + grad4;
}

double fisher_information(const Field& u, const Grid& grid) {
    return weighted_gradient_energy(u, u.cwiseAbs2(), 2.0, grid, kWeightFloor);
}

double lyapunov(const State& s, const DerivedConstants& consts, const Grid& grid) {
    return competition_index(s, grid) + consts.a * integrate(s.w, grid) +
           consts.b * integrate(s.w.cwiseAbs2(), grid);
}

DiagnosticsRecord make_record(const State& s, const ModelParams& params, const DerivedConstants& consts,
                              const Grid& grid, const DiagnosticsRecord* prev) {
    DiagnosticsRecord r;
    r.t = s.t;
    r.I = competition_index(s, grid);
    r.mass_u = integrate(s.u, grid);
    r.mass_w = integrate(s.w, grid);
    r.max_w = s.w.maxCoeff();
    r.min_u = s.u.minCoeff();
    r.F_quasi = quasi_energy(s, params, grid);
    r.D_dissip = dissipation(s, grid);
    r.L_lyap = r.I + consts.a * r.mass_w + consts.b * integrate(s.w.cwiseAbs2(), grid);
    r.fisher_u = fisher_information(s.u, grid);
    r.grad_w_L2 = gradient_energy(s.w, 2.0, grid);
    r.max_grad_u = face_gradient(s.u, grid).cwiseAbs().maxCoeff();
    if (prev) {
        const double dt = r.t - prev->t;
        r.cum_D = prev->cum_D + 0.5 * dt * (prev->D_dissip + r.D_dissip);
        r.cum_w = prev->cum_w + 0.5 * dt * (prev->mass_w + r.mass_w);
    }
    return r;
}

bool AuditReport::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const AuditCheck& c) { return c.passed; });
}

const AuditCheck* AuditReport::find(std::string_view name) const {
    for (const auto& c : checks)
        if (c.name == name) return &c;
    return nullptr;
}

namespace {

class CheckBuilder {
public:
    explicit CheckBuilder(std::string name) { check_.name = std::move(name); }

    // Records bound - value at time t.
    void slack(double t, double s) {
        if (s < check_.worst_slack || first_) {
            check_.worst_slack = s;
            check_.worst_time = t;
            first_ = false;
        }
        if (!(s >= 0.0)) check_.passed = false;
    }

    AuditCheck done() { return check_; }

private:
    AuditCheck check_;
    bool first_ = true;
};

}  // namespace

AuditReport integrated_inequality_audit(const std::vector<DiagnosticsRecord>& records,
                                        const DerivedConstants& consts, const ModelParams& params) {
    AuditReport rep;
    if (records.empty()) return rep;
    CheckBuilder integrated("integrated");
    CheckBuilder grad_w("grad_w");
    const DiagnosticsRecord& r0 = records.front();
    const double rhs = r0.I + consts.a * consts.w0_mass + consts.b * consts.w0_sq;
    double cum_fisher = 0.0;
    double cum_grad_w = 0.0;
    double cum_w = 0.0;
    for (std::size_t k = 0; k < records.size(); ++k) {
        const auto& r = records[k];
        if (k > 0) {
            const auto& p = records[k - 1];
            const double dt = r.t - p.t;
            cum_fisher += 0.5 * dt * (p.fisher_u + r.fisher_u);
            cum_grad_w += 0.5 * dt * (p.grad_w_L2 + r.grad_w_L2);
            cum_w += 0.5 * dt * (p.mass_w + r.mass_w);
        }
        const double lhs = r.I + 0.5 * params.D_u * cum_fisher + 0.25 * cum_w;
        integrated.slack(r.t, rhs - lhs);
        grad_w.slack(r.t, 0.5 * consts.w0_sq - cum_grad_w);
    }
    rep.checks.push_back(integrated.done());
    rep.checks.push_back(grad_w.done());
    return rep;
}

AuditReport audit_records(const std::vector<DiagnosticsRecord>& records, const DerivedConstants& consts,
                          const ModelParams& params) {
    AuditReport rep;
    if (records.empty()) return rep;

    CheckBuilder mass("mass_bound");
    CheckBuilder decay("w_decay");
    CheckBuilder lyap("lyapunov");
    CheckBuilder mono_u("mass_u_monotone");
    CheckBuilder mono_w("mass_w_monotone");

    const double mass_bound = consts.u0_mass + consts.w0_mass / params.beta;
    for (std::size_t k = 0; k < records.size(); ++k) {
        const auto& r = records[k];
        mass.slack(r.t, mass_bound * (1.0 + 1e-8) - r.mass_u);
        decay.slack(r.t, consts.w0_max_cells * std::exp(-consts.kappa_cells * r.t) * (1.0 + 1e-6) - r.max_w);
        if (k == 0) continue;
        const auto& p = records[k - 1];
        const double dt = r.t - p.t;
        lyap.slack(r.t, p.L_lyap + 1e-3 * dt * (1.0 + std::abs(p.L_lyap)) - r.L_lyap);
        mono_u.slack(r.t, r.mass_u - p.mass_u + kMassRoundoff * std::abs(p.mass_u));
        mono_w.slack(r.t, p.mass_w - r.mass_w + kMassRoundoff * std::abs(p.mass_w));
    }
    rep.checks.push_back(mass.done());
    rep.checks.push_back(decay.done());
    rep.checks.push_back(lyap.done());
    for (auto& c : integrated_inequality_audit(records, consts, params).checks) rep.checks.push_back(c);
    rep.checks.push_back(mono_u.done());
    rep.checks.push_back(mono_w.done());
    return rep;
}

VBoundsAudit::VBoundsAudit(const DerivedConstants& consts, const ModelParams& params)
    : lo_bound_(consts.v0_min),
      hi_bound_(consts.v0_max * std::exp(params.alpha / consts.kappa_cells * consts.w0_max_cells) * (1.0 + 1e-6)) {}

void VBoundsAudit::observe(const State& s) {
    const double lo = s.v.minCoeff() - lo_bound_;
    const double hi = hi_bound_ - s.v.maxCoeff();
    if (lo < lower_.worst_slack) {
        lower_.worst_slack = lo;
        lower_.worst_time = s.t;
    }
    if (hi < upper_.worst_slack) {
        upper_.worst_slack = hi;
        upper_.worst_time = s.t;
    }
    if (!(lo >= 0.0)) lower_.passed = false;
    if (!(hi >= 0.0)) upper_.passed = false;
}

}  // namespace nutaxis
