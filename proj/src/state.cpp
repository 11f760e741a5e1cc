#include "nutaxis/state.hpp"

#include "nutaxis/errors.hpp"
#include "nutaxis/spatial_ops.hpp"

#include <algorithm>
#include <cmath>

namespace nutaxis {

double InitialProfile::operator()(double x, double lo, double hi) const {
    if (kind == ProfileKind::constant) return base;
    const double y = mirrored ? lo + hi - x : x;
    const double d = y - center;
    return base + amp * std::exp(-rate * d * d);
}

namespace {

// Nearest and farthest distance from c to the points of [lo, hi].
double near_dist(double c, double lo, double hi) { return c < lo ? lo - c : (c > hi ? c - hi : 0.0); }
double far_dist(double c, double lo, double hi) { return std::max(std::abs(c - lo), std::abs(c - hi)); }

}  // namespace

double InitialProfile::supremum(double lo, double hi) const {
    if (kind == ProfileKind::constant || amp == 0.0) return base;
    const double c = mirrored ? lo + hi - center : center;
    const double dist = amp > 0.0 ? near_dist(c, lo, hi) : far_dist(c, lo, hi);
    return base + amp * std::exp(-rate * dist * dist);
}

double InitialProfile::infimum(double lo, double hi) const {
    if (kind == ProfileKind::constant || amp == 0.0) return base;
    const double c = mirrored ? lo + hi - center : center;
    const double dist = amp > 0.0 ? far_dist(c, lo, hi) : near_dist(c, lo, hi);
    return base + amp * std::exp(-rate * dist * dist);
}

Field InitialProfile::sample(const Grid& grid) const {
    const double lo = grid.faces[0];
    const double hi = grid.faces[grid.size()];
    Field out(grid.size());
    for (Eigen::Index i = 0; i < grid.size(); ++i) out[i] = (*this)(grid.centers[i], lo, hi);
    return out;
}

namespace {

void require_positive(const Field& f, const char* name, bool strict) {
    for (Eigen::Index i = 0; i < f.size(); ++i) {
        const bool ok = strict ? f[i] > 0.0 : f[i] >= 0.0;
        if (!ok || !std::isfinite(f[i])) throw NonpositiveField(name, static_cast<long>(i));
    }
}

}  // namespace

InitResult init_state(const InitialProfiles& profiles, const Grid& grid) {
    InitResult r;
    r.state.t = 0.0;
    r.state.u = profiles.u.sample(grid);
    r.state.v = profiles.v.sample(grid);
    r.state.w = profiles.w.sample(grid);
    require_positive(r.state.u, "u", true);
    require_positive(r.state.v, "v", true);
    require_positive(r.state.w, "w", false);
    r.competition_index =
        integrate((r.state.v.array().log() - r.state.u.array().log()).matrix(), grid);
    return r;
}

std::string to_string(ProfileKind kind) {
    return kind == ProfileKind::constant ? "constant" : "gaussian";
}

ProfileKind profile_kind_from_string(const std::string& s) {
    if (s == "constant") return ProfileKind::constant;
    if (s == "gaussian") return ProfileKind::gaussian;
    throw InvalidArgument("unknown profile kind '" + s + "'");
}

}  // namespace nutaxis
