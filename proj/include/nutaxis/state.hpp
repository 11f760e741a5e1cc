#ifndef NUTAXIS_STATE_HPP
#define NUTAXIS_STATE_HPP

#include "nutaxis/grid.hpp"
#include "nutaxis/model.hpp"

namespace nutaxis {

/// Cell-centered (u, v, w) at time t.
struct State {
    double t = 0.0;
    Field u;
    Field v;
    Field w;

    Eigen::Index size() const { return u.size(); }
};

enum class ProfileKind { constant, gaussian };

/// x ↦ base + amp·exp(-rate·(x - center)^2), or a constant. A mirrored profile
/// is evaluated at the reflection x_lo + x_hi - x of the point across the
/// domain midpoint (radial grids reflect across [0, R]).
struct InitialProfile {
    ProfileKind kind = ProfileKind::constant;
    double base = 0.0;
    double amp = 0.0;
    double rate = 0.0;
    double center = 0.0;
    bool mirrored = false;

    static InitialProfile constant(double c) { return {ProfileKind::constant, c, 0.0, 0.0, 0.0, false}; }
    static InitialProfile gaussian(double base, double amp, double rate, double center) {
        return {ProfileKind::gaussian, base, amp, rate, center, false};
    }
    InitialProfile mirror() const {
        InitialProfile p = *this;
        p.mirrored = !mirrored;
        return p;
    }

    double operator()(double x, double lo, double hi) const;
    /// Exact supremum and infimum over [lo, hi].
    double supremum(double lo, double hi) const;
    double infimum(double lo, double hi) const;
    Field sample(const Grid& grid) const;

    friend bool operator==(const InitialProfile&, const InitialProfile&) = default;
};

struct InitialProfiles {
    InitialProfile u;
    InitialProfile v;
    InitialProfile w;

    friend bool operator==(const InitialProfiles&, const InitialProfiles&) = default;
};

struct InitResult {
    State state;
    double competition_index = 0.0;  // I(0)
};

/// Samples profiles at cell centers. Throws NonpositiveField when u0 or v0 is not
/// strictly positive, or w0 is negative, at any center.
InitResult init_state(const InitialProfiles& profiles, const Grid& grid);

std::string to_string(ProfileKind kind);
ProfileKind profile_kind_from_string(const std::string& s);

}  // namespace nutaxis

#endif  // NUTAXIS_STATE_HPP
