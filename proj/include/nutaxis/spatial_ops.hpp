#ifndef NUTAXIS_SPATIAL_OPS_HPP
#define NUTAXIS_SPATIAL_OPS_HPP

#include "nutaxis/errors.hpp"
#include "nutaxis/grid.hpp"
#include "nutaxis/model.hpp"

#include <Eigen/Dense>

#include <cmath>

// Finite-volume operators on a Grid. Cell fields have n entries, face fields n + 1
// with both boundary entries zero (no-flux / symmetry). All reductions are plain
// sequential sums over cells or faces in index order, so results do not depend on
// threading.

namespace nutaxis {

using FaceField = Eigen::VectorXd;

enum class FluxScheme { upwind, central };

/// Interior faces (f_{k} - f_{k-1}) / h, boundary faces 0.
template <typename Derived>
FaceField face_gradient(const Eigen::MatrixBase<Derived>& f, const Grid& grid) {
    const Eigen::Index n = grid.size();
    FaceField g = FaceField::Zero(n + 1);
    g.segment(1, n - 1) = (f.tail(n - 1) - f.head(n - 1)) / grid.h;
    return g;
}

/// Σ m_i f_i.
template <typename Derived>
double integrate(const Eigen::MatrixBase<Derived>& f, const Grid& grid) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < grid.size(); ++i) s += grid.measure[i] * f[i];
    return s;
}

/// Divergence of a face flux: out_i = (a_{i+1} F_{i+1} - a_i F_i) / m_i. Boundary
/// entries of the flux are ignored (treated as zero).
inline Field flux_divergence(const FaceField& flux, const Grid& grid) {
    const Eigen::Index n = grid.size();
    Field out(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double right = i + 1 < n ? grid.area[i + 1] * flux[i + 1] : 0.0;
        const double left = i > 0 ? grid.area[i] * flux[i] : 0.0;
        out[i] = (right - left) / grid.measure[i];
    }
    return out;
}

/// Three-point Laplacian with zero boundary flux. Σ m_i (Δ_h f)_i = 0 up to rounding.
template <typename Derived>
Field laplacian_neumann(const Eigen::MatrixBase<Derived>& f, const Grid& grid) {
    return flux_divergence(face_gradient(f, grid), grid);
}

/// -∇·(χ u F_ε'(u) ∇w) in conservative form. The transported density u F_ε'(u) is
/// taken from the upwind cell of the drift χ∇w, or averaged for `central`.
template <typename DerivedU, typename DerivedW>
Field chemotaxis_divergence(const Eigen::MatrixBase<DerivedU>& u, const Eigen::MatrixBase<DerivedW>& w,
                            const Grid& grid, double chi, double eps,
                            FluxScheme scheme = FluxScheme::upwind) {
    const Eigen::Index n = grid.size();
    const Field q = (u.array() * f_eps_prime(u.derived(), eps).array()).matrix();
    FaceField flux = FaceField::Zero(n + 1);
    for (Eigen::Index k = 1; k < n; ++k) {
        const double dw = (w[k] - w[k - 1]) / grid.h;
        double carried;
        if (scheme == FluxScheme::central)
            carried = 0.5 * (q[k - 1] + q[k]);
        else
            carried = dw >= 0.0 ? q[k - 1] : q[k];
        flux[k] = chi * carried * dw;
    }
    return -flux_divergence(flux, grid);
}

/// Σ over interior faces of a_k h |∇_h f|^p / g_face, with g_face the arithmetic
/// mean of the adjacent cells floored at g_floor. With `apply_floor` false a face
/// mean below g_floor throws NonpositiveField instead.
template <typename DerivedF, typename DerivedG>
double weighted_gradient_energy(const Eigen::MatrixBase<DerivedF>& f, const Eigen::MatrixBase<DerivedG>& g,
                                double p, const Grid& grid, double g_floor = 1e-12,
                                bool apply_floor = true) {
    const Eigen::Index n = grid.size();
    double s = 0.0;
    for (Eigen::Index k = 1; k < n; ++k) {
        const double grad = (f[k] - f[k - 1]) / grid.h;
        if (grad == 0.0) continue;
        double weight = 0.5 * (g[k - 1] + g[k]);
        if (weight < g_floor) {
            if (!apply_floor) throw NonpositiveField("weight", static_cast<long>(k));
            weight = g_floor;
        }
        const double mag = p == 2.0 ? grad * grad : std::pow(std::abs(grad), p);
        s += grid.area[k] * grid.h * mag / weight;
    }
    return s;
}

/// Unweighted Σ a_k h |∇_h f|^p.
template <typename DerivedF>
double gradient_energy(const Eigen::MatrixBase<DerivedF>& f, double p, const Grid& grid) {
    return weighted_gradient_energy(f, Field::Ones(grid.size()), p, grid);
}

/// Tridiagonal matrix stored by diagonals: row i reads
/// lower[i]·x[i-1] + diag[i]·x[i] + upper[i]·x[i+1] (lower[0], upper[n-1] unused).
struct TridiagonalBand {
    Eigen::VectorXd lower;
    Eigen::VectorXd diag;
    Eigen::VectorXd upper;

    Eigen::Index size() const { return diag.size(); }
    Field apply(const Field& x) const;
};

/// The band of laplacian_neumann on this grid.
TridiagonalBand laplacian_band(const Grid& grid);

/// Thomas algorithm. Throws LinearSolveFailure on a zero pivot.
Field solve_tridiagonal(const TridiagonalBand& band, const Field& rhs);

}  // namespace nutaxis

#endif  // NUTAXIS_SPATIAL_OPS_HPP
