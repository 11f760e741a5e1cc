#include "nutaxis/spatial_ops.hpp"

namespace nutaxis {

Field TridiagonalBand::apply(const Field& x) const {
    const Eigen::Index n = size();
    Field y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        double s = diag[i] * x[i];
        if (i > 0) s += lower[i] * x[i - 1];
        if (i + 1 < n) s += upper[i] * x[i + 1];
        y[i] = s;
    }
    return y;
}

TridiagonalBand laplacian_band(const Grid& grid) {
    const Eigen::Index n = grid.size();
    TridiagonalBand b;
    b.lower = Eigen::VectorXd::Zero(n);
    b.diag = Eigen::VectorXd::Zero(n);
    b.upper = Eigen::VectorXd::Zero(n);
    const double inv_h = 1.0 / grid.h;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double inv_m = 1.0 / grid.measure[i];
        if (i > 0) {
            const double c = grid.area[i] * inv_h * inv_m;
            b.lower[i] = c;
            b.diag[i] -= c;
        }
        if (i + 1 < n) {
            const double c = grid.area[i + 1] * inv_h * inv_m;
            b.upper[i] = c;
            b.diag[i] -= c;
        }
    }
    return b;
}

Field solve_tridiagonal(const TridiagonalBand& band, const Field& rhs) {
    const Eigen::Index n = band.size();
    Eigen::VectorXd c(n);
    Field x(n);
    double pivot = band.diag[0];
    if (pivot == 0.0) throw LinearSolveFailure("zero pivot in row 0");
    c[0] = n > 1 ? band.upper[0] / pivot : 0.0;
    x[0] = rhs[0] / pivot;
    for (Eigen::Index i = 1; i < n; ++i) {
        pivot = band.diag[i] - band.lower[i] * c[i - 1];
        if (pivot == 0.0 || !std::isfinite(pivot))
            throw LinearSolveFailure("zero pivot in row " + std::to_string(i));
        c[i] = i + 1 < n ? band.upper[i] / pivot : 0.0;
        x[i] = (rhs[i] - band.lower[i] * x[i - 1]) / pivot;
    }
    for (Eigen::Index i = n - 2; i >= 0; --i) x[i] -= c[i] * x[i + 1];
    return x;
}

}  // namespace nutaxis
