#ifndef NUTAXIS_GRID_HPP
#define NUTAXIS_GRID_HPP

#include <Eigen/Dense>

#include <string>

namespace nutaxis {

enum class GeometryKind { interval, radial };

/// Interval [x_lo, x_hi] or a ball of radius R in R^dim, resolved radially.
struct Geometry {
    GeometryKind kind = GeometryKind::interval;
    double x_lo = 0.0;
    double x_hi = 1.0;
    int dim = 1;
    double radius = 1.0;
    int n_cells = 400;

    static Geometry interval(double lo, double hi, int n) {
        return Geometry{GeometryKind::interval, lo, hi, 1, 1.0, n};
    }
    static Geometry ball(int dim, double radius, int n) {
        return Geometry{GeometryKind::radial, 0.0, 1.0, dim, radius, n};
    }

    void validate() const;

    /// Exact |Ω|.
    double measure() const;

    friend bool operator==(const Geometry&, const Geometry&) = default;
};

/// Surface measure of the unit sphere in R^d: 2, 2π, 4π.
double sphere_area(int dim);

/// Uniform cell-centered mesh along x (interval) or r (radial).
///
/// Faces are indexed 0..n; cell i sits between faces i and i+1. Face areas are
/// ω_d r^{d-1} for balls (zero at the origin) and 1 for intervals; cell measures
/// are exact shell volumes, so they sum to |Ω| up to rounding.
struct Grid {
    Geometry geometry;
    double h = 0.0;
    Eigen::VectorXd centers;  // n
    Eigen::VectorXd faces;    // n + 1
    Eigen::VectorXd measure;  // n
    Eigen::VectorXd area;     // n + 1

    Eigen::Index size() const { return centers.size(); }
    double total_measure() const { return measure.sum(); }
    bool radial() const { return geometry.kind == GeometryKind::radial; }
};

Grid build_grid(const Geometry& geometry);

std::string to_string(GeometryKind kind);
GeometryKind geometry_kind_from_string(const std::string& s);

}  // namespace nutaxis

#endif  // NUTAXIS_GRID_HPP
