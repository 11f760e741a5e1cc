#include "nutaxis/grid.hpp"

#include "nutaxis/errors.hpp"

#include <cmath>
#include <numbers>

namespace nutaxis {

double sphere_area(int dim) {
    switch (dim) {
        case 1: return 2.0;
        case 2: return 2.0 * std::numbers::pi;
        case 3: return 4.0 * std::numbers::pi;
        default: throw InvalidArgument("radial dimension must be 1, 2 or 3");
    }
}

void Geometry::validate() const {
    if (n_cells < 4) throw InvalidArgument("n_cells must be at least 4");
    if (kind == GeometryKind::interval) {
        if (!(x_lo < x_hi)) throw InvalidArgument("interval requires x_lo < x_hi");
    } else {
        if (dim < 1 || dim > 3) throw InvalidArgument("radial dimension must be 1, 2 or 3");
        if (!(radius > 0.0)) throw InvalidArgument("radius must be positive");
    }
}

double Geometry::measure() const {
    if (kind == GeometryKind::interval) return x_hi - x_lo;
    return sphere_area(dim) * std::pow(radius, dim) / dim;
}

Grid build_grid(const Geometry& geometry) {
    geometry.validate();
    const int n = geometry.n_cells;
    Grid g;
    g.geometry = geometry;

    const double lo = geometry.kind == GeometryKind::interval ? geometry.x_lo : 0.0;
    const double hi = geometry.kind == GeometryKind::interval ? geometry.x_hi : geometry.radius;
    g.h = (hi - lo) / n;

    g.faces.resize(n + 1);
    for (int i = 0; i <= n; ++i) g.faces[i] = lo + g.h * i;
    g.faces[n] = hi;
    g.centers = 0.5 * (g.faces.head(n) + g.faces.tail(n));

    g.area.resize(n + 1);
    g.measure.resize(n);
    if (geometry.kind == GeometryKind::interval) {
        g.area.setOnes();
        g.measure.setConstant(g.h);
    } else {
        const int d = geometry.dim;
        const double omega = sphere_area(d);
        for (int i = 0; i <= n; ++i) g.area[i] = omega * std::pow(g.faces[i], d - 1);
        if (d > 1) g.area[0] = 0.0;
        // d == 1: the "ball" is [-R, R]; the origin face carries ω_1 = 2 but the
        // flux there vanishes by symmetry, which the operators enforce directly.
        for (int i = 0; i < n; ++i)
            g.measure[i] = omega / d * (std::pow(g.faces[i + 1], d) - std::pow(g.faces[i], d));
    }
    return g;
}

std::string to_string(GeometryKind kind) {
    return kind == GeometryKind::interval ? "interval" : "radial";
}

GeometryKind geometry_kind_from_string(const std::string& s) {
    if (s == "interval") return GeometryKind::interval;
    if (s == "radial") return GeometryKind::radial;
    throw InvalidArgument("unknown geometry kind '" + s + "'");
}

}  // namespace nutaxis
