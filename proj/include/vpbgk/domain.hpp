#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "vpbgk/errors.hpp"

namespace vpbgk {

// Rectangular phase-space position domain. Boundary kinds are fixed by the
// model: periodic in x, specular-reflective walls in y.
struct PhaseDomain {
    double x_min = 0.0;
    double x_max = 1.0;
    double y_min = 0.0;
    double y_max = 1.0;

    double length_x() const { return x_max - x_min; }
    double length_y() const { return y_max - y_min; }

    bool contains(double x, double y) const {
        return x >= x_min && x <= x_max && y >= y_min && y <= y_max;
    }

    void validate() const {
        if (!(x_max > x_min) || !(y_max > y_min))
            throw ConfigError("domain: x_max > x_min and y_max > y_min required");
    }
};

// Uniform cell grid used for field solves and per-cell moments.
// Grid arrays are stored row-major with x fastest: index = iy * mx + ix,
// values live at cell centers.
struct Mesh {
    int mx = 0;
    int my = 0;
    double dx = 0.0;
    double dy = 0.0;
    double x_min = 0.0;
    double y_min = 0.0;

    Mesh() = default;
    Mesh(const PhaseDomain& dom, int mx_, int my_)
        : mx(mx_), my(my_),
          dx(dom.length_x() / mx_), dy(dom.length_y() / my_),
          x_min(dom.x_min), y_min(dom.y_min) {
        if (mx_ < 2 || my_ < 2) throw ConfigError("mesh: mx, my >= 2 required");
    }

    std::size_t cell_count() const { return static_cast<std::size_t>(mx) * my; }
    double cell_area() const { return dx * dy; }

    std::size_t index(int ix, int iy) const {
        return static_cast<std::size_t>(iy) * mx + ix;
    }

    int cell_ix(double x) const {
        int ix = static_cast<int>(std::floor((x - x_min) / dx));
        if (ix < 0) ix = 0;
        if (ix >= mx) ix = mx - 1; // x == x_max lands in the last cell
        return ix;
    }
    int cell_iy(double y) const {
        int iy = static_cast<int>(std::floor((y - y_min) / dy));
        if (iy < 0) iy = 0;
        if (iy >= my) iy = my - 1;
        return iy;
    }
    std::size_t cell_of(double x, double y) const { return index(cell_ix(x), cell_iy(y)); }

    double x_center(int ix) const { return x_min + (ix + 0.5) * dx; }
    double y_center(int iy) const { return y_min + (iy + 0.5) * dy; }
};

using Grid = std::vector<double>; // one value per mesh cell, Mesh::index layout

// Particle ensemble for one collocation node: structure-of-arrays layout,
// uniform particle weight. Carries the empirical measure of the kinetic
// density for the node's realization of the random parameter.
struct ParticleEnsemble {
    std::vector<double> x;
    std::vector<double> y;
    std::vector<double> vx;
    std::vector<double> vy;
    double omega = 0.0; // per-particle weight, total mass / N
    int node_index = 0;

    std::size_t size() const { return x.size(); }

    void resize(std::size_t n) {
        x.resize(n);
        y.resize(n);
        vx.resize(n);
        vy.resize(n);
    }
};

} // namespace vpbgk
