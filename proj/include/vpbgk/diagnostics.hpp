#pragma once

#include <vector>

#include "vpbgk/collisions.hpp"
#include "vpbgk/config.hpp"
#include "vpbgk/domain.hpp"

namespace vpbgk {

// Statistics over the wall-adjacent bands: count-based density, mean
// velocity, thermal energy and the boundary temperature rho_b * energy.
// Conventions follow the count normalization 1/(N N_b) where N_b is the
// number of mesh cells intersecting the bands; an empty band yields all
// zeros with the `empty` flag set.
struct BoundaryStats {
    double rho_b = 0.0;
    double ub_x = 0.0;
    double ub_y = 0.0;
    double energy = 0.0; // thermal energy E_b >= 0
    double temp = 0.0;   // T_b = rho_b * E_b
    bool empty = true;
};

BoundaryStats boundary_stats(const ParticleEnsemble& ensemble, const Mesh& mesh,
                             const BoundaryBand& band, unsigned threads = 0);

// Number of mesh cells whose y-extent overlaps the bands (all x columns).
int boundary_cell_count(const Mesh& mesh, const BoundaryBand& band);

// Per-cell moment grids for output: density per unit area, mean velocity and
// temperature; unoccupied cells are flagged and must be rendered as missing.
struct MomentGrids {
    Grid rho; // mass / cell area
    Grid ux;
    Grid uy;
    Grid temperature;
    std::vector<char> occupied;
};

MomentGrids reconstruct_moments_grid(const ParticleEnsemble& ensemble, const Mesh& mesh,
                                     const PhaseDomain& domain, unsigned threads = 0);

} // namespace vpbgk
