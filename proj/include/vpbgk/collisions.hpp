#pragma once

#include <cstdint>
#include <vector>

#include "vpbgk/config.hpp"
#include "vpbgk/domain.hpp"
#include "vpbgk/rng.hpp"

namespace vpbgk {

// Per-cell discrete moments: mass (summed weights), mean velocity, and
// temperature with the 2D convention T = (1/(2 rho)) sum w |v - U|^2.
// Cells with no particles are marked unoccupied; their entries are zero and
// must never be consumed.
struct CellMomentsGrid {
    Grid mass;
    Grid ux;
    Grid uy;
    Grid temperature;
    std::vector<char> occupied;

    void resize(std::size_t cells) {
        mass.assign(cells, 0.0);
        ux.assign(cells, 0.0);
        uy.assign(cells, 0.0);
        temperature.assign(cells, 0.0);
        occupied.assign(cells, 0);
    }
};

// Two-pass estimate (mean first, then centered second moment) for stability.
CellMomentsGrid compute_cell_moments(const ParticleEnsemble& ensemble, const Mesh& mesh,
                                     const PhaseDomain& domain, unsigned threads = 0);

// BGK relaxation as a velocity jump process: with probability exp(-nu*h) a
// particle keeps its velocity, otherwise it is redrawn from the local cell
// Maxwellian, v = U_cell + xi * sqrt(T_cell) with xi a 2D standard normal
// pair. Positions are untouched, so per-cell mass is conserved exactly;
// momentum and temperature are conserved in expectation.
//
// The keep/redraw uniforms and the normal pairs are addressed by particle
// index in streams keyed by (seed, purpose, step) only, so all collocation
// nodes consume identical draws at a given step.
//
// With params.conserve_cell_moments the redrawn velocities are shifted and
// rescaled per cell so momentum and energy are conserved exactly as well.
void bgk_collide(ParticleEnsemble& ensemble, const CellMomentsGrid& moments,
                 const Mesh& mesh, const CollisionParams& params, double h,
                 const RngPolicy& rng, std::uint64_t step, unsigned threads = 0);

} // namespace vpbgk
