#pragma once

#include <cstdint>
#include <vector>

#include "vpbgk/domain.hpp"

namespace vpbgk {

// Semi-implicit first-order push. The velocity update
//   v' = v* + h (v' x B + E),  B = (0, 0, B_m)
// is implicit in v'; for a scalar out-of-plane B the 2x2 system has the
// closed-form solution
//   vx' = (vx* + h Ex + h B (vy* + h Ey)) / (1 + h^2 B^2)
//   vy' = (vy* + h Ey - h B (vx* + h Ex)) / (1 + h^2 B^2)
// followed by x' = x + h v'. For E = 0 the update is a rotation-with-damping:
// |v'|^2 = |v*|^2 / (1 + h^2 B^2) exactly.
//
// ex/ey are the per-particle gathered field values at x^n; b holds the
// per-particle control field value (the slab value at the particle position).
void push_semi_implicit(ParticleEnsemble& ensemble,
                        const std::vector<double>& ex, const std::vector<double>& ey,
                        const std::vector<double>& b, double h, unsigned threads = 0);

// Boundary application: periodic wrap in x, specular reflection in y
// (mirror position, flip vy). The reflection loop is capped; anything still
// outside is clamped with velocity flipped. Returns the number of particles
// that moved more than one domain length in a single step (CFL warning).
std::size_t apply_boundaries(ParticleEnsemble& ensemble, const PhaseDomain& domain,
                             unsigned threads = 0);

} // namespace vpbgk
