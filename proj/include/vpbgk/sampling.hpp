#pragma once

#include "vpbgk/config.hpp"
#include "vpbgk/domain.hpp"
#include "vpbgk/rng.hpp"

namespace vpbgk {

// Initial-condition samplers. All base draws (position uniforms, velocity
// normals) come from node-independent streams, so particle m corresponds
// across collocation nodes: positions are identical at t = 0 and velocities
// differ only through scale/shift factors that depend on the random value z.

// Stratified shock-tube setup: density piecewise constant in y (heavy middle
// stripe), uniform in x; Maxwellian velocities with zero mean and a stripewise
// temperature that carries the uncertainty.
ParticleEnsemble sample_sod(const ScenarioConfig& config, double z);

// Shear-layer setup: sech y-profile with a modulated cosine perturbation in
// x; Maxwellian velocities drifting in -x for y >= 0 and +x for y < 0, with
// uncertain temperature. x is drawn by inverse CDF of the perturbation factor
// tabulated on 4096 intervals; y by the analytic sech inverse CDF.
ParticleEnsemble sample_kh(const ScenarioConfig& config, double z);

// Uniform density, drifting Maxwellian with T(z) = t0 + t_slope * z.
ParticleEnsemble sample_custom(const ScenarioConfig& config, double z);

// Dispatch on config.scenario.
ParticleEnsemble sample_initial(const ScenarioConfig& config, double z, int node_index = 0);

// Stripewise initial temperature of the shock-tube setup (middle stripe
// y in [0.5, 1] is the hot one). Exposed for tests and diagnostics.
double sod_initial_temperature(const SodParams& sod, double y, double z);

} // namespace vpbgk
