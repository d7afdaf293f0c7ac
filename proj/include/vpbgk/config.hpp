#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vpbgk/domain.hpp"

namespace vpbgk {

enum class Scenario { Sod2D, KelvinHelmholtz, Custom };

enum class ControlMethod {
    PointwiseLimit,    // per-particle feedback, vanishing-step form, then cell averaging
    PointwiseDiscrete, // per-particle feedback, finite-step form, then cell averaging
    Cellwise,          // feedback assembled directly from per-cell statistics
    Fixed,             // constant field fixed_b, no feedback
};

enum class StatOperatorKind { Expectation, WorstCase };

enum class SodTempProfile { Base, High10, High50, High100 };

struct CollisionParams {
    double nu = 0.0; // effective collision frequency, >= 0; 0 = collisionless
    // Optional exact per-cell momentum/energy enforcement on resampled
    // velocities (shift and rescale). Default off: the plain jump rule
    // conserves them in expectation only.
    bool conserve_cell_moments = false;
};

struct ControlParams {
    ControlMethod method = ControlMethod::PointwiseLimit;
    StatOperatorKind op = StatOperatorKind::WorstCase;
    double alpha_x = 5.0;
    double beta_x = 2.0;
    double alpha_v = 15.0;
    double beta_v = 12.0;
    double gamma = 2.5e-3; // control-magnitude penalization, > 0
    double max_field = 50.0; // admissible |B| bound, > 0
    double y_target = 0.75;  // target mean y position
    int n_cells = 4;         // horizontal control slabs
    double fixed_b = 1.5;    // field value when method == Fixed
    // Cellwise method: use the vanishing-step form (divide by gamma) instead
    // of the finite-step denominator.
    bool cellwise_limit_form = true;
    // Pointwise methods: also project every per-particle value onto
    // [-max_field, max_field] before the cell averaging. Off by default: the
    // admissibility bound constrains the applied slab field, and saturating
    // the intermediate per-particle values at small gamma cancels the slab
    // average into a bare sign imbalance, which defeats the confinement.
    bool clamp_particles = false;
};

// Wall-adjacent y-bands where boundary statistics are accumulated.
struct BoundaryBand {
    double lower_min = 0.0;
    double lower_max = 0.0;
    double upper_min = 0.0;
    double upper_max = 0.0;
};

struct SodParams {
    SodTempProfile temp_profile = SodTempProfile::Base;
};

struct KhParams {
    double k0 = 0.15;
    double eps0 = 0.1;
    double eps1 = 0.001;
    double ux = 1.0; // shear speed; +/- by half-plane
};

// "custom" scenario: uniform positions, drifting Maxwellian with
// T(z) = t0 + t_slope * z. Mainly a harness for generic machinery.
struct CustomParams {
    double t0 = 1.0;
    double t_slope = 0.0;
    double ux = 0.0;
    double uy = 0.0;
    double density = 1.0;
};

struct OutputOptions {
    std::string dir = "out";
    std::vector<double> snapshot_times;
    bool write_snapshots = true;
    bool write_moments = false;
};

struct SweepOptions {
    std::vector<int> members{2, 4, 8};
    int ref = 32;
    double t_final = 0.2;
};

struct CompareOptions {
    // Variant tokens: worst-case | expectation | pointwise-limit |
    // pointwise-discrete | cellwise | fixed. Operator tokens switch the
    // statistical operator; method tokens switch the feedback form.
    std::vector<std::string> variants{"worst-case", "expectation"};
};

struct ScenarioConfig {
    Scenario scenario = Scenario::Sod2D;
    long n_particles = 200000;
    double h = 0.05;
    double t_final = 2.0;
    std::uint64_t seed = 1u;
    unsigned threads = 0; // 0 = hardware concurrency

    PhaseDomain domain{0.0, 1.5, 0.0, 1.5};
    int mx = 64;
    int my = 64;

    CollisionParams collision;
    ControlParams control;

    int n_z = 4;
    std::optional<double> fixed_z; // pin the single collocation node (n_z == 1)

    BoundaryBand band{0.0, 0.234, 1.476, 1.5};

    SodParams sod;
    KhParams kh;
    CustomParams custom;

    OutputOptions output;
    SweepOptions sweep;
    CompareOptions compare;

    Mesh make_mesh() const { return Mesh(domain, mx, my); }

    long step_count() const;
    void validate() const;
};

// Parse "key = value" lines with [section] headers; '#' and ';' comments.
// Returned keys are "section.key" (or bare "key" before any section).
std::map<std::string, std::string> parse_ini(const std::string& text);

// Build a config: scenario-dependent defaults, then file values, then
// overrides (same dotted keys as the file). Unknown keys are errors.
ScenarioConfig load_config(const std::string& path,
                           const std::vector<std::string>& overrides = {});
ScenarioConfig config_from_entries(const std::map<std::string, std::string>& entries,
                                   const std::vector<std::string>& overrides = {});

// Deterministic round-trip serialization of a resolved config.
std::string to_ini(const ScenarioConfig& cfg);

const char* to_string(Scenario s);
const char* to_string(ControlMethod m);
const char* to_string(StatOperatorKind k);
const char* to_string(SodTempProfile p);

} // namespace vpbgk
