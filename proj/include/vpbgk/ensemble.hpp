#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "vpbgk/collisions.hpp"
#include "vpbgk/collocation.hpp"
#include "vpbgk/config.hpp"
#include "vpbgk/control.hpp"
#include "vpbgk/diagnostics.hpp"
#include "vpbgk/field.hpp"
#include "vpbgk/rng.hpp"

namespace vpbgk {

// One record per time step: boundary statistics taken at t^n (pre-collision
// velocities) plus the control that was applied over [t^n, t^n + h).
struct StepRecord {
    double t = 0.0;
    std::vector<BoundaryStats> per_node;
    std::vector<double> control_values;
    StatOperatorKind op = StatOperatorKind::Expectation;
    int z0 = -1; // worst-case node index, -1 under the expectation operator
    std::size_t cfl_warnings = 0;
};

// Lockstep simulation of the coupled collocation-node ensemble. All node
// simulations share the mesh, the step clock, the collision randomness, and
// the control field computed once per step from the cross-node reduction.
class EnsembleSimulation {
public:
    explicit EnsembleSimulation(const ScenarioConfig& config);

    // Sample all node ensembles at t = 0.
    void initialize();

    // Advance every node by one step; returns the step's record.
    StepRecord step();

    double time() const { return static_cast<double>(step_index_) * config_.h; }
    std::uint64_t step_index() const { return step_index_; }

    const ScenarioConfig& config() const { return config_; }
    const Mesh& mesh() const { return mesh_; }
    const CollocationSet& collocation() const { return colloc_; }
    int node_count() const { return static_cast<int>(colloc_.size()); }
    const ParticleEnsemble& particles(int node) const { return nodes_[node].particles; }

    // Boundary statistics of the current state (pre-collision velocities of
    // the next step); used for the final-time record.
    std::vector<BoundaryStats> current_boundary_stats() const;

    // Quadrature mean/variance of the deposited density over nodes.
    Grid mean_density() const;
    Grid variance_density() const;
    // Quadrature mean of the per-cell temperature (unoccupied cells -> 0).
    Grid mean_temperature() const;

private:
    struct NodeState {
        ParticleEnsemble particles;
        FieldState field;
        std::vector<double> ex_p;
        std::vector<double> ey_p;
    };

    ControlField compute_control(const std::vector<double>& boundary_temps, int& z0_out);

    ScenarioConfig config_;
    Mesh mesh_;
    CollocationSet colloc_;
    RngPolicy rng_;
    std::unique_ptr<PoissonSolver> solver_;
    std::vector<NodeState> nodes_;
    std::uint64_t step_index_ = 0;
};

} // namespace vpbgk
