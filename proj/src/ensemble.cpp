#include "vpbgk/ensemble.hpp"

#include <limits>

#include "vpbgk/errors.hpp"
#include "vpbgk/parallel.hpp"
#include "vpbgk/pusher.hpp"
#include "vpbgk/sampling.hpp"

namespace vpbgk {

EnsembleSimulation::EnsembleSimulation(const ScenarioConfig& config)
    : config_(config), mesh_(config.make_mesh()), rng_{config.seed} {
    config_.validate();
    if (config_.fixed_z) {
        colloc_.nodes = {*config_.fixed_z};
        colloc_.weights = {1.0};
    } else {
        colloc_ = gauss_legendre_nodes(config_.n_z);
    }
    solver_ = std::make_unique<PoissonSolver>(mesh_);
    nodes_.resize(colloc_.size());
}

void EnsembleSimulation::initialize() {
    for (std::size_t k = 0; k < nodes_.size(); ++k) {
        nodes_[k].particles = sample_initial(config_, colloc_.nodes[k], static_cast<int>(k));
        nodes_[k].field.resize(mesh_.cell_count());
    }
    step_index_ = 0;
}

std::vector<BoundaryStats> EnsembleSimulation::current_boundary_stats() const {
    std::vector<BoundaryStats> out(nodes_.size());
    for (std::size_t k = 0; k < nodes_.size(); ++k)
        out[k] = boundary_stats(nodes_[k].particles, mesh_, config_.band, config_.threads);
    return out;
}

Grid EnsembleSimulation::mean_density() const {
    std::vector<Grid> per_node(nodes_.size());
    for (std::size_t k = 0; k < nodes_.size(); ++k)
        per_node[k] = deposit_density(nodes_[k].particles, mesh_, config_.domain, config_.threads);
    return estimate_expectation(per_node, colloc_);
}

Grid EnsembleSimulation::variance_density() const {
    std::vector<Grid> per_node(nodes_.size());
    for (std::size_t k = 0; k < nodes_.size(); ++k)
        per_node[k] = deposit_density(nodes_[k].particles, mesh_, config_.domain, config_.threads);
    return estimate_variance(per_node, colloc_);
}

Grid EnsembleSimulation::mean_temperature() const {
    std::vector<Grid> per_node(nodes_.size());
    for (std::size_t k = 0; k < nodes_.size(); ++k) {
        const CellMomentsGrid cm =
            compute_cell_moments(nodes_[k].particles, mesh_, config_.domain, config_.threads);
        per_node[k] = cm.temperature;
    }
    return estimate_expectation(per_node, colloc_);
}

ControlField EnsembleSimulation::compute_control(const std::vector<double>& boundary_temps,
                                                 int& z0_out) {
    const ControlParams& cp = config_.control;
    z0_out = -1;
    if (cp.method == ControlMethod::Fixed)
        return ControlField::constant(cp.n_cells, config_.domain.y_min, config_.domain.y_max,
                                      cp.fixed_b);

    StatOperator op;
    op.kind = cp.op;
    if (op.kind == StatOperatorKind::Expectation) {
        op.weights = colloc_.weights;
    } else {
        op.z0 = select_worst_case_node(boundary_temps);
        z0_out = op.z0;
    }

    std::vector<FeedbackNodeView> views(nodes_.size());
    for (std::size_t k = 0; k < nodes_.size(); ++k)
        views[k] = FeedbackNodeView{&nodes_[k].particles, &nodes_[k].ey_p};

    // Per-particle values feed the cell average unclamped unless configured
    // otherwise; interpolate_cellwise projects the averaged slab value onto
    // the admissible interval.
    ControlParams pw = cp;
    if (!cp.clamp_particles) pw.max_field = std::numeric_limits<double>::infinity();

    switch (cp.method) {
    case ControlMethod::PointwiseLimit: {
        const auto b = pointwise_feedback_limit(views, pw, op, config_.threads);
        const auto ref = reference_positions(views, op, config_.threads);
        return interpolate_cellwise(b, ref, cp, config_.domain.y_min, config_.domain.y_max,
                                    config_.threads);
    }
    case ControlMethod::PointwiseDiscrete: {
        const auto b = pointwise_feedback_discrete(views, config_.h, pw, op, config_.threads);
        const auto ref = reference_positions(views, op, config_.threads);
        return interpolate_cellwise(b, ref, cp, config_.domain.y_min, config_.domain.y_max,
                                    config_.threads);
    }
    case ControlMethod::Cellwise:
        return cellwise_feedback(views, config_.h, cp, op, config_.domain.y_min,
                                 config_.domain.y_max, cp.cellwise_limit_form, config_.threads);
    case ControlMethod::Fixed:
        break; // handled above
    }
    throw InternalError("compute_control: unreachable");
}

StepRecord EnsembleSimulation::step() {
    StepRecord record;
    record.t = time();
    record.op = config_.control.op;
    record.per_node.resize(nodes_.size());

    // Per-node field solve, boundary diagnostics at t^n, then collisions.
    for (std::size_t k = 0; k < nodes_.size(); ++k) {
        NodeState& node = nodes_[k];
        node.field.rho = deposit_density(node.particles, mesh_, config_.domain, config_.threads);
        solver_->solve(node.field);
        gather_field(node.field, mesh_, config_.domain, node.particles, node.ex_p, node.ey_p,
                     config_.threads);
        record.per_node[k] = boundary_stats(node.particles, mesh_, config_.band, config_.threads);
        const CellMomentsGrid moments =
            compute_cell_moments(node.particles, mesh_, config_.domain, config_.threads);
        bgk_collide(node.particles, moments, mesh_, config_.collision, config_.h, rng_,
                    step_index_, config_.threads);
    }

    // Cross-node reduction: the shared control field for this step.
    std::vector<double> boundary_temps(nodes_.size());
    for (std::size_t k = 0; k < nodes_.size(); ++k) boundary_temps[k] = record.per_node[k].temp;
    int z0 = -1;
    const ControlField control = compute_control(boundary_temps, z0);
    record.control_values = control.values;
    record.z0 = z0;

    // Push with the slab value at each particle's own position, then walls.
    for (std::size_t k = 0; k < nodes_.size(); ++k) {
        NodeState& node = nodes_[k];
        const std::size_t n = node.particles.size();
        std::vector<double> b(n);
        par::for_blocks(n, [&](std::size_t, std::size_t lo, std::size_t hi) {
            for (std::size_t m = lo; m < hi; ++m)
                b[m] = control.value_at(node.particles.y[m]);
        }, config_.threads);
        push_semi_implicit(node.particles, node.ex_p, node.ey_p, b, config_.h, config_.threads);
        record.cfl_warnings += apply_boundaries(node.particles, config_.domain, config_.threads);
    }

    ++step_index_;
    return record;
}

} // namespace vpbgk
