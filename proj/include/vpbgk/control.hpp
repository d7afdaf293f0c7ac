#pragma once

#include <vector>

#include "vpbgk/config.hpp"
#include "vpbgk/domain.hpp"

namespace vpbgk {

// Piecewise-constant magnetic control: n_cells uniform horizontal slabs
// partitioning [y_min, y_max] and spanning all x. The field is independent of
// the random parameter by construction; one instance is shared by all
// collocation nodes.
struct ControlField {
    int n_cells = 1;
    double y_min = 0.0;
    double y_max = 1.0;
    std::vector<double> values; // one per slab, |value| <= max_field

    int slab_of(double y) const {
        const double h = (y_max - y_min) / n_cells;
        int k = static_cast<int>((y - y_min) / h);
        if (k < 0) k = 0;
        if (k >= n_cells) k = n_cells - 1;
        return k;
    }
    double value_at(double y) const { return values[slab_of(y)]; }

    static ControlField constant(int n_cells, double y_min, double y_max, double value) {
        ControlField f{n_cells, y_min, y_max, std::vector<double>(n_cells, value)};
        return f;
    }
};

// Statistical operator over collocation nodes: either the quadrature
// expectation or the evaluation at the worst-case node (the node whose
// boundary temperature is currently largest).
struct StatOperator {
    StatOperatorKind kind = StatOperatorKind::Expectation;
    std::vector<double> weights; // quadrature weights (expectation)
    int z0 = 0;                  // selected node (worst-case), per step
};

// Index of the largest boundary temperature; ties break to the lowest index.
int select_worst_case_node(const std::vector<double>& boundary_temps);

// Per-node inputs to the feedback laws. Velocities must be the post-collision
// v* of the current step; ey is the gathered per-particle E_y at x^n and is
// only consulted by the finite-step (discrete) forms.
struct FeedbackNodeView {
    const ParticleEnsemble* particles = nullptr;
    const std::vector<double>* ey = nullptr;
};

// Whole-ensemble means (ybar, vxbar, vybar) with compensated blocked sums.
struct EnsembleMeans {
    double y = 0.0;
    double vx = 0.0;
    double vy = 0.0;
};
EnsembleMeans ensemble_means(const ParticleEnsemble& e, unsigned threads = 0);

// Per-particle feedback magnetic value, vanishing-step form:
//   B_m = clamp( P[ R_x + R_v ] / gamma )
//   R_x = [alpha_x (y - y_target) + beta_x (y - ybar)] vx*
//   R_v = [alpha_v vy* + beta_v (vy* - vybar*)] vx*
// P averages over nodes with quadrature weights or evaluates at the
// worst-case node. Requires particle correspondence across nodes (common
// random numbers).
std::vector<double> pointwise_feedback_limit(const std::vector<FeedbackNodeView>& nodes,
                                             const ControlParams& params,
                                             const StatOperator& op, unsigned threads = 0);

// Finite-step form with denominator gamma + P[S_x + S_v]; the position and
// velocity deviations are evaluated at their one-step predictions,
//   w      = vy* + h Ey,   ypred = y + h w,
//   R_x    = [alpha_x (ypred - y_target) + beta_x (ypred - ybar)] vx*
//   R_v    = [alpha_v w + beta_v (w - vybar*)] vx*
//   S_x    = (alpha_x + beta_x) (h vx*)^2
//   S_v    = (alpha_v + beta_v) h (vx*)^2
std::vector<double> pointwise_feedback_discrete(const std::vector<FeedbackNodeView>& nodes,
                                                double h, const ControlParams& params,
                                                const StatOperator& op, unsigned threads = 0);

// Slab-assignment positions for the cell averaging: the worst-case node's
// positions, or the quadrature-weighted mean position across nodes.
std::vector<double> reference_positions(const std::vector<FeedbackNodeView>& nodes,
                                        const StatOperator& op, unsigned threads = 0);

// Arithmetic mean of the per-particle values over each slab (order-0
// interpolation); empty slabs get 0; the result is clamped to the admissible
// interval as a safety net (each B_m is already clamped).
ControlField interpolate_cellwise(const std::vector<double>& b_particles,
                                  const std::vector<double>& ref_y,
                                  const ControlParams& params,
                                  double y_min, double y_max, unsigned threads = 0);

// Alternative strategy: assemble the feedback directly from per-slab
// statistics (slab membership evaluated per node), in either the
// vanishing-step form (divide by gamma) or the finite-step form.
ControlField cellwise_feedback(const std::vector<FeedbackNodeView>& nodes, double h,
                               const ControlParams& params, const StatOperator& op,
                               double y_min, double y_max, bool limit_form,
                               unsigned threads = 0);

} // namespace vpbgk
