#include "vpbgk/control.hpp"

#include <algorithm>
#include <cmath>

#include "vpbgk/errors.hpp"
#include "vpbgk/parallel.hpp"

namespace vpbgk {

namespace {

double clamp_field(double v, double max_field) {
    return std::clamp(v, -max_field, max_field);
}

void check_nodes(const std::vector<FeedbackNodeView>& nodes, const StatOperator& op) {
    if (nodes.empty()) throw InternalError("feedback: empty node set");
    const std::size_t n = nodes[0].particles->size();
    for (const auto& v : nodes)
        if (!v.particles || v.particles->size() != n)
            throw InternalError("feedback: node ensembles differ in size");
    if (op.kind == StatOperatorKind::Expectation && op.weights.size() != nodes.size())
        throw InternalError("feedback: operator weights do not match node count");
    if (op.kind == StatOperatorKind::WorstCase &&
        (op.z0 < 0 || static_cast<std::size_t>(op.z0) >= nodes.size()))
        throw InternalError("feedback: worst-case node index out of range");
}

} // namespace

int select_worst_case_node(const std::vector<double>& boundary_temps) {
    if (boundary_temps.empty())
        throw InternalError("select_worst_case_node: empty node set");
    int best = 0;
    for (std::size_t k = 1; k < boundary_temps.size(); ++k)
        if (boundary_temps[k] > boundary_temps[best]) best = static_cast<int>(k);
    return best;
}

EnsembleMeans ensemble_means(const ParticleEnsemble& e, unsigned threads) {
    const std::size_t n = e.size();
    const std::size_t nb = par::block_count(n);
    std::vector<par::KahanSum> sy(nb), svx(nb), svy(nb);
    par::for_blocks(n, [&](std::size_t b, std::size_t lo, std::size_t hi) {
        for (std::size_t m = lo; m < hi; ++m) {
            sy[b].add(e.y[m]);
            svx[b].add(e.vx[m]);
            svy[b].add(e.vy[m]);
        }
    }, threads);
    par::KahanSum ty, tvx, tvy;
    for (std::size_t b = 0; b < nb; ++b) {
        ty.merge(sy[b]);
        tvx.merge(svx[b]);
        tvy.merge(svy[b]);
    }
    const double inv = n ? 1.0 / static_cast<double>(n) : 0.0;
    return {ty.value() * inv, tvx.value() * inv, tvy.value() * inv};
}

std::vector<double> pointwise_feedback_limit(const std::vector<FeedbackNodeView>& nodes,
                                             const ControlParams& params,
                                             const StatOperator& op, unsigned threads) {
    if (!(params.gamma > 0.0)) throw ConfigError("feedback: gamma > 0 required");
    check_nodes(nodes, op);
    const std::size_t n = nodes[0].particles->size();
    std::vector<double> b(n, 0.0);

    auto accumulate_node = [&](const FeedbackNodeView& view, double weight) {
        const ParticleEnsemble& e = *view.particles;
        const EnsembleMeans mean = ensemble_means(e, threads);
        par::for_blocks(n, [&](std::size_t, std::size_t lo, std::size_t hi) {
            for (std::size_t m = lo; m < hi; ++m) {
                const double rx = (params.alpha_x * (e.y[m] - params.y_target) +
                                   params.beta_x * (e.y[m] - mean.y)) * e.vx[m];
                const double rv = (params.alpha_v * e.vy[m] +
                                   params.beta_v * (e.vy[m] - mean.vy)) * e.vx[m];
                b[m] += weight * (rx + rv);
            }
        }, threads);
    };

    if (op.kind == StatOperatorKind::WorstCase) {
        accumulate_node(nodes[static_cast<std::size_t>(op.z0)], 1.0);
    } else {
        for (std::size_t k = 0; k < nodes.size(); ++k) accumulate_node(nodes[k], op.weights[k]);
    }

    const double inv_gamma = 1.0 / params.gamma;
    par::for_blocks(n, [&](std::size_t, std::size_t lo, std::size_t hi) {
        for (std::size_t m = lo; m < hi; ++m)
            b[m] = clamp_field(b[m] * inv_gamma, params.max_field);
    }, threads);
    return b;
}

std::vector<double> pointwise_feedback_discrete(const std::vector<FeedbackNodeView>& nodes,
                                                double h, const ControlParams& params,
                                                const StatOperator& op, unsigned threads) {
    if (!(params.gamma > 0.0)) throw ConfigError("feedback: gamma > 0 required");
    check_nodes(nodes, op);
    const std::size_t n = nodes[0].particles->size();
    std::vector<double> num(n, 0.0), den(n, 0.0);

    auto accumulate_node = [&](const FeedbackNodeView& view, double weight) {
        const ParticleEnsemble& e = *view.particles;
        if (!view.ey || view.ey->size() != n)
            throw InternalError("feedback: discrete form requires gathered E_y");
        const std::vector<double>& ey = *view.ey;
        const EnsembleMeans mean = ensemble_means(e, threads);
        const double sx_coeff = (params.alpha_x + params.beta_x) * h * h;
        const double sv_coeff = (params.alpha_v + params.beta_v) * h;
        par::for_blocks(n, [&](std::size_t, std::size_t lo, std::size_t hi) {
            for (std::size_t m = lo; m < hi; ++m) {
                const double w = e.vy[m] + h * ey[m];
                const double ypred = e.y[m] + h * w;
                const double rx = (params.alpha_x * (ypred - params.y_target) +
                                   params.beta_x * (ypred - mean.y)) * e.vx[m];
                const double rv = (params.alpha_v * w +
                                   params.beta_v * (w - mean.vy)) * e.vx[m];
                const double vx2 = e.vx[m] * e.vx[m];
                num[m] += weight * (rx + rv);
                den[m] += weight * (sx_coeff * vx2 + sv_coeff * vx2);
            }
        }, threads);
    };

    if (op.kind == StatOperatorKind::WorstCase) {
        accumulate_node(nodes[static_cast<std::size_t>(op.z0)], 1.0);
    } else {
        for (std::size_t k = 0; k < nodes.size(); ++k) accumulate_node(nodes[k], op.weights[k]);
    }

    std::vector<double> b(n, 0.0);
    par::for_blocks(n, [&](std::size_t, std::size_t lo, std::size_t hi) {
        for (std::size_t m = lo; m < hi; ++m)
            b[m] = clamp_field(num[m] / (params.gamma + den[m]), params.max_field);
    }, threads);
    return b;
}

std::vector<double> reference_positions(const std::vector<FeedbackNodeView>& nodes,
                                        const StatOperator& op, unsigned threads) {
    check_nodes(nodes, op);
    const std::size_t n = nodes[0].particles->size();
    if (op.kind == StatOperatorKind::WorstCase)
        return nodes[static_cast<std::size_t>(op.z0)].particles->y;
    std::vector<double> ref(n, 0.0);
    for (std::size_t k = 0; k < nodes.size(); ++k) {
        const std::vector<double>& y = nodes[k].particles->y;
        const double w = op.weights[k];
        par::for_blocks(n, [&](std::size_t, std::size_t lo, std::size_t hi) {
            for (std::size_t m = lo; m < hi; ++m) ref[m] += w * y[m];
        }, threads);
    }
    return ref;
}

ControlField interpolate_cellwise(const std::vector<double>& b_particles,
                                  const std::vector<double>& ref_y,
                                  const ControlParams& params,
                                  double y_min, double y_max, unsigned threads) {
    if (b_particles.size() != ref_y.size())
        throw InternalError("interpolate_cellwise: array size mismatch");
    ControlField field = ControlField::constant(params.n_cells, y_min, y_max, 0.0);
    const std::size_t n = b_particles.size();
    const std::size_t nb = par::block_count(n);
    const std::size_t nc = static_cast<std::size_t>(params.n_cells);

    std::vector<std::vector<double>> psum(nb, std::vector<double>(nc, 0.0));
    std::vector<std::vector<double>> pcnt(nb, std::vector<double>(nc, 0.0));
    par::for_blocks(n, [&](std::size_t b, std::size_t lo, std::size_t hi) {
        for (std::size_t m = lo; m < hi; ++m) {
            const int k = field.slab_of(ref_y[m]);
            psum[b][k] += b_particles[m];
            pcnt[b][k] += 1.0;
        }
    }, threads);

    for (std::size_t k = 0; k < nc; ++k) {
        double sum = 0.0, cnt = 0.0;
        for (std::size_t b = 0; b < nb; ++b) {
            sum += psum[b][k];
            cnt += pcnt[b][k];
        }
        field.values[k] = cnt > 0.0 ? clamp_field(sum / cnt, params.max_field) : 0.0;
    }
    return field;
}

ControlField cellwise_feedback(const std::vector<FeedbackNodeView>& nodes, double h,
                               const ControlParams& params, const StatOperator& op,
                               double y_min, double y_max, bool limit_form,
                               unsigned threads) {
    if (!(params.gamma > 0.0)) throw ConfigError("feedback: gamma > 0 required");
    check_nodes(nodes, op);
    const std::size_t nc = static_cast<std::size_t>(params.n_cells);
    ControlField field = ControlField::constant(params.n_cells, y_min, y_max, 0.0);

    std::vector<double> num(nc, 0.0), den(nc, 0.0);

    // Raw per-slab sums for one node; the slab feedback terms expand into
    // combinations of these.
    struct SlabSums {
        double n = 0.0;
        double y = 0.0, vx = 0.0, vy = 0.0;
        double vx2 = 0.0;
        double y_vx = 0.0, vy_vx = 0.0, ey_vx = 0.0, ey = 0.0;
    };

    auto accumulate_node = [&](const FeedbackNodeView& view, double weight) {
        const ParticleEnsemble& e = *view.particles;
        const std::size_t n = e.size();
        const bool need_field = !limit_form;
        if (need_field && (!view.ey || view.ey->size() != n))
            throw InternalError("feedback: discrete cellwise form requires gathered E_y");

        const std::size_t nb = par::block_count(n);
        std::vector<std::vector<SlabSums>> partial(nb, std::vector<SlabSums>(nc));
        par::for_blocks(n, [&](std::size_t b, std::size_t lo, std::size_t hi) {
            for (std::size_t m = lo; m < hi; ++m) {
                SlabSums& s = partial[b][field.slab_of(e.y[m])];
                const double ey = need_field ? (*view.ey)[m] : 0.0;
                s.n += 1.0;
                s.y += e.y[m];
                s.vx += e.vx[m];
                s.vy += e.vy[m];
                s.vx2 += e.vx[m] * e.vx[m];
                s.y_vx += e.y[m] * e.vx[m];
                s.vy_vx += e.vy[m] * e.vx[m];
                s.ey_vx += ey * e.vx[m];
                s.ey += ey;
            }
        }, threads);

        for (std::size_t k = 0; k < nc; ++k) {
            SlabSums s;
            for (std::size_t b = 0; b < nb; ++b) {
                const SlabSums& p = partial[b][k];
                s.n += p.n;
                s.y += p.y;
                s.vx += p.vx;
                s.vy += p.vy;
                s.vx2 += p.vx2;
                s.y_vx += p.y_vx;
                s.vy_vx += p.vy_vx;
                s.ey_vx += p.ey_vx;
                s.ey += p.ey;
            }
            if (s.n == 0.0) continue; // empty slab in this node contributes nothing
            const double inv_n = 1.0 / s.n;
            const double ybar = s.y * inv_n;
            const double vxbar = s.vx * inv_n;
            const double vybar = s.vy * inv_n;
            double rx, rv;
            if (limit_form) {
                rx = params.alpha_x * (ybar - params.y_target) * vxbar +
                     params.beta_x * inv_n * (s.y_vx - ybar * s.vx);
                rv = params.alpha_v * vybar * vxbar +
                     params.beta_v * inv_n * (s.vy_vx - vybar * s.vx);
                num[k] += weight * (rx + rv);
            } else {
                const double eybar = s.ey * inv_n;
                rx = params.alpha_x * (ybar + h * (vybar + h * eybar) - params.y_target) * vxbar +
                     params.beta_x * inv_n *
                         (s.y_vx + h * s.vy_vx + h * h * s.ey_vx - ybar * s.vx);
                rv = params.alpha_v * (vybar + h * eybar) * vxbar +
                     params.beta_v * inv_n * (s.vy_vx + h * s.ey_vx - vybar * s.vx);
                const double sv = h * (params.alpha_v * vxbar * vxbar +
                                       params.beta_v * inv_n * s.vx2);
                const double sx = h * h * (params.alpha_x * vxbar * vxbar +
                                           params.beta_x * inv_n * s.vx2);
                num[k] += weight * (rx + rv);
                den[k] += weight * (sv + sx);
            }
        }
    };

    if (op.kind == StatOperatorKind::WorstCase) {
        accumulate_node(nodes[static_cast<std::size_t>(op.z0)], 1.0);
    } else {
        for (std::size_t k = 0; k < nodes.size(); ++k) accumulate_node(nodes[k], op.weights[k]);
    }

    for (std::size_t k = 0; k < nc; ++k)
        field.values[k] = clamp_field(num[k] / (params.gamma + den[k]), params.max_field);
    return field;
}

} // namespace vpbgk
