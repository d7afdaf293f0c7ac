#include "vpbgk/collisions.hpp"

#include <cmath>

#include "vpbgk/errors.hpp"
#include "vpbgk/parallel.hpp"

namespace vpbgk {

CellMomentsGrid compute_cell_moments(const ParticleEnsemble& ensemble, const Mesh& mesh,
                                     const PhaseDomain& domain, unsigned threads) {
    const std::size_t n = ensemble.size();
    const std::size_t cells = mesh.cell_count();
    const std::size_t nb = par::block_count(n);

    CellMomentsGrid out;
    out.resize(cells);

    // Pass 1: mass and momentum.
    std::vector<Grid> p_mass(nb, Grid(cells, 0.0));
    std::vector<Grid> p_mx(nb, Grid(cells, 0.0));
    std::vector<Grid> p_my(nb, Grid(cells, 0.0));
    std::vector<char> bad(std::max<std::size_t>(nb, 1), 0);
    par::for_blocks(n, [&](std::size_t b, std::size_t lo, std::size_t hi) {
        for (std::size_t m = lo; m < hi; ++m) {
            if (!domain.contains(ensemble.x[m], ensemble.y[m])) {
                bad[b] = 1;
                continue;
            }
            const std::size_t c = mesh.cell_of(ensemble.x[m], ensemble.y[m]);
            p_mass[b][c] += ensemble.omega;
            p_mx[b][c] += ensemble.omega * ensemble.vx[m];
            p_my[b][c] += ensemble.omega * ensemble.vy[m];
        }
    }, threads);
    for (std::size_t b = 0; b < nb; ++b)
        if (bad[b]) throw InternalError("compute_cell_moments: particle outside domain");
    for (std::size_t b = 0; b < nb; ++b)
        for (std::size_t c = 0; c < cells; ++c) {
            out.mass[c] += p_mass[b][c];
            out.ux[c] += p_mx[b][c];
            out.uy[c] += p_my[b][c];
        }
    for (std::size_t c = 0; c < cells; ++c) {
        if (out.mass[c] > 0.0) {
            out.occupied[c] = 1;
            out.ux[c] /= out.mass[c];
            out.uy[c] /= out.mass[c];
        } else {
            out.ux[c] = out.uy[c] = 0.0;
        }
    }

    // Pass 2: centered second moment -> temperature.
    std::vector<Grid> p_t(nb, Grid(cells, 0.0));
    par::for_blocks(n, [&](std::size_t b, std::size_t lo, std::size_t hi) {
        for (std::size_t m = lo; m < hi; ++m) {
            const std::size_t c = mesh.cell_of(ensemble.x[m], ensemble.y[m]);
            const double dvx = ensemble.vx[m] - out.ux[c];
            const double dvy = ensemble.vy[m] - out.uy[c];
            p_t[b][c] += ensemble.omega * (dvx * dvx + dvy * dvy);
        }
    }, threads);
    for (std::size_t b = 0; b < nb; ++b)
        for (std::size_t c = 0; c < cells; ++c) out.temperature[c] += p_t[b][c];
    for (std::size_t c = 0; c < cells; ++c)
        if (out.occupied[c]) out.temperature[c] /= 2.0 * out.mass[c];

    return out;
}

namespace {

// Exact per-cell conservation fixup: shift redrawn velocities so the cell
// momentum matches its pre-collision value, rescale fluctuations so the cell
// kinetic energy does too.
void enforce_cell_conservation(ParticleEnsemble& ensemble, const Mesh& mesh,
                               const CellMomentsGrid& pre,
                               const std::vector<std::uint32_t>& redrawn_cells,
                               const std::vector<std::size_t>& redrawn_idx) {
    const std::size_t cells = mesh.cell_count();
    std::vector<double> cnt(cells, 0.0), sx(cells, 0.0), sy(cells, 0.0);
    std::vector<double> keep_sx(cells, 0.0), keep_sy(cells, 0.0), keep_e(cells, 0.0);

    // Totals of the untouched particles, per cell.
    std::vector<char> is_redrawn(ensemble.size(), 0);
    for (std::size_t r = 0; r < redrawn_idx.size(); ++r) is_redrawn[redrawn_idx[r]] = 1;
    for (std::size_t m = 0; m < ensemble.size(); ++m) {
        if (is_redrawn[m]) continue;
        const std::size_t c = mesh.cell_of(ensemble.x[m], ensemble.y[m]);
        keep_sx[c] += ensemble.vx[m];
        keep_sy[c] += ensemble.vy[m];
        keep_e[c] += ensemble.vx[m] * ensemble.vx[m] + ensemble.vy[m] * ensemble.vy[m];
    }
    for (std::size_t r = 0; r < redrawn_idx.size(); ++r) {
        const std::size_t m = redrawn_idx[r];
        const std::size_t c = redrawn_cells[r];
        cnt[c] += 1.0;
        sx[c] += ensemble.vx[m];
        sy[c] += ensemble.vy[m];
        (void)m;
    }

    // Target subset mean and fluctuation energy from pre-collision moments.
    std::vector<double> tx(cells, 0.0), ty(cells, 0.0), scale(cells, 1.0);
    std::vector<double> fluct(cells, 0.0);
    for (std::size_t r = 0; r < redrawn_idx.size(); ++r) {
        const std::size_t m = redrawn_idx[r];
        const std::size_t c = redrawn_cells[r];
        const double fx = ensemble.vx[m] - sx[c] / cnt[c];
        const double fy = ensemble.vy[m] - sy[c] / cnt[c];
        fluct[c] += fx * fx + fy * fy;
    }
    for (std::size_t c = 0; c < cells; ++c) {
        if (cnt[c] == 0.0) continue;
        const double n_cell = pre.mass[c] / ensemble.omega; // particle count
        const double pre_sx = pre.ux[c] * n_cell;
        const double pre_sy = pre.uy[c] * n_cell;
        const double pre_e = 2.0 * pre.temperature[c] * n_cell +
                             (pre_sx * pre_sx + pre_sy * pre_sy) / n_cell;
        tx[c] = (pre_sx - keep_sx[c]) / cnt[c];
        ty[c] = (pre_sy - keep_sy[c]) / cnt[c];
        const double target_fluct =
            (pre_e - keep_e[c]) - cnt[c] * (tx[c] * tx[c] + ty[c] * ty[c]);
        if (fluct[c] > 0.0 && target_fluct > 0.0)
            scale[c] = std::sqrt(target_fluct / fluct[c]);
    }
    for (std::size_t r = 0; r < redrawn_idx.size(); ++r) {
        const std::size_t m = redrawn_idx[r];
        const std::size_t c = redrawn_cells[r];
        const double mean_x = sx[c] / cnt[c];
        const double mean_y = sy[c] / cnt[c];
        ensemble.vx[m] = tx[c] + scale[c] * (ensemble.vx[m] - mean_x);
        ensemble.vy[m] = ty[c] + scale[c] * (ensemble.vy[m] - mean_y);
    }
}

} // namespace

void bgk_collide(ParticleEnsemble& ensemble, const CellMomentsGrid& moments,
                 const Mesh& mesh, const CollisionParams& params, double h,
                 const RngPolicy& rng, std::uint64_t step, unsigned threads) {
    if (params.nu == 0.0) return; // collisionless: velocities untouched, bitwise
    const double p_keep = std::exp(-params.nu * h);
    const RandomStream keep_stream = rng.stream(StreamPurpose::CollisionKeep, step);
    const RandomStream normal_stream = rng.stream(StreamPurpose::CollisionNormal, step);

    const std::size_t n = ensemble.size();
    const std::size_t nb = par::block_count(n);
    std::vector<char> fail(std::max<std::size_t>(nb, 1), 0);
    par::for_blocks(n, [&](std::size_t b, std::size_t lo, std::size_t hi) {
        for (std::size_t m = lo; m < hi; ++m) {
            if (keep_stream.uniform(m) < p_keep) continue;
            const std::size_t c = mesh.cell_of(ensemble.x[m], ensemble.y[m]);
            if (!moments.occupied[c] || moments.temperature[c] < 0.0) {
                fail[b] = 1;
                continue;
            }
            double g0, g1;
            normal_stream.normal_pair(m, g0, g1);
            const double sigma = std::sqrt(moments.temperature[c]);
            ensemble.vx[m] = moments.ux[c] + sigma * g0;
            ensemble.vy[m] = moments.uy[c] + sigma * g1;
        }
    }, threads);
    for (std::size_t b = 0; b < nb; ++b)
        if (fail[b])
            throw InternalError("bgk_collide: undefined or negative cell moments for an occupied cell");

    if (params.conserve_cell_moments) {
        // Re-identify the redrawn set (same draws) serially; this path is an
        // opt-in and not performance critical.
        std::vector<std::size_t> idx;
        std::vector<std::uint32_t> cell;
        for (std::size_t m = 0; m < n; ++m) {
            if (keep_stream.uniform(m) < p_keep) continue;
            idx.push_back(m);
            cell.push_back(static_cast<std::uint32_t>(mesh.cell_of(ensemble.x[m], ensemble.y[m])));
        }
        enforce_cell_conservation(ensemble, mesh, moments, cell, idx);
    }
}

} // namespace vpbgk
