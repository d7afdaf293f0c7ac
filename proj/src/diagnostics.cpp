#include "vpbgk/diagnostics.hpp"

#include <cmath>

#include "vpbgk/errors.hpp"
#include "vpbgk/parallel.hpp"

namespace vpbgk {

namespace {

// Rows (y-cell indices) whose extent overlaps the bands with positive measure.
std::vector<char> band_rows(const Mesh& mesh, const BoundaryBand& band) {
    std::vector<char> rows(static_cast<std::size_t>(mesh.my), 0);
    for (int j = 0; j < mesh.my; ++j) {
        const double lo = mesh.y_min + j * mesh.dy;
        const double hi = lo + mesh.dy;
        const bool in_lower = lo < band.lower_max && hi > band.lower_min;
        const bool in_upper = lo < band.upper_max && hi > band.upper_min;
        if (in_lower || in_upper) rows[j] = 1;
    }
    return rows;
}

} // namespace

int boundary_cell_count(const Mesh& mesh, const BoundaryBand& band) {
    const auto rows = band_rows(mesh, band);
    int nrows = 0;
    for (char r : rows) nrows += r;
    return nrows * mesh.mx;
}

BoundaryStats boundary_stats(const ParticleEnsemble& ensemble, const Mesh& mesh,
                             const BoundaryBand& band, unsigned threads) {
    const auto rows = band_rows(mesh, band);
    const int n_b = boundary_cell_count(mesh, band);
    BoundaryStats out;
    if (n_b == 0) return out;

    const std::size_t n = ensemble.size();
    const std::size_t nb = par::block_count(n);
    std::vector<double> cnt(nb, 0.0), svx(nb, 0.0), svy(nb, 0.0);
    par::for_blocks(n, [&](std::size_t b, std::size_t lo, std::size_t hi) {
        for (std::size_t m = lo; m < hi; ++m) {
            if (!rows[static_cast<std::size_t>(mesh.cell_iy(ensemble.y[m]))]) continue;
            cnt[b] += 1.0;
            svx[b] += ensemble.vx[m];
            svy[b] += ensemble.vy[m];
        }
    }, threads);
    double count = 0.0, sum_vx = 0.0, sum_vy = 0.0;
    for (std::size_t b = 0; b < nb; ++b) {
        count += cnt[b];
        sum_vx += svx[b];
        sum_vy += svy[b];
    }
    if (count == 0.0) return out;

    const double norm = 1.0 / (static_cast<double>(n) * n_b);
    out.empty = false;
    out.rho_b = count * norm;
    out.ub_x = sum_vx / count;
    out.ub_y = sum_vy / count;

    std::vector<double> se(nb, 0.0);
    par::for_blocks(n, [&](std::size_t b, std::size_t lo, std::size_t hi) {
        for (std::size_t m = lo; m < hi; ++m) {
            if (!rows[static_cast<std::size_t>(mesh.cell_iy(ensemble.y[m]))]) continue;
            const double dvx = ensemble.vx[m] - out.ub_x;
            const double dvy = ensemble.vy[m] - out.ub_y;
            se[b] += dvx * dvx + dvy * dvy;
        }
    }, threads);
    double sum_e = 0.0;
    for (std::size_t b = 0; b < nb; ++b) sum_e += se[b];
    out.energy = 0.5 * norm * sum_e;
    out.temp = out.rho_b * out.energy;
    return out;
}

MomentGrids reconstruct_moments_grid(const ParticleEnsemble& ensemble, const Mesh& mesh,
                                     const PhaseDomain& domain, unsigned threads) {
    const CellMomentsGrid cm = compute_cell_moments(ensemble, mesh, domain, threads);
    MomentGrids out;
    out.rho = cm.mass;
    const double inv_area = 1.0 / mesh.cell_area();
    for (auto& v : out.rho) v *= inv_area;
    out.ux = cm.ux;
    out.uy = cm.uy;
    out.temperature = cm.temperature;
    out.occupied = cm.occupied;
    return out;
}

} // namespace vpbgk
