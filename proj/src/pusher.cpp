#include "vpbgk/pusher.hpp"

#include <atomic>
#include <cmath>

#include "vpbgk/errors.hpp"
#include "vpbgk/parallel.hpp"

namespace vpbgk {

void push_semi_implicit(ParticleEnsemble& ensemble,
                        const std::vector<double>& ex, const std::vector<double>& ey,
                        const std::vector<double>& b, double h, unsigned threads) {
    const std::size_t n = ensemble.size();
    if (ex.size() != n || ey.size() != n || b.size() != n)
        throw InternalError("push_semi_implicit: per-particle array size mismatch");
    par::for_blocks(n, [&](std::size_t, std::size_t lo, std::size_t hi) {
        for (std::size_t m = lo; m < hi; ++m) {
            const double ax = ensemble.vx[m] + h * ex[m];
            const double ay = ensemble.vy[m] + h * ey[m];
            const double hb = h * b[m];
            const double inv = 1.0 / (1.0 + hb * hb);
            const double vx1 = (ax + hb * ay) * inv;
            const double vy1 = (ay - hb * ax) * inv;
            ensemble.vx[m] = vx1;
            ensemble.vy[m] = vy1;
            ensemble.x[m] += h * vx1;
            ensemble.y[m] += h * vy1;
        }
    }, threads);
}

std::size_t apply_boundaries(ParticleEnsemble& ensemble, const PhaseDomain& domain,
                             unsigned threads) {
    const std::size_t n = ensemble.size();
    const double lx = domain.length_x();
    const double ly = domain.length_y();
    const std::size_t nb = par::block_count(n);
    std::vector<std::size_t> cfl(std::max<std::size_t>(nb, 1), 0);

    par::for_blocks(n, [&](std::size_t blk, std::size_t lo, std::size_t hi) {
        for (std::size_t m = lo; m < hi; ++m) {
            double x = ensemble.x[m];
            double y = ensemble.y[m];

            if (x < domain.x_min - lx || x > domain.x_max + lx ||
                y < domain.y_min - ly || y > domain.y_max + ly)
                ++cfl[blk];

            // Periodic wrap in x.
            if (x < domain.x_min || x >= domain.x_max) {
                x = std::fmod(x - domain.x_min, lx);
                if (x < 0.0) x += lx;
                if (x >= lx) x -= lx; // fmod roundoff guard
                x += domain.x_min;
            }

            // Specular reflection in y, at most a few bounces.
            for (int it = 0; it < 4 && (y < domain.y_min || y > domain.y_max); ++it) {
                if (y > domain.y_max) {
                    y = 2.0 * domain.y_max - y;
                    ensemble.vy[m] = -ensemble.vy[m];
                } else if (y < domain.y_min) {
                    y = 2.0 * domain.y_min - y;
                    ensemble.vy[m] = -ensemble.vy[m];
                }
            }
            if (y > domain.y_max) {
                y = domain.y_max;
                ensemble.vy[m] = -std::abs(ensemble.vy[m]);
            } else if (y < domain.y_min) {
                y = domain.y_min;
                ensemble.vy[m] = std::abs(ensemble.vy[m]);
            }

            ensemble.x[m] = x;
            ensemble.y[m] = y;
        }
    }, threads);

    std::size_t total = 0;
    for (std::size_t b = 0; b < nb; ++b) total += cfl[b];
    return total;
}

} // namespace vpbgk
