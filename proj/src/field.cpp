#include "vpbgk/field.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>

#include "vpbgk/errors.hpp"
#include "vpbgk/parallel.hpp"

namespace vpbgk {

Grid deposit_density(const ParticleEnsemble& ensemble, const Mesh& mesh,
                     const PhaseDomain& domain, unsigned threads) {
    const std::size_t n = ensemble.size();
    const std::size_t cells = mesh.cell_count();
    const std::size_t nb = par::block_count(n);

    std::vector<Grid> partial(nb, Grid(cells, 0.0));
    std::vector<char> bad(std::max<std::size_t>(nb, 1), 0);
    par::for_blocks(n, [&](std::size_t b, std::size_t lo, std::size_t hi) {
        Grid& g = partial[b];
        for (std::size_t m = lo; m < hi; ++m) {
            const double px = ensemble.x[m];
            const double py = ensemble.y[m];
            if (!domain.contains(px, py)) {
                bad[b] = 1;
                continue;
            }
            g[mesh.cell_of(px, py)] += ensemble.omega;
        }
    }, threads);

    for (std::size_t b = 0; b < nb; ++b)
        if (bad[b])
            throw InternalError("deposit_density: particle outside domain; apply boundaries first");

    Grid rho(cells, 0.0);
    const double inv_area = 1.0 / mesh.cell_area();
    for (std::size_t b = 0; b < nb; ++b)
        for (std::size_t c = 0; c < cells; ++c) rho[c] += partial[b][c];
    for (std::size_t c = 0; c < cells; ++c) rho[c] *= inv_area;
    return rho;
}

PoissonSolver::PoissonSolver(const Mesh& mesh) : mesh_(mesh) {
    const int mx = mesh_.mx;
    const int my = mesh_.my;
    const int nspec = mx / 2 + 1;
    real_ = fftw_alloc_real(static_cast<std::size_t>(mx) * my);
    spec_ = reinterpret_cast<std::complex<double>*>(
        fftw_alloc_complex(static_cast<std::size_t>(nspec) * my));
    // One transform of length mx per y row; rows are contiguous.
    fwd_ = fftw_plan_many_dft_r2c(1, &mx, my,
                                  real_, nullptr, 1, mx,
                                  reinterpret_cast<fftw_complex*>(spec_), nullptr, 1, nspec,
                                  FFTW_ESTIMATE);
    inv_ = fftw_plan_many_dft_c2r(1, &mx, my,
                                  reinterpret_cast<fftw_complex*>(spec_), nullptr, 1, nspec,
                                  real_, nullptr, 1, mx,
                                  FFTW_ESTIMATE);
    if (!fwd_ || !inv_) throw InternalError("PoissonSolver: FFTW plan creation failed");
}

PoissonSolver::~PoissonSolver() {
    if (fwd_) fftw_destroy_plan(fwd_);
    if (inv_) fftw_destroy_plan(inv_);
    fftw_free(real_);
    fftw_free(spec_);
}

void PoissonSolver::solve(FieldState& field) const {
    const int mx = mesh_.mx;
    const int my = mesh_.my;
    const int nspec = mx / 2 + 1;
    const std::size_t cells = mesh_.cell_count();
    if (field.rho.size() != cells) throw InternalError("solve: rho size mismatch");

    // RHS = (rho - 1) - mean(rho - 1). The neutralizing background makes the
    // singular periodic/Neumann problem solvable; physically it matches the
    // ion density to the electron spatial mean.
    double mean = 0.0;
    for (std::size_t c = 0; c < cells; ++c) {
        if (!std::isfinite(field.rho[c])) throw std::runtime_error("solve: non-finite density");
        mean += field.rho[c];
    }
    mean = mean / static_cast<double>(cells);
    for (std::size_t c = 0; c < cells; ++c) real_[c] = field.rho[c] - mean;

    fftw_execute(fwd_);

    const double inv_dy2 = 1.0 / (mesh_.dy * mesh_.dy);
    std::vector<std::complex<double>> rhs(my), sol(my);
    std::vector<double> diag(my), work(my);

    for (int k = 0; k < nspec; ++k) {
        const double s = std::sin(M_PI * k / mx);
        const double lambda = 4.0 * s * s / (mesh_.dx * mesh_.dx);
        for (int j = 0; j < my; ++j) rhs[j] = spec_[static_cast<std::size_t>(j) * nspec + k];

        if (k == 0) {
            // Singular Neumann mode: pin phi[my-1] = 0, solve the reduced
            // system (rows 0..my-2), then shift to zero mean in y. The RHS is
            // compatible after the global mean subtraction, so the dropped
            // row is satisfied up to roundoff.
            const int n = my - 1;
            diag[0] = 1.0 * inv_dy2;
            for (int j = 1; j < n; ++j) diag[j] = 2.0 * inv_dy2;
            // Thomas forward sweep, sub/super diagonals all -inv_dy2.
            work[0] = -inv_dy2 / diag[0];
            sol[0] = rhs[0] / diag[0];
            for (int j = 1; j < n; ++j) {
                const double denom = diag[j] + inv_dy2 * work[j - 1];
                work[j] = -inv_dy2 / denom;
                sol[j] = (rhs[j] + inv_dy2 * sol[j - 1]) / denom;
            }
            for (int j = n - 2; j >= 0; --j) sol[j] -= work[j] * sol[j + 1];
            sol[my - 1] = 0.0;
            std::complex<double> shift(0.0, 0.0);
            for (int j = 0; j < my; ++j) shift += sol[j];
            shift /= static_cast<double>(my);
            for (int j = 0; j < my; ++j) sol[j] -= shift;
        } else {
            diag[0] = 1.0 * inv_dy2 + lambda;
            for (int j = 1; j < my - 1; ++j) diag[j] = 2.0 * inv_dy2 + lambda;
            diag[my - 1] = 1.0 * inv_dy2 + lambda;
            work[0] = -inv_dy2 / diag[0];
            sol[0] = rhs[0] / diag[0];
            for (int j = 1; j < my; ++j) {
                const double denom = diag[j] + inv_dy2 * work[j - 1];
                work[j] = -inv_dy2 / denom;
                sol[j] = (rhs[j] + inv_dy2 * sol[j - 1]) / denom;
            }
            for (int j = my - 2; j >= 0; --j) sol[j] -= work[j] * sol[j + 1];
        }

        for (int j = 0; j < my; ++j) spec_[static_cast<std::size_t>(j) * nspec + k] = sol[j];
    }

    fftw_execute(inv_);

    field.phi.resize(cells);
    const double scale = 1.0 / mx; // FFTW round trip gains a factor mx
    for (std::size_t c = 0; c < cells; ++c) field.phi[c] = real_[c] * scale;

    // Remove the roundoff-level residual mean so mean(phi) = 0 holds exactly.
    double pmean = 0.0;
    for (std::size_t c = 0; c < cells; ++c) pmean += field.phi[c];
    pmean /= static_cast<double>(cells);
    for (std::size_t c = 0; c < cells; ++c) field.phi[c] -= pmean;

    // E = -grad phi: centered in x with periodic wrap; centered in the y
    // interior, one-sided at the reflecting walls.
    field.ex.resize(cells);
    field.ey.resize(cells);
    const double inv_2dx = 0.5 / mesh_.dx;
    const double inv_2dy = 0.5 / mesh_.dy;
    const double inv_dy = 1.0 / mesh_.dy;
    for (int j = 0; j < my; ++j) {
        const std::size_t row = static_cast<std::size_t>(j) * mx;
        for (int i = 0; i < mx; ++i) {
            const int il = (i == 0) ? mx - 1 : i - 1;
            const int ir = (i == mx - 1) ? 0 : i + 1;
            field.ex[row + i] = -(field.phi[row + ir] - field.phi[row + il]) * inv_2dx;
        }
        for (int i = 0; i < mx; ++i) {
            double d;
            if (j == 0)
                d = (field.phi[row + mx + i] - field.phi[row + i]) * inv_dy;
            else if (j == my - 1)
                d = (field.phi[row + i] - field.phi[row - mx + i]) * inv_dy;
            else
                d = (field.phi[row + mx + i] - field.phi[row - mx + i]) * inv_2dy;
            field.ey[row + i] = -d;
        }
    }
}

FieldState solve_poisson(const Grid& rho, const Mesh& mesh) {
    FieldState field;
    field.rho = rho;
    PoissonSolver solver(mesh);
    solver.solve(field);
    return field;
}

void gather_field(const FieldState& field, const Mesh& mesh, const PhaseDomain& domain,
                  const ParticleEnsemble& ensemble,
                  std::vector<double>& ex_out, std::vector<double>& ey_out,
                  unsigned threads) {
    const std::size_t n = ensemble.size();
    ex_out.resize(n);
    ey_out.resize(n);
    const std::size_t nb = par::block_count(n);
    std::vector<char> bad(std::max<std::size_t>(nb, 1), 0);
    par::for_blocks(n, [&](std::size_t b, std::size_t lo, std::size_t hi) {
        for (std::size_t m = lo; m < hi; ++m) {
            const double px = ensemble.x[m];
            const double py = ensemble.y[m];
            if (!domain.contains(px, py)) {
                bad[b] = 1;
                ex_out[m] = ey_out[m] = 0.0;
                continue;
            }
            const std::size_t c = mesh.cell_of(px, py);
            ex_out[m] = field.ex[c];
            ey_out[m] = field.ey[c];
        }
    }, threads);
    for (std::size_t b = 0; b < nb; ++b)
        if (bad[b]) throw InternalError("gather_field: particle outside domain");
}

} // namespace vpbgk
