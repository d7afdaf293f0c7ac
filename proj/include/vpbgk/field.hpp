#pragma once

#include <complex>
#include <vector>

#include "vpbgk/domain.hpp"

// FFTW plan handles are kept behind an opaque pointer so this header does not
// leak fftw3.h into the rest of the project.
struct fftw_plan_s;

namespace vpbgk {

// Grid fields for one collocation node. rho is charge density per unit area;
// phi the electric potential with mean pinned to zero; (ex, ey) = -grad phi.
struct FieldState {
    Grid rho;
    Grid phi;
    Grid ex;
    Grid ey;

    void resize(std::size_t cells) {
        rho.assign(cells, 0.0);
        phi.assign(cells, 0.0);
        ex.assign(cells, 0.0);
        ey.assign(cells, 0.0);
    }
};

// Nearest-grid-point charge deposit: cell value = (sum of particle weights in
// the cell) / cell area, so that sum(value * cell_area) equals total mass.
// Particles must already satisfy the domain boundary contract.
Grid deposit_density(const ParticleEnsemble& ensemble, const Mesh& mesh,
                     const PhaseDomain& domain, unsigned threads = 0);

// Direct solver for  -lap(phi) = (rho - 1) - mean(rho - 1)  on the cell mesh,
// 5-point finite differences, periodic in x and homogeneous Neumann in y.
//
// The x direction is diagonalized by a real-to-complex DFT; each x mode then
// yields a tridiagonal system in y solved by the Thomas algorithm. The k = 0
// mode is singular (Neumann + periodic admits constants); the right-hand side
// is made compatible by the mean subtraction above and the constant is pinned
// by forcing mean(phi) = 0. The electric field is recovered with centered
// differences in x (periodic wrap) and in the y interior, one-sided at the
// walls.
//
// Instances cache FFTW plans for one mesh and are not thread-safe; use one
// instance per concurrent solve.
class PoissonSolver {
public:
    explicit PoissonSolver(const Mesh& mesh);
    ~PoissonSolver();
    PoissonSolver(const PoissonSolver&) = delete;
    PoissonSolver& operator=(const PoissonSolver&) = delete;

    // Fills field.phi/ex/ey from field.rho (which the caller sets).
    void solve(FieldState& field) const;

    const Mesh& mesh() const { return mesh_; }

private:
    Mesh mesh_;
    double* real_ = nullptr;                // my x mx real workspace
    std::complex<double>* spec_ = nullptr;  // my x (mx/2+1) spectral workspace
    fftw_plan_s* fwd_ = nullptr;
    fftw_plan_s* inv_ = nullptr;
};

// One-shot convenience wrapper (plans created per call).
FieldState solve_poisson(const Grid& rho, const Mesh& mesh);

// Order-0 gather: every particle reads the field of its containing cell,
// matching the deposit order. Output arrays are resized to the ensemble size.
void gather_field(const FieldState& field, const Mesh& mesh, const PhaseDomain& domain,
                  const ParticleEnsemble& ensemble,
                  std::vector<double>& ex_out, std::vector<double>& ey_out,
                  unsigned threads = 0);

} // namespace vpbgk
