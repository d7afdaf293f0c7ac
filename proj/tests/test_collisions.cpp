#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>

#include "vpbgk/collisions.hpp"
#include "vpbgk/errors.hpp"

using namespace vpbgk;

namespace {

const PhaseDomain kDom{0.0, 1.0, 0.0, 1.0};

// Everything in one mesh cell: 2x2 grid, all particles in cell (0,0).
ParticleEnsemble one_cell_ensemble(std::size_t n, double u_x, double u_y, double temp,
                                   std::uint64_t seed) {
    ParticleEnsemble e;
    e.resize(n);
    e.omega = 1.0 / static_cast<double>(n);
    RngPolicy rng{seed};
    const RandomStream pos = rng.stream(StreamPurpose::Generic, 0);
    const RandomStream vel = rng.stream(StreamPurpose::Generic, 1);
    const double sigma = std::sqrt(temp);
    for (std::size_t i = 0; i < n; ++i) {
        e.x[i] = 0.5 * pos.uniform(2 * i);
        e.y[i] = 0.5 * pos.uniform(2 * i + 1);
        double g0, g1;
        vel.normal_pair(i, g0, g1);
        e.vx[i] = u_x + sigma * g0;
        e.vy[i] = u_y + sigma * g1;
    }
    return e;
}

struct CellStats {
    double ux, uy, temp;
};

CellStats direct_stats(const ParticleEnsemble& e) {
    const std::size_t n = e.size();
    double sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += e.vx[i];
        sy += e.vy[i];
    }
    const double ux = sx / n, uy = sy / n;
    double t = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = e.vx[i] - ux, dy = e.vy[i] - uy;
        t += dx * dx + dy * dy;
    }
    return {ux, uy, t / (2.0 * n)};
}

} // namespace

TEST_CASE("single-particle cell: mean is the particle, temperature zero") {
    const Mesh mesh(kDom, 2, 2);
    ParticleEnsemble e;
    e.resize(1);
    e.omega = 3.0;
    e.x[0] = 0.25;
    e.y[0] = 0.25;
    e.vx[0] = 2.0;
    e.vy[0] = 0.0;
    const CellMomentsGrid m = compute_cell_moments(e, mesh, kDom);
    const std::size_t c = mesh.cell_of(0.25, 0.25);
    CHECK(m.occupied[c] == 1);
    CHECK(m.mass[c] == doctest::Approx(3.0));
    CHECK(m.ux[c] == doctest::Approx(2.0));
    CHECK(m.uy[c] == doctest::Approx(0.0));
    CHECK(m.temperature[c] == doctest::Approx(0.0));
    CHECK(m.occupied[mesh.cell_of(0.75, 0.75)] == 0);
}

TEST_CASE("two opposite particles: zero mean, temperature one half") {
    const Mesh mesh(kDom, 2, 2);
    ParticleEnsemble e;
    e.resize(2);
    e.omega = 1.0;
    e.x = {0.2, 0.3};
    e.y = {0.2, 0.3};
    e.vx = {1.0, -1.0};
    e.vy = {0.0, 0.0};
    const CellMomentsGrid m = compute_cell_moments(e, mesh, kDom);
    const std::size_t c = mesh.cell_of(0.25, 0.25);
    CHECK(m.ux[c] == doctest::Approx(0.0));
    CHECK(m.uy[c] == doctest::Approx(0.0));
    // (1/(2 rho)) sum w |v - U|^2 = (1 + 1) / (2 * 2)
    CHECK(m.temperature[c] == doctest::Approx(0.5));
}

TEST_CASE("moment estimates converge on drawn samples") {
    const Mesh mesh(kDom, 2, 2);
    const std::size_t n = 10000;
    const double u_x = 0.7, u_y = -0.3, temp = 0.4;
    const ParticleEnsemble e = one_cell_ensemble(n, u_x, u_y, temp, 21);
    const CellMomentsGrid m = compute_cell_moments(e, mesh, kDom);
    const std::size_t c = mesh.cell_of(0.25, 0.25);
    const double tol_u = 5.0 * std::sqrt(temp / n);
    const double tol_t = 5.0 * temp / std::sqrt(static_cast<double>(n));
    CHECK(std::abs(m.ux[c] - u_x) < tol_u);
    CHECK(std::abs(m.uy[c] - u_y) < tol_u);
    CHECK(std::abs(m.temperature[c] - temp) < tol_t);

    // the estimator must agree with the direct two-pass sums
    const CellStats ref = direct_stats(e);
    CHECK(m.ux[c] == doctest::Approx(ref.ux).epsilon(1e-12));
    CHECK(m.temperature[c] == doctest::Approx(ref.temp).epsilon(1e-12));
}

TEST_CASE("nu = 0 leaves velocities bitwise untouched") {
    const Mesh mesh(kDom, 2, 2);
    ParticleEnsemble e = one_cell_ensemble(1000, 0.5, 0.0, 0.2, 33);
    const std::vector<double> vx = e.vx, vy = e.vy;
    const CellMomentsGrid m = compute_cell_moments(e, mesh, kDom);
    bgk_collide(e, m, mesh, CollisionParams{0.0, false}, 0.05, RngPolicy{1}, 0);
    CHECK(e.vx == vx);
    CHECK(e.vy == vy);
}

TEST_CASE("nu h >> 1 resamples everything; temperature is preserved statistically") {
    const Mesh mesh(kDom, 2, 2);
    const std::size_t n = 10000;
    const double temp = 0.4;
    ParticleEnsemble e = one_cell_ensemble(n, 0.7, -0.3, temp, 44);
    const CellMomentsGrid pre = compute_cell_moments(e, mesh, kDom);
    const std::size_t c = mesh.cell_of(0.25, 0.25);
    const std::vector<double> vx_before = e.vx;

    bgk_collide(e, pre, mesh, CollisionParams{1000.0, false}, 0.05, RngPolicy{2}, 0);

    // all resampled (keep probability e^-50)
    std::size_t unchanged = 0;
    for (std::size_t i = 0; i < n; ++i)
        if (e.vx[i] == vx_before[i]) ++unchanged;
    CHECK(unchanged == 0);

    const CellMomentsGrid post = compute_cell_moments(e, mesh, kDom);
    const double tol_u = 5.0 * std::sqrt(pre.temperature[c] / n);
    const double tol_t = 5.0 * pre.temperature[c] / std::sqrt(static_cast<double>(n));
    CHECK(std::abs(post.ux[c] - pre.ux[c]) < tol_u);
    CHECK(std::abs(post.uy[c] - pre.uy[c]) < tol_u);
    CHECK(std::abs(post.temperature[c] - pre.temperature[c]) < tol_t);
}

TEST_CASE("positions untouched: per-cell mass identical before and after") {
    const Mesh mesh(kDom, 4, 4);
    ParticleEnsemble e = one_cell_ensemble(5000, 0.0, 0.0, 1.0, 55);
    // spread particles over the full domain
    RngPolicy rng{56};
    const RandomStream s = rng.stream(StreamPurpose::Generic, 0);
    for (std::size_t i = 0; i < e.size(); ++i) {
        e.x[i] = s.uniform(2 * i);
        e.y[i] = s.uniform(2 * i + 1);
    }
    const CellMomentsGrid pre = compute_cell_moments(e, mesh, kDom);
    bgk_collide(e, pre, mesh, CollisionParams{10.0, false}, 0.1, RngPolicy{3}, 0);
    const CellMomentsGrid post = compute_cell_moments(e, mesh, kDom);
    CHECK(pre.mass == post.mass);
}

TEST_CASE("momentum and temperature conserved in expectation") {
    const Mesh mesh(kDom, 2, 2);
    const std::size_t n = 10000;
    const int reps = 100;
    const double temp = 0.5;
    const ParticleEnsemble base = one_cell_ensemble(n, 0.4, -0.2, temp, 66);
    const CellMomentsGrid pre = compute_cell_moments(base, mesh, kDom);
    const std::size_t c = mesh.cell_of(0.25, 0.25);

    for (double nu_h : {0.1, 1.0, 10.0}) {
        CAPTURE(nu_h);
        std::vector<double> dux(reps), duy(reps), dt(reps);
        for (int r = 0; r < reps; ++r) {
            ParticleEnsemble e = base;
            bgk_collide(e, pre, mesh, CollisionParams{nu_h, false}, 1.0, RngPolicy{900},
                        static_cast<std::uint64_t>(r));
            const CellMomentsGrid post = compute_cell_moments(e, mesh, kDom);
            dux[r] = post.ux[c] - pre.ux[c];
            duy[r] = post.uy[c] - pre.uy[c];
            dt[r] = post.temperature[c] - pre.temperature[c];
        }
        // Self-normalized 5 sigma bound on the mean over repetitions.
        auto check_mean = [&](const std::vector<double>& d) {
            const double mean = std::accumulate(d.begin(), d.end(), 0.0) / reps;
            double var = 0.0;
            for (double v : d) var += (v - mean) * (v - mean);
            var /= (reps - 1);
            const double sem = std::sqrt(var / reps);
            CHECK(std::abs(mean) < 5.0 * std::max(sem, 1e-15));
        };
        check_mean(dux);
        check_mean(duy);
        check_mean(dt);
    }
}

TEST_CASE("common random numbers: identical ensembles collide identically") {
    const Mesh mesh(kDom, 2, 2);
    ParticleEnsemble a = one_cell_ensemble(2000, 0.1, 0.0, 0.3, 77);
    ParticleEnsemble b = a; // a second collocation node with the same state
    const CellMomentsGrid m = compute_cell_moments(a, mesh, kDom);
    bgk_collide(a, m, mesh, CollisionParams{5.0, false}, 0.1, RngPolicy{4}, 12);
    bgk_collide(b, m, mesh, CollisionParams{5.0, false}, 0.1, RngPolicy{4}, 12);
    CHECK(a.vx == b.vx);
    CHECK(a.vy == b.vy);
}

TEST_CASE("optional exact conservation enforces cell moments to roundoff") {
    const Mesh mesh(kDom, 2, 2);
    const std::size_t n = 4000;
    ParticleEnsemble e = one_cell_ensemble(n, 0.4, -0.2, 0.5, 88);
    const CellMomentsGrid pre = compute_cell_moments(e, mesh, kDom);
    const std::size_t c = mesh.cell_of(0.25, 0.25);
    bgk_collide(e, pre, mesh, CollisionParams{2.0, true}, 0.5, RngPolicy{5}, 0);
    const CellMomentsGrid post = compute_cell_moments(e, mesh, kDom);
    CHECK(post.ux[c] == doctest::Approx(pre.ux[c]).epsilon(1e-11));
    CHECK(post.uy[c] == doctest::Approx(pre.uy[c]).epsilon(1e-11));
    CHECK(post.temperature[c] == doctest::Approx(pre.temperature[c]).epsilon(1e-11));
}

TEST_CASE("different steps consume different draws") {
    const Mesh mesh(kDom, 2, 2);
    ParticleEnsemble a = one_cell_ensemble(2000, 0.0, 0.0, 0.3, 99);
    ParticleEnsemble b = a;
    const CellMomentsGrid m = compute_cell_moments(a, mesh, kDom);
    bgk_collide(a, m, mesh, CollisionParams{5.0, false}, 0.1, RngPolicy{4}, 0);
    bgk_collide(b, m, mesh, CollisionParams{5.0, false}, 0.1, RngPolicy{4}, 1);
    CHECK(a.vx != b.vx);
}
