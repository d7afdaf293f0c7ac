#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "vpbgk/pusher.hpp"
#include "vpbgk/rng.hpp"

using namespace vpbgk;

namespace {

ParticleEnsemble single(double x, double y, double vx, double vy) {
    ParticleEnsemble e;
    e.resize(1);
    e.x[0] = x;
    e.y[0] = y;
    e.vx[0] = vx;
    e.vy[0] = vy;
    e.omega = 1.0;
    return e;
}

} // namespace

TEST_CASE("free streaming: B = 0, E = 0") {
    auto e = single(0.2, 0.3, 1.5, -0.5);
    push_semi_implicit(e, {0.0}, {0.0}, {0.0}, 0.1);
    CHECK(e.vx[0] == 1.5);
    CHECK(e.vy[0] == -0.5);
    CHECK(e.x[0] == doctest::Approx(0.35).epsilon(1e-15));
    CHECK(e.y[0] == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("closed-form magnetic rotation: worked value") {
    auto e = single(0.0, 0.0, 1.0, 0.0);
    push_semi_implicit(e, {0.0}, {0.0}, {1.0}, 1.0);
    CHECK(e.vx[0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(e.vy[0] == doctest::Approx(-0.5).epsilon(1e-15));
}

TEST_CASE("implicit-rotation damping identity over random states") {
    // |v'|^2 (1 + h^2 B^2) == |v*|^2 exactly, for E = 0.
    RngPolicy rng{314159};
    const RandomStream s = rng.stream(StreamPurpose::Generic, 0);
    const std::size_t n = 100000;
    ParticleEnsemble e;
    e.resize(n);
    std::vector<double> b(n), zero(n, 0.0), v2(n);
    for (std::size_t i = 0; i < n; ++i) {
        double g0, g1;
        s.normal_pair(2 * i, g0, g1);
        e.x[i] = e.y[i] = 0.0;
        e.vx[i] = 10.0 * g0;
        e.vy[i] = 10.0 * g1;
        b[i] = 100.0 * (s.uniform(4 * n + i) - 0.5);
        v2[i] = e.vx[i] * e.vx[i] + e.vy[i] * e.vy[i];
    }
    const double h = 0.05;
    push_semi_implicit(e, zero, zero, b, h);
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double lhs = (e.vx[i] * e.vx[i] + e.vy[i] * e.vy[i]) * (1.0 + h * h * b[i] * b[i]);
        worst = std::max(worst, std::abs(lhs - v2[i]) / v2[i]);
    }
    CHECK(worst < 1e-13);
}

TEST_CASE("specular reflection at the upper wall") {
    const PhaseDomain dom{0.0, 1.5, 0.0, 1.5};
    auto e = single(0.5, 1.6, 0.0, 2.0);
    apply_boundaries(e, dom);
    CHECK(e.y[0] == doctest::Approx(1.4).epsilon(1e-14));
    CHECK(e.vy[0] == -2.0);
}

TEST_CASE("periodic wrap in x") {
    const PhaseDomain dom{0.0, 1.5, 0.0, 1.5};
    auto e = single(1.8, 0.5, 1.0, 0.0);
    apply_boundaries(e, dom);
    CHECK(e.x[0] == doctest::Approx(0.3).epsilon(1e-14));

    auto w = single(-0.2, 0.5, -1.0, 0.0);
    apply_boundaries(w, dom);
    CHECK(w.x[0] == doctest::Approx(1.3).epsilon(1e-14));
}

TEST_CASE("interior particles untouched") {
    const PhaseDomain dom{0.0, 1.5, 0.0, 1.5};
    auto e = single(0.7, 0.9, 0.3, -0.4);
    apply_boundaries(e, dom);
    CHECK(e.x[0] == 0.7);
    CHECK(e.y[0] == 0.9);
    CHECK(e.vx[0] == 0.3);
    CHECK(e.vy[0] == -0.4);
}

TEST_CASE("all particles land strictly inside after violent steps") {
    const PhaseDomain dom{0.0, 1.5, 0.0, 1.5};
    RngPolicy rng{77};
    const RandomStream s = rng.stream(StreamPurpose::Generic, 0);
    const std::size_t n = 20000;
    ParticleEnsemble e;
    e.resize(n);
    e.omega = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
        e.x[i] = 20.0 * (s.uniform(4 * i) - 0.5);
        e.y[i] = 20.0 * (s.uniform(4 * i + 1) - 0.5);
        e.vx[i] = s.uniform(4 * i + 2) - 0.5;
        e.vy[i] = s.uniform(4 * i + 3) - 0.5;
    }
    const std::size_t warned = apply_boundaries(e, dom);
    CHECK(warned > 0); // displacements above were deliberately huge
    for (std::size_t i = 0; i < n; ++i) {
        CHECK(e.x[i] >= dom.x_min);
        CHECK(e.x[i] <= dom.x_max);
        CHECK(e.y[i] >= dom.y_min);
        CHECK(e.y[i] <= dom.y_max);
    }
}

TEST_CASE("double reflection resolves within the bounce cap") {
    const PhaseDomain dom{0.0, 1.0, 0.0, 1.0};
    auto e = single(0.5, 2.3, 0.0, 3.0); // needs two mirror passes
    apply_boundaries(e, dom);
    CHECK(e.y[0] == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(e.vy[0] == 3.0); // flipped twice
}
