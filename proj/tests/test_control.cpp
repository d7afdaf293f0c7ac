#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "vpbgk/control.hpp"
#include "vpbgk/errors.hpp"
#include "vpbgk/rng.hpp"

using namespace vpbgk;

namespace {

ParticleEnsemble random_ensemble(std::size_t n, std::uint64_t seed, double y_lo = 0.0,
                                 double y_hi = 1.5) {
    ParticleEnsemble e;
    e.resize(n);
    e.omega = 1.0 / static_cast<double>(n);
    RngPolicy rng{seed};
    const RandomStream s = rng.stream(StreamPurpose::Generic, 0);
    for (std::size_t m = 0; m < n; ++m) {
        e.x[m] = 1.5 * s.uniform(4 * m);
        e.y[m] = y_lo + (y_hi - y_lo) * s.uniform(4 * m + 1);
        double g0, g1;
        s.normal_pair(2 * (2 * m + 1), g0, g1);
        e.vx[m] = g0;
        e.vy[m] = g1;
    }
    return e;
}

ControlParams basic_params() {
    ControlParams p;
    p.alpha_x = 5.0;
    p.beta_x = 2.0;
    p.alpha_v = 15.0;
    p.beta_v = 12.0;
    p.gamma = 2.5e-3;
    p.max_field = 50.0;
    p.y_target = 0.75;
    p.n_cells = 4;
    return p;
}

StatOperator single_node_op() {
    StatOperator op;
    op.kind = StatOperatorKind::Expectation;
    op.weights = {1.0};
    return op;
}

} // namespace

TEST_CASE("worst-case node selection") {
    CHECK(select_worst_case_node({0.2, 0.5, 0.3}) == 1);
    CHECK(select_worst_case_node({0.4, 0.4, 0.4}) == 0);
    CHECK(select_worst_case_node({7.0}) == 0);
    CHECK_THROWS_AS(select_worst_case_node({}), InternalError);
}

TEST_CASE("vanishing-step feedback: worked single-particle value") {
    // alpha_x (y - y_target) vx / gamma = 1 * 0.25 * 2 / 1 = 0.5; the beta
    // terms vanish because the ensemble mean equals the only particle.
    ParticleEnsemble e;
    e.resize(1);
    e.omega = 1.0;
    e.x[0] = 0.1;
    e.y[0] = 1.0;
    e.vx[0] = 2.0;
    e.vy[0] = 0.0;
    ControlParams p;
    p.alpha_x = 1.0;
    p.beta_x = 0.0;
    p.alpha_v = 0.0;
    p.beta_v = 0.0;
    p.gamma = 1.0;
    p.max_field = 50.0;
    p.y_target = 0.75;
    const auto b = pointwise_feedback_limit({{&e, nullptr}}, p, single_node_op());
    REQUIRE(b.size() == 1);
    CHECK(b[0] == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("zero streamwise velocity nullifies the feedback") {
    ParticleEnsemble e = random_ensemble(100, 1);
    for (auto& v : e.vx) v = 0.0;
    const auto b = pointwise_feedback_limit({{&e, nullptr}}, basic_params(), single_node_op());
    for (double v : b) CHECK(v == 0.0);
    std::vector<double> ey(e.size(), 0.3);
    const auto bd =
        pointwise_feedback_discrete({{&e, &ey}}, 0.05, basic_params(), single_node_op());
    for (double v : bd) CHECK(v == 0.0);
}

TEST_CASE("clamping caps the raw feedback at the admissible bound") {
    ParticleEnsemble e;
    e.resize(1);
    e.omega = 1.0;
    e.x[0] = 0.1;
    e.y[0] = 1.75; // one above target
    e.vx[0] = 1.0;
    e.vy[0] = 0.0;
    ControlParams p;
    p.alpha_x = 1.0;
    p.beta_x = p.alpha_v = p.beta_v = 0.0;
    p.gamma = 1e-3; // raw value 1000
    p.max_field = 50.0;
    p.y_target = 0.75;
    const auto b = pointwise_feedback_limit({{&e, nullptr}}, p, single_node_op());
    CHECK(b[0] == 50.0);

    e.vx[0] = -1.0; // raw value -1000
    const auto bn = pointwise_feedback_limit({{&e, nullptr}}, p, single_node_op());
    CHECK(bn[0] == -50.0);
}

TEST_CASE("zero weights produce zero feedback (discrete form)") {
    ParticleEnsemble e = random_ensemble(50, 2);
    std::vector<double> ey(e.size(), 0.1);
    ControlParams p = basic_params();
    p.alpha_x = p.beta_x = p.alpha_v = p.beta_v = 0.0;
    const auto b = pointwise_feedback_discrete({{&e, &ey}}, 0.05, p, single_node_op());
    for (double v : b) CHECK(v == 0.0);
}

TEST_CASE("finite-step feedback approaches the vanishing-step form at rate h") {
    ParticleEnsemble e = random_ensemble(500, 3);
    std::vector<double> ey(e.size());
    RngPolicy rng{4};
    const RandomStream s = rng.stream(StreamPurpose::Generic, 9);
    for (std::size_t m = 0; m < ey.size(); ++m) ey[m] = s.uniform(m) - 0.5;

    ControlParams p = basic_params();
    p.max_field = 1e9; // keep the comparison in the unclamped region
    p.gamma = 1.0;     // O(1) penalization so h = 1e-3 sits in the linear regime
    const auto b0 = pointwise_feedback_limit({{&e, nullptr}}, p, single_node_op());

    auto max_diff = [&](double h) {
        const auto bh = pointwise_feedback_discrete({{&e, &ey}}, h, p, single_node_op());
        double d = 0.0;
        for (std::size_t m = 0; m < bh.size(); ++m) d = std::max(d, std::abs(bh[m] - b0[m]));
        return d;
    };
    const double d3 = max_diff(1e-3);
    const double d4 = max_diff(1e-4);
    CHECK(d3 < 100.0);     // O(h) with an O((alpha+beta) vx^2 B) constant
    CHECK(d4 < 0.15 * d3); // one order of h smaller within slack
    CHECK(d4 > 1e-12);     // and not trivially zero
}

TEST_CASE("streamwise sign flip negates the feedback") {
    ParticleEnsemble a = random_ensemble(400, 5);
    ParticleEnsemble b = a;
    for (auto& v : b.vx) v = -v;
    std::vector<double> ey(a.size(), 0.2);
    const ControlParams p = basic_params();

    const auto ba = pointwise_feedback_limit({{&a, nullptr}}, p, single_node_op());
    const auto bb = pointwise_feedback_limit({{&b, nullptr}}, p, single_node_op());
    for (std::size_t m = 0; m < ba.size(); ++m)
        CHECK(ba[m] == doctest::Approx(-bb[m]).epsilon(1e-14));

    const auto da = pointwise_feedback_discrete({{&a, &ey}}, 0.05, p, single_node_op());
    const auto db = pointwise_feedback_discrete({{&b, &ey}}, 0.05, p, single_node_op());
    for (std::size_t m = 0; m < da.size(); ++m)
        CHECK(da[m] == doctest::Approx(-db[m]).epsilon(1e-14));

    const auto ca = cellwise_feedback({{&a, &ey}}, 0.05, p, single_node_op(), 0.0, 1.5, true);
    const auto cb = cellwise_feedback({{&b, &ey}}, 0.05, p, single_node_op(), 0.0, 1.5, true);
    for (int k = 0; k < p.n_cells; ++k)
        CHECK(ca.values[k] == doctest::Approx(-cb.values[k]).epsilon(1e-14));
}

TEST_CASE("expectation and worst-case coincide for one node") {
    ParticleEnsemble e = random_ensemble(300, 6);
    std::vector<double> ey(e.size(), -0.1);
    const ControlParams p = basic_params();
    StatOperator mean_op = single_node_op();
    StatOperator worst_op;
    worst_op.kind = StatOperatorKind::WorstCase;
    worst_op.z0 = 0;
    const auto bm = pointwise_feedback_discrete({{&e, &ey}}, 0.05, p, mean_op);
    const auto bw = pointwise_feedback_discrete({{&e, &ey}}, 0.05, p, worst_op);
    CHECK(bm == bw);
}

TEST_CASE("ensemble means match a sequential two-pass oracle") {
    ParticleEnsemble e = random_ensemble(100000, 7);
    const EnsembleMeans m = ensemble_means(e);
    double sy = 0.0, svx = 0.0, svy = 0.0;
    for (std::size_t i = 0; i < e.size(); ++i) {
        sy += e.y[i];
        svx += e.vx[i];
        svy += e.vy[i];
    }
    const double n = static_cast<double>(e.size());
    CHECK(m.y == doctest::Approx(sy / n).epsilon(1e-12));
    CHECK(m.vx == doctest::Approx(svx / n).epsilon(1e-12));
    CHECK(m.vy == doctest::Approx(svy / n).epsilon(1e-12));
}

TEST_CASE("cell averaging of per-particle values") {
    ControlParams p = basic_params();
    p.n_cells = 3;
    p.max_field = 50.0;

    SUBCASE("constant values average to themselves") {
        const std::vector<double> b(10, 4.2);
        const std::vector<double> y(10, 0.2); // everything in slab 0
        const ControlField f = interpolate_cellwise(b, y, p, 0.0, 1.5);
        CHECK(f.values[0] == doctest::Approx(4.2));
        CHECK(f.values[1] == 0.0); // empty slab convention
        CHECK(f.values[2] == 0.0);
    }
    SUBCASE("two values in one slab average") {
        const std::vector<double> b{10.0, 20.0};
        const std::vector<double> y{0.6, 0.9}; // both in slab 1 of [0,1.5]/3
        const ControlField f = interpolate_cellwise(b, y, p, 0.0, 1.5);
        CHECK(f.values[1] == doctest::Approx(15.0));
    }
    SUBCASE("slab assignment by reference position") {
        const std::vector<double> b{7.0, -3.0, 1.0};
        const std::vector<double> y{0.1, 0.7, 1.4};
        const ControlField f = interpolate_cellwise(b, y, p, 0.0, 1.5);
        CHECK(f.values[0] == doctest::Approx(7.0));
        CHECK(f.values[1] == doctest::Approx(-3.0));
        CHECK(f.values[2] == doctest::Approx(1.0));
    }
}

TEST_CASE("per-cell feedback: worked value and clamped value") {
    // one particle per slab, vanishing-step form, alpha_v = 1, gamma = 1:
    // slab value = alpha_v * vybar * vxbar = 3.
    ParticleEnsemble e;
    e.resize(2);
    e.omega = 1.0;
    e.x = {0.1, 0.2};
    e.y = {0.3, 1.2}; // slabs 0 and 1 of a 2-slab partition of [0, 1.5]
    e.vx = {1.0, 1.0};
    e.vy = {3.0, -80.0};
    ControlParams p;
    p.alpha_v = 1.0;
    p.alpha_x = p.beta_x = p.beta_v = 0.0;
    p.gamma = 1.0;
    p.max_field = 50.0;
    p.n_cells = 2;
    const ControlField f =
        cellwise_feedback({{&e, nullptr}}, 0.05, p, single_node_op(), 0.0, 1.5, true);
    CHECK(f.values[0] == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(f.values[1] == -50.0); // raw -80 clamped
}

TEST_CASE("per-cell feedback: zero streamwise slab velocity gives zero") {
    ParticleEnsemble e = random_ensemble(200, 8);
    for (auto& v : e.vx) v = 0.0;
    const ControlField f = cellwise_feedback({{&e, nullptr}}, 0.05, basic_params(),
                                             single_node_op(), 0.0, 1.5, true);
    for (double v : f.values) CHECK(v == 0.0);
}

TEST_CASE("control bound holds over random states for every method") {
    const ControlParams p = basic_params();
    for (std::uint64_t seed = 10; seed < 16; ++seed) {
        ParticleEnsemble a = random_ensemble(500, seed);
        ParticleEnsemble b = random_ensemble(500, seed + 100);
        // exaggerate velocities to force saturation sometimes
        for (auto& v : a.vx) v *= 40.0;
        for (auto& v : a.vy) v *= 40.0;
        std::vector<double> ey(a.size(), 0.0);
        std::vector<FeedbackNodeView> nodes{{&a, &ey}, {&b, &ey}};
        StatOperator op;
        op.kind = StatOperatorKind::Expectation;
        op.weights = {0.5, 0.5};

        const auto bl = pointwise_feedback_limit(nodes, p, op);
        const auto ref = reference_positions(nodes, op);
        const ControlField f1 = interpolate_cellwise(bl, ref, p, 0.0, 1.5);
        for (double v : f1.values) CHECK(std::abs(v) <= p.max_field);

        const ControlField f2 = cellwise_feedback(nodes, 0.05, p, op, 0.0, 1.5, true);
        for (double v : f2.values) CHECK(std::abs(v) <= p.max_field);

        const ControlField f3 = cellwise_feedback(nodes, 0.05, p, op, 0.0, 1.5, false);
        for (double v : f3.values) CHECK(std::abs(v) <= p.max_field);
    }
}

TEST_CASE("reference positions: worst-case picks the node, expectation averages") {
    ParticleEnsemble a = random_ensemble(50, 20);
    ParticleEnsemble b = random_ensemble(50, 21);
    std::vector<FeedbackNodeView> nodes{{&a, nullptr}, {&b, nullptr}};
    StatOperator worst;
    worst.kind = StatOperatorKind::WorstCase;
    worst.z0 = 1;
    CHECK(reference_positions(nodes, worst) == b.y);

    StatOperator mean;
    mean.kind = StatOperatorKind::Expectation;
    mean.weights = {0.25, 0.75};
    const auto ref = reference_positions(nodes, mean);
    for (std::size_t m = 0; m < ref.size(); ++m)
        CHECK(ref[m] == doctest::Approx(0.25 * a.y[m] + 0.75 * b.y[m]).epsilon(1e-14));
}

TEST_CASE("gamma must be positive") {
    ParticleEnsemble e = random_ensemble(10, 30);
    ControlParams p = basic_params();
    p.gamma = 0.0;
    CHECK_THROWS_AS(pointwise_feedback_limit({{&e, nullptr}}, p, single_node_op()), ConfigError);
}

TEST_CASE("control field slab lookup") {
    const ControlField f = ControlField::constant(4, 0.0, 1.5, 0.0);
    CHECK(f.slab_of(0.0) == 0);
    CHECK(f.slab_of(0.374) == 0);
    CHECK(f.slab_of(0.376) == 1);
    CHECK(f.slab_of(1.5) == 3);  // top edge clamps into the last slab
    CHECK(f.slab_of(-0.1) == 0); // out-of-range guards
    CHECK(f.slab_of(99.0) == 3);
}
