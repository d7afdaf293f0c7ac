#include "vpbgk/sampling.hpp"

#include <algorithm>
#include <cmath>

#include "vpbgk/errors.hpp"
#include "vpbgk/parallel.hpp"

namespace vpbgk {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// Gudermannian and inverse; the antiderivative pair for sech sampling.
double gd(double u) { return 2.0 * std::atan(std::tanh(0.5 * u)); }
double gd_inv(double phi) { return std::atanh(std::sin(phi)); }

struct PreparedEnsemble {
    ParticleEnsemble e;
    RandomStream pos;
    RandomStream vel;
};

PreparedEnsemble prepare(const ScenarioConfig& config, int node_index) {
    PreparedEnsemble p{ParticleEnsemble{},
                       RandomStream(config.seed, StreamPurpose::InitPosition, 0),
                       RandomStream(config.seed, StreamPurpose::InitVelocity, 0)};
    p.e.resize(static_cast<std::size_t>(config.n_particles));
    p.e.node_index = node_index;
    return p;
}

} // namespace

double sod_initial_temperature(const SodParams& sod, double y, double z) {
    const bool middle = y >= 0.5 && y <= 1.0;
    switch (sod.temp_profile) {
    case SodTempProfile::Base: return middle ? 1.0 + 0.25 * z : 0.1 + 0.25 * z;
    case SodTempProfile::High10: return middle ? 10.0 : 1.0;
    case SodTempProfile::High50: return middle ? 50.0 : 5.0;
    case SodTempProfile::High100: return middle ? 100.0 : 10.0;
    }
    return 0.0;
}

ParticleEnsemble sample_sod(const ScenarioConfig& config, double z) {
    const PhaseDomain& dom = config.domain;
    if (dom.x_min != 0.0 || dom.x_max != 1.5 || dom.y_min != 0.0 || dom.y_max != 1.5)
        throw ConfigError("sod2d scenario requires domain [0,1.5]x[0,1.5]");
    if (z < 0.0 || z > 1.0) throw ConfigError("sample_sod: z outside [0,1]");

    auto [ensemble, pos, vel] = prepare(config, 0);
    const std::size_t n = ensemble.size();

    // Density 0.125 on the outer stripes, 1 on y in [0.5, 1]:
    // stripe masses 0.0625 / 0.5 / 0.0625 -> probabilities 0.1 / 0.8 / 0.1.
    const double total_mass = 1.5 * (0.125 * 1.0 + 1.0 * 0.5);
    ensemble.omega = total_mass / static_cast<double>(n);

    par::for_blocks(n, [&](std::size_t, std::size_t lo, std::size_t hi) {
        for (std::size_t m = lo; m < hi; ++m) {
            const double ux = pos.uniform(2 * m);
            const double uy = pos.uniform(2 * m + 1);
            double y;
            if (uy < 0.1)
                y = 5.0 * uy;
            else if (uy < 0.9)
                y = 0.5 + 0.625 * (uy - 0.1);
            else
                y = 1.0 + 5.0 * (uy - 0.9);
            ensemble.x[m] = 1.5 * ux;
            ensemble.y[m] = y;
            double g0, g1;
            vel.normal_pair(m, g0, g1);
            const double sigma = std::sqrt(sod_initial_temperature(config.sod, y, z));
            ensemble.vx[m] = sigma * g0;
            ensemble.vy[m] = sigma * g1;
        }
    }, config.threads);
    return ensemble;
}

ParticleEnsemble sample_kh(const ScenarioConfig& config, double z) {
    if (z < 0.0 || z > 1.0) throw ConfigError("sample_kh: z outside [0,1]");
    const PhaseDomain& dom = config.domain;
    const KhParams& kh = config.kh;

    // Tabulated inverse CDF of the x factor 1 + eps0 cos(3 k0 x + eps1 sin(k0 x)).
    constexpr int kTable = 4096;
    const double dxt = dom.length_x() / kTable;
    std::vector<double> cdf(kTable + 1, 0.0);
    auto qx = [&](double x) {
        return 1.0 + kh.eps0 * std::cos(3.0 * kh.k0 * x + kh.eps1 * std::sin(kh.k0 * x));
    };
    double prev = qx(dom.x_min);
    for (int i = 1; i <= kTable; ++i) {
        const double cur = qx(dom.x_min + i * dxt);
        cdf[i] = cdf[i - 1] + 0.5 * (prev + cur) * dxt;
        prev = cur;
    }
    const double x_integral = cdf[kTable];
    for (auto& v : cdf) v /= x_integral;

    auto invert_x = [&](double u) {
        // cdf is strictly increasing (q >= 1 - eps0 > 0)
        const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        int i = static_cast<int>(it - cdf.begin()) - 1;
        if (i < 0) i = 0;
        if (i >= kTable) i = kTable - 1;
        const double frac = (u - cdf[i]) / (cdf[i + 1] - cdf[i]);
        return dom.x_min + (i + frac) * dxt;
    };

    // sech(y / a) marginal via the gudermannian antiderivative.
    const double a = 0.9;
    const double g_lo = gd(dom.y_min / a);
    const double g_hi = gd(dom.y_max / a);
    const double y_integral = (1.5 / kTwoPi) * a * (g_hi - g_lo);

    auto [ensemble, pos, vel] = prepare(config, 0);
    const std::size_t n = ensemble.size();
    ensemble.omega = y_integral * x_integral / static_cast<double>(n);

    const double temp = 0.15 + 0.25 * z;
    const double sigma = std::sqrt(temp);

    par::for_blocks(n, [&](std::size_t, std::size_t lo, std::size_t hi) {
        for (std::size_t m = lo; m < hi; ++m) {
            const double u1 = pos.uniform(2 * m);
            const double u2 = pos.uniform(2 * m + 1);
            const double x = invert_x(u1);
            const double y = a * gd_inv(g_lo + u2 * (g_hi - g_lo));
            ensemble.x[m] = std::clamp(x, dom.x_min, dom.x_max);
            ensemble.y[m] = std::clamp(y, dom.y_min, dom.y_max);
            double g0, g1;
            vel.normal_pair(m, g0, g1);
            const double drift = (ensemble.y[m] >= 0.0) ? -kh.ux : kh.ux;
            ensemble.vx[m] = drift + sigma * g0;
            ensemble.vy[m] = sigma * g1;
        }
    }, config.threads);
    return ensemble;
}

ParticleEnsemble sample_custom(const ScenarioConfig& config, double z) {
    if (z < 0.0 || z > 1.0) throw ConfigError("sample_custom: z outside [0,1]");
    const PhaseDomain& dom = config.domain;
    auto [ensemble, pos, vel] = prepare(config, 0);
    const std::size_t n = ensemble.size();
    const double temp = config.custom.t0 + config.custom.t_slope * z;
    if (temp <= 0.0) throw ConfigError("custom scenario: nonpositive temperature");
    ensemble.omega = config.custom.density * dom.length_x() * dom.length_y() / static_cast<double>(n);
    const double sigma = std::sqrt(temp);
    par::for_blocks(n, [&](std::size_t, std::size_t lo, std::size_t hi) {
        for (std::size_t m = lo; m < hi; ++m) {
            ensemble.x[m] = dom.x_min + dom.length_x() * pos.uniform(2 * m);
            ensemble.y[m] = dom.y_min + dom.length_y() * pos.uniform(2 * m + 1);
            double g0, g1;
            vel.normal_pair(m, g0, g1);
            ensemble.vx[m] = config.custom.ux + sigma * g0;
            ensemble.vy[m] = config.custom.uy + sigma * g1;
        }
    }, config.threads);
    return ensemble;
}

ParticleEnsemble sample_initial(const ScenarioConfig& config, double z, int node_index) {
    ParticleEnsemble e;
    switch (config.scenario) {
    case Scenario::Sod2D: e = sample_sod(config, z); break;
    case Scenario::KelvinHelmholtz: e = sample_kh(config, z); break;
    case Scenario::Custom: e = sample_custom(config, z); break;
    }
    e.node_index = node_index;
    return e;
}

} // namespace vpbgk
