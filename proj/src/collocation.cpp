#include "vpbgk/collocation.hpp"

#include <cmath>

#include "vpbgk/errors.hpp"

namespace vpbgk {

CollocationSet gauss_legendre_nodes(int count) {
    if (count < 1) throw ConfigError("collocation: node count >= 1 required");
    const int n = count;
    CollocationSet set;
    set.nodes.resize(n);
    set.weights.resize(n);

    // Newton iteration on P_n over [-1,1]; roots come in +/- pairs.
    for (int k = 0; k < (n + 1) / 2; ++k) {
        double x = std::cos(M_PI * (k + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            // Evaluate P_n and P_n' by the three-term recurrence.
            double p0 = 1.0, p1 = x;
            for (int j = 2; j <= n; ++j) {
                const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        // Map to [0,1] with unit total weight; k indexes from the +1 end.
        set.nodes[n - 1 - k] = 0.5 * (x + 1.0);
        set.weights[n - 1 - k] = 0.5 * w;
        set.nodes[k] = 0.5 * (1.0 - x);
        set.weights[k] = 0.5 * w;
    }
    if (n == 1) {
        set.nodes[0] = 0.5;
        set.weights[0] = 1.0;
    }
    return set;
}

double estimate_expectation(const std::vector<double>& values, const CollocationSet& set) {
    if (values.size() != set.size())
        throw InternalError("estimate_expectation: node count mismatch");
    double acc = 0.0;
    for (std::size_t k = 0; k < values.size(); ++k) acc += set.weights[k] * values[k];
    return acc;
}

double estimate_variance(const std::vector<double>& values, const CollocationSet& set) {
    const double mean = estimate_expectation(values, set);
    double acc = 0.0;
    for (std::size_t k = 0; k < values.size(); ++k) {
        const double d = values[k] - mean;
        acc += set.weights[k] * d * d;
    }
    return acc;
}

Grid estimate_expectation(const std::vector<Grid>& values, const CollocationSet& set) {
    if (values.size() != set.size())
        throw InternalError("estimate_expectation: node count mismatch");
    if (values.empty()) return {};
    Grid out(values[0].size(), 0.0);
    for (std::size_t k = 0; k < values.size(); ++k) {
        if (values[k].size() != out.size())
            throw InternalError("estimate_expectation: grid size mismatch");
        for (std::size_t c = 0; c < out.size(); ++c) out[c] += set.weights[k] * values[k][c];
    }
    return out;
}

Grid estimate_variance(const std::vector<Grid>& values, const CollocationSet& set) {
    const Grid mean = estimate_expectation(values, set);
    Grid out(mean.size(), 0.0);
    for (std::size_t k = 0; k < values.size(); ++k)
        for (std::size_t c = 0; c < out.size(); ++c) {
            const double d = values[k][c] - mean[c];
            out[c] += set.weights[k] * d * d;
        }
    return out;
}

double collocation_error(const Grid& mean_ref, const Grid& mean_coarse) {
    if (mean_ref.size() != mean_coarse.size())
        throw ConfigError("collocation_error: grids differ in size (mesh mismatch)");
    double err = 0.0;
    for (std::size_t c = 0; c < mean_ref.size(); ++c)
        err = std::max(err, std::abs(mean_ref[c] - mean_coarse[c]));
    return err;
}

} // namespace vpbgk
