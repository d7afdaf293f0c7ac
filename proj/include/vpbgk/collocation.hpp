#pragma once

#include <vector>

#include "vpbgk/domain.hpp"

namespace vpbgk {

// Gauss-Legendre quadrature in the random variable z, uniform on [0,1]:
// nodes mapped affinely from [-1,1], weights normalized to sum 1 (the uniform
// density is absorbed into the weights). Exact for polynomials of degree
// <= 2 n - 1.
struct CollocationSet {
    std::vector<double> nodes;   // strictly increasing, inside (0,1)
    std::vector<double> weights; // positive, sum to 1

    std::size_t size() const { return nodes.size(); }
};

CollocationSet gauss_legendre_nodes(int count);

// Quadrature-weighted mean and variance across nodes; one value per node.
double estimate_expectation(const std::vector<double>& values, const CollocationSet& set);
double estimate_variance(const std::vector<double>& values, const CollocationSet& set);
Grid estimate_expectation(const std::vector<Grid>& values, const CollocationSet& set);
Grid estimate_variance(const std::vector<Grid>& values, const CollocationSet& set);

// Max-norm difference between two mean-density grids from runs at different
// node counts (same mesh, same seeds, same physics).
double collocation_error(const Grid& mean_ref, const Grid& mean_coarse);

} // namespace vpbgk
