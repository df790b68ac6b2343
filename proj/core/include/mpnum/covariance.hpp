#pragma once

#include <vector>

#include "mpnum/array.hpp"

namespace mpnum::stats {

// Smoothness nu must be one of 0.5, 1.5, 2.5 (closed-form cases).
struct MaternParams {
    double nu;
    double range;     // a > 0
    double variance;  // sigma^2 > 0
};

struct GridLocations {
    std::vector<double> x;
    std::vector<double> y;
    MPArray distances;  // n x n Euclidean distance matrix, double precision
};

// M x M unit-square grid (n = M^2 points) with its pairwise distances.
GridLocations grid_locations(std::size_t side);

// Pairwise distances of 1-D locations 0, n/(n-1), ..., n (the chain layout
// used by the Laplace workload).
MPArray chain_distances(std::size_t n);

MPArray matern_cov(const MPArray& distances, const MaternParams& params,
                   Precision prec = Precision::Double);

// Exponential kernel sigma2 * exp(-d/a), the nu = 0.5 Matern case.
MPArray exp_cov(const MPArray& distances, double sigma2, double range,
                Precision prec = Precision::Double);

}  // namespace mpnum::stats
