#include "mpnum/covariance.hpp"

#include <cmath>

#include "mpnum/errors.hpp"

namespace mpnum::stats {

GridLocations grid_locations(std::size_t side) {
    if (side < 2) throw InvalidParam("grid_locations: side length must be >= 2");
    const std::size_t n = side * side;
    GridLocations out;
    out.x.reserve(n);
    out.y.reserve(n);
    // expand.grid order: x varies fastest
    for (std::size_t j = 0; j < side; ++j) {
        for (std::size_t i = 0; i < side; ++i) {
            out.x.push_back(static_cast<double>(i) / static_cast<double>(side - 1));
            out.y.push_back(static_cast<double>(j) / static_cast<double>(side - 1));
        }
    }
    out.distances = MPArray::zeros_matrix(n, n, Precision::Double);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < n; ++i) {
            const double dx = out.x[i] - out.x[j];
            const double dy = out.y[i] - out.y[j];
            out.distances.set(i, j, std::hypot(dx, dy));
        }
    }
    return out;
}

MPArray chain_distances(std::size_t n) {
    if (n < 2) throw InvalidParam("chain_distances: n must be >= 2");
    MPArray d = MPArray::zeros_matrix(n, n, Precision::Double);
    const double step = static_cast<double>(n) / static_cast<double>(n - 1);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i)
            d.set(i, j, std::fabs(static_cast<double>(i) - static_cast<double>(j)) *
                            step);
    return d;
}

MPArray matern_cov(const MPArray& distances, const MaternParams& params,
                   Precision prec) {
    if (!distances.is_matrix()) throw NotAMatrix("matern_cov: distances");
    if (params.range <= 0.0 || params.variance <= 0.0) {
        throw InvalidParam("matern_cov: range and variance must be positive");
    }
    const double nu = params.nu;
    if (nu != 0.5 && nu != 1.5 && nu != 2.5) {
        throw InvalidParam("matern_cov: nu must be 0.5, 1.5, or 2.5");
    }
    const double a = params.range;
    const double s2 = params.variance;
    MPArray out = MPArray::zeros_matrix(distances.rows(), distances.cols(), prec);
    for (std::size_t i = 0; i < distances.size(); ++i) {
        const double d = distances.at_linear(i);
        double v;
        if (nu == 0.5) {
            v = s2 * std::exp(-d / a);
        } else if (nu == 1.5) {
            const double r = std::sqrt(3.0) * d / a;
            v = s2 * (1.0 + r) * std::exp(-r);
        } else {
            const double r = std::sqrt(5.0) * d / a;
            v = s2 * (1.0 + r + r * r / 3.0) * std::exp(-r);
        }
        out.set_linear(i, v);
    }
    return out;
}

MPArray exp_cov(const MPArray& distances, double sigma2, double range,
                Precision prec) {
    return matern_cov(distances, MaternParams{0.5, range, sigma2}, prec);
}

}  // namespace mpnum::stats
