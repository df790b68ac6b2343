#pragma once

#include <functional>
#include <vector>

namespace mpnum::stats {

struct NelderMeadConfig {
    int max_iter = 500;
    double tol = 1e-8;  // stop when the stddev of vertex values drops below
};

struct NelderMeadResult {
    std::vector<double> x;
    double value;
    int iterations;
    bool converged;  // false when max_iter was hit first
};

// Standard simplex coefficients: reflection 1, expansion 2,
// contraction 0.5, shrink 0.5. Deterministic for a given start point.
NelderMeadResult nelder_mead(
    const std::function<double(const std::vector<double>&)>& f,
    const std::vector<double>& x0, const NelderMeadConfig& config = {});

}  // namespace mpnum::stats
