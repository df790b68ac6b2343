#include "mpnum/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace mpnum::stats {

NelderMeadResult nelder_mead(
    const std::function<double(const std::vector<double>&)>& f,
    const std::vector<double>& x0, const NelderMeadConfig& config) {
    const std::size_t k = x0.size();
    std::vector<std::vector<double>> verts(k + 1, x0);
    for (std::size_t i = 0; i < k; ++i) {
        verts[i + 1][i] += (x0[i] != 0.0) ? 0.05 * x0[i] : 0.00025;
    }
    std::vector<double> vals(k + 1);
    for (std::size_t i = 0; i <= k; ++i) vals[i] = f(verts[i]);

    auto value_stddev = [&] {
        const double mean =
            std::accumulate(vals.begin(), vals.end(), 0.0) / vals.size();
        double acc = 0.0;
        for (double v : vals) acc += (v - mean) * (v - mean);
        return std::sqrt(acc / vals.size());
    };

    int iter = 0;
    for (; iter < config.max_iter; ++iter) {
        std::vector<std::size_t> order(k + 1);
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
        {
            std::vector<std::vector<double>> nv(k + 1);
            std::vector<double> nf(k + 1);
            for (std::size_t i = 0; i <= k; ++i) {
                nv[i] = verts[order[i]];
                nf[i] = vals[order[i]];
            }
            verts = std::move(nv);
            vals = std::move(nf);
        }
        if (value_stddev() < config.tol) {
            return {verts[0], vals[0], iter, true};
        }

        std::vector<double> centroid(k, 0.0);
        for (std::size_t i = 0; i < k; ++i) {
            for (std::size_t v = 0; v < k; ++v) centroid[i] += verts[v][i];
            centroid[i] /= static_cast<double>(k);
        }
        auto blend = [&](double coef) {
            std::vector<double> p(k);
            for (std::size_t i = 0; i < k; ++i)
                p[i] = centroid[i] + coef * (verts[k][i] - centroid[i]);
            return p;
        };

        const std::vector<double> xr = blend(-1.0);  // reflection
        const double fr = f(xr);
        if (fr < vals[0]) {
            const std::vector<double> xe = blend(-2.0);  // expansion
            const double fe = f(xe);
            if (fe < fr) {
                verts[k] = xe;
                vals[k] = fe;
            } else {
                verts[k] = xr;
                vals[k] = fr;
            }
        } else if (fr < vals[k - 1]) {
            verts[k] = xr;
            vals[k] = fr;
        } else {
            const bool outside = fr < vals[k];
            const std::vector<double> xc = blend(outside ? -0.5 : 0.5);
            const double fc = f(xc);
            if (fc < (outside ? fr : vals[k])) {
                verts[k] = xc;
                vals[k] = fc;
            } else {
                for (std::size_t v = 1; v <= k; ++v) {  // shrink toward best
                    for (std::size_t i = 0; i < k; ++i)
                        verts[v][i] = verts[0][i] + 0.5 * (verts[v][i] - verts[0][i]);
                    vals[v] = f(verts[v]);
                }
            }
        }
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i <= k; ++i)
        if (vals[i] < vals[best]) best = i;
    return {verts[best], vals[best], iter, false};
}

}  // namespace mpnum::stats
