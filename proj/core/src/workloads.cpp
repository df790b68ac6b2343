#include "mpnum/workloads.hpp"

#include <chrono>
#include <cmath>

#include "mpnum/errors.hpp"
#include "mpnum/linalg.hpp"

namespace mpnum::stats {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

MPArray column(const std::vector<double>& v, Precision prec) {
    return MPArray::from_doubles(v, v.size(), 1, prec);
}

// t(v) * m * v with the matrix product at storage precision and the final
// dot product accumulated in double.
double quad_form(const MPArray& m, const MPArray& v) {
    const MPArray mv = linalg::matmul(m, v);
    double acc = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i)
        acc += v.at_linear(i) * mv.at_linear(i);
    return acc;
}

double logistic(double t) { return 1.0 / (1.0 + std::exp(-t)); }

double log1p_exp(double t) {
    return t > 0.0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t));
}

}  // namespace

MPArray sample_gp(const MPArray& cov, Rng& rng) {
    const MPArray l = transpose(linalg::chol(cov));
    std::vector<double> eps(cov.rows());
    for (auto& e : eps) e = rng.normal();
    const MPArray z = linalg::matmul(l, column(eps, cov.precision()));
    MPArray out = MPArray::zeros(cov.rows(), cov.precision());
    for (std::size_t i = 0; i < out.size(); ++i) out.set_linear(i, z.at_linear(i));
    return out;
}

namespace {

// chol with the reduced-precision diagonal jitter and x10 escalation.
MPArray chol_with_jitter(const MPArray& cov, Precision prec,
                         const JitterPolicy& policy) {
    MPArray v = cov.precision() == prec ? cov : cov.converted(prec);
    if (prec == Precision::Double) return linalg::chol(v);
    double jitter = policy.initial;
    for (;;) {
        MPArray jittered = v;
        for (std::size_t i = 0; i < v.rows(); ++i)
            jittered.set(i, i, v.get(i, i) + jitter);
        try {
            return linalg::chol(jittered);
        } catch (const NotPositiveDefinite&) {
            jitter *= 10.0;
            if (jitter > policy.max_jitter) throw;
        }
    }
}

}  // namespace

double gaussian_nll(const MPArray& z, const MPArray& cov, Precision prec,
                    const JitterPolicy& jitter) {
    const std::size_t n = cov.rows();
    const MPArray u = chol_with_jitter(cov, prec, jitter);
    double log_det = 0.0;
    for (std::size_t i = 0; i < n; ++i) log_det += std::log(u.get(i, i));
    log_det *= 2.0;
    const MPArray zc = z.precision() == prec ? z : z.converted(prec);
    MPArray rhs = MPArray::from_doubles(zc.to_doubles(), n, 1, prec);
    const MPArray w = linalg::forwardsolve(transpose(u), rhs);
    const double quad = reduce(ReduceOp::SquareSum, w);
    return 0.5 * quad + 0.5 * log_det +
           0.5 * static_cast<double>(n) * std::log(2.0 * M_PI);
}

MleResult matern_mle(const MPArray& z, const MPArray& distances, Precision prec,
                     double init_log_range, double init_log_sigma2,
                     const NelderMeadConfig& config) {
    const auto t0 = Clock::now();
    auto objective = [&](const std::vector<double>& pars) {
        const double range = std::exp(pars[0]);
        const double sigma2 = std::exp(pars[1]);
        const MPArray cov =
            matern_cov(distances, MaternParams{0.5, range, sigma2}, prec);
        return gaussian_nll(z, cov, prec);
    };
    const NelderMeadResult fit =
        nelder_mead(objective, {init_log_range, init_log_sigma2}, config);
    MleResult res;
    res.range_hat = std::exp(fit.x[0]);
    res.sigma2_hat = std::exp(fit.x[1]);
    res.nu = 0.5;
    res.nll = fit.value;
    res.iterations = fit.iterations;
    res.elapsed_seconds = seconds_since(t0);
    return res;
}

namespace {

// Shared MALA state: the factorizations the proposal and accept ratio need.
struct MalaState {
    MPArray sigma;
    MPArray sigma_inv;
    MPArray pre;       // M
    MPArray step_mat;  // h * M
    MPArray step_inv;  // (h M)^-1
    MPArray step_chol_t;  // t(chol(h M))
    MPArray mu;
    double h;
};

MalaState build_mala_state(const GaussianTarget& target, const MalaConfig& config,
                           Precision prec) {
    MalaState st{
        target.sigma.converted(prec),
        MPArray{},
        config.preconditioner.converted(prec),
        MPArray{},
        MPArray{},
        MPArray{},
        MPArray::from_doubles(target.mu.to_doubles(), target.mu.size(), 1, prec),
        config.step_size,
    };
    st.sigma_inv = linalg::solve(st.sigma);
    st.step_mat = ew_scalar(BinaryOp::Mul, st.pre, config.step_size);
    st.step_inv = linalg::solve(st.step_mat);
    st.step_chol_t = transpose(linalg::chol(st.step_mat));
    return st;
}

// x - t * M * Sigma^-1 * (x - mu)
MPArray mala_step(const MalaState& st, const MPArray& x, double t) {
    const MPArray centered = ew_binary(BinaryOp::Sub, x, st.mu);
    const MPArray drift =
        linalg::matmul(st.pre, linalg::matmul(st.sigma_inv, centered));
    return ew_binary(BinaryOp::Sub, x, ew_scalar(BinaryOp::Mul, drift, t));
}

double mala_target_logdensity(const MalaState& st, const MPArray& x) {
    const MPArray centered = ew_binary(BinaryOp::Sub, x, st.mu);
    return -0.5 * quad_form(st.sigma_inv, centered);
}

double mala_ratio(const MalaState& st, const MPArray& z, const MPArray& z_prop) {
    const double p_prop = mala_target_logdensity(st, z_prop);
    const double p_curr = mala_target_logdensity(st, z);
    const MPArray r_curr =
        ew_binary(BinaryOp::Sub, z, mala_step(st, z_prop, 0.5 * st.h));
    const MPArray r_prop =
        ew_binary(BinaryOp::Sub, z_prop, mala_step(st, z, 0.5 * st.h));
    const double q_curr = -0.5 * quad_form(st.step_inv, r_curr);
    const double q_prop = -0.5 * quad_form(st.step_inv, r_prop);
    return p_prop - p_curr + q_curr - q_prop;
}

}  // namespace

MalaResult mala_run(const GaussianTarget& target, const MalaConfig& config,
                    Precision prec) {
    if (config.step_size <= 0.0) throw InvalidParam("mala_run: step size must be > 0");
    const auto t0 = Clock::now();
    const std::size_t n = target.mu.size();
    const MalaState st = build_mala_state(target, config, prec);

    Rng rng(config.seed);
    std::vector<double> z0(n);
    for (auto& v : z0) v = rng.uniform();
    MPArray z = column(z0, prec);

    MalaResult res;
    res.trace = MPArray::zeros_matrix(n, config.iterations, Precision::Double);
    int accepted = 0;
    for (int it = 0; it < config.iterations; ++it) {
        std::vector<double> eps(n);
        for (auto& e : eps) e = rng.normal();
        const MPArray noise = linalg::matmul(st.step_chol_t, column(eps, prec));
        const MPArray z_prop =
            ew_binary(BinaryOp::Add, mala_step(st, z, 0.5 * st.h), noise);
        if (it == 0) res.first_proposal = z_prop.to_doubles();

        const double log_ratio = mala_ratio(st, z, z_prop);
        if (rng.uniform() < std::exp(std::min(0.0, log_ratio))) {
            z = z_prop;
            ++accepted;
        }
        for (std::size_t i = 0; i < n; ++i)
            res.trace.set(i, static_cast<std::size_t>(it), z.at_linear(i));
    }
    res.accept_rate =
        static_cast<double>(accepted) / static_cast<double>(config.iterations);
    res.elapsed_seconds = seconds_since(t0);
    return res;
}

double mala_log_ratio(const GaussianTarget& target, const MalaConfig& config,
                      Precision prec, const std::vector<double>& current,
                      const std::vector<double>& proposal) {
    const MalaState st = build_mala_state(target, config, prec);
    return mala_ratio(st, column(current, prec), column(proposal, prec));
}

PcaResult pca_eof(const MPArray& data, std::size_t k, Precision prec) {
    if (!data.is_matrix()) throw NotAMatrix("pca_eof: data");
    const std::size_t t = data.rows();
    const std::size_t n = data.cols();
    if (k < 1 || k > std::min(t, n)) {
        throw InvalidParam("pca_eof: k must lie in [1, min(t, n)]");
    }
    const auto t0 = Clock::now();
    const MPArray x = data.precision() == prec ? data : data.converted(prec);
    const linalg::SvdResult s =
        linalg::svd(x, static_cast<long>(k), static_cast<long>(k));

    double total = 0.0;
    for (std::size_t i = 0; i < s.d.size(); ++i) {
        const double d = s.d.at_linear(i);
        total += d * d;
    }
    PcaResult res;
    res.pct_var.resize(k);
    for (std::size_t i = 0; i < k; ++i) {
        const double d = s.d.at_linear(i);
        res.pct_var[i] = 100.0 * d * d / total;
    }
    res.eofs = s.v;
    res.scores = MPArray::zeros_matrix(t, k, prec);
    for (std::size_t j = 0; j < k; ++j) {
        const double d = s.d.at_linear(j);
        for (std::size_t i = 0; i < t; ++i) res.scores.set(i, j, s.u.get(i, j) * d);
    }
    res.elapsed_seconds = seconds_since(t0);
    return res;
}

MPArray sign_align(const MPArray& eofs, const MPArray& reference) {
    if (eofs.rows() != reference.rows() || eofs.cols() != reference.cols()) {
        throw ShapeMismatch("sign_align: shapes differ");
    }
    MPArray out = MPArray::zeros_matrix(eofs.rows(), eofs.cols(), eofs.precision());
    for (std::size_t j = 0; j < eofs.cols(); ++j) {
        double dot = 0.0;
        for (std::size_t i = 0; i < eofs.rows(); ++i)
            dot += eofs.get(i, j) * reference.get(i, j);
        const double sign = dot < 0.0 ? -1.0 : 1.0;
        for (std::size_t i = 0; i < eofs.rows(); ++i)
            out.set(i, j, sign * eofs.get(i, j));
    }
    return out;
}

MPArray laplace_mode(const MPArray& q, const std::vector<int>& y, double beta,
                     double tol, int max_iter) {
    const std::size_t n = q.rows();
    if (y.size() != n) throw ShapeMismatch("laplace_mode: y length mismatch");
    const Precision prec = q.precision();
    std::vector<double> x0(n, 0.0);
    for (int iter = 0; iter < max_iter; ++iter) {
        std::vector<double> g1(n), g2(n), rhs(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double p = logistic(beta * x0[i]);
            g1[i] = beta * y[i] - beta * p;
            g2[i] = -beta * beta * p * (1.0 - p);
            rhs[i] = g1[i] - x0[i] * g2[i];
        }
        MPArray a = q.converted(prec);
        for (std::size_t i = 0; i < n; ++i) a.set(i, i, q.get(i, i) - g2[i]);
        const MPArray x_arr = linalg::solve(a, column(rhs, prec));
        double msq = 0.0;
        std::vector<double> x(n);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = x_arr.at_linear(i);
            const double d = x[i] - x0[i];
            msq += d * d;
        }
        msq /= static_cast<double>(n);
        x0 = std::move(x);
        if (msq < tol) return column(x0, prec);
    }
    throw NoConvergence("laplace_mode: no convergence after " +
                        std::to_string(max_iter) + " iterations");
}

double laplace_log_posterior(double alpha, const MPArray& distances,
                             const std::vector<int>& y, Precision prec,
                             double sigma, double beta) {
    if (alpha <= 0.0) throw InvalidParam("laplace_log_posterior: alpha must be > 0");
    const std::size_t n = distances.rows();
    const MPArray cov = exp_cov(distances, sigma, alpha, prec);
    const MPArray q = linalg::solve(cov);
    const MPArray x0 = laplace_mode(q, y, beta);

    MPArray h = q.converted(prec);
    for (std::size_t i = 0; i < n; ++i) {
        const double p = logistic(beta * x0.at_linear(i));
        h.set(i, i, q.get(i, i) + beta * beta * p * (1.0 - p));
    }
    const MPArray chol_q = linalg::chol(q);
    const MPArray chol_h = linalg::chol(h);
    double logdet_q = 0.0, logdet_h = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        logdet_q += std::log(chol_q.get(i, i));
        logdet_h += std::log(chol_h.get(i, i));
    }
    logdet_q *= 2.0;
    logdet_h *= 2.0;

    MPArray x0_col = MPArray::from_doubles(x0.to_doubles(), n, 1, prec);
    const MPArray ux = linalg::matmul(chol_q, x0_col);
    const double quad = reduce(ReduceOp::SquareSum, ux);

    double loglik = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = beta * x0.at_linear(i);
        loglik += t * y[i] - log1p_exp(t);
    }
    return loglik + 0.5 * logdet_q - 0.5 * quad - 0.5 * logdet_h;
}

double simpson(const std::vector<double>& values, double spacing) {
    const std::size_t m = values.size();
    if (m < 3 || m % 2 == 0) {
        throw InvalidParam("simpson: need an odd number of points >= 3");
    }
    double acc = values.front() + values.back();
    for (std::size_t i = 1; i + 1 < m; ++i) acc += values[i] * (i % 2 ? 4.0 : 2.0);
    return acc * spacing / 3.0;
}

PosteriorGrid posterior_grid(const MPArray& distances, const std::vector<int>& y,
                             Precision prec, std::size_t grid_size) {
    if (grid_size < 3 || grid_size % 2 == 0) {
        throw InvalidParam("posterior_grid: grid size must be odd and >= 3");
    }
    const auto t0 = Clock::now();
    PosteriorGrid res;
    res.alpha.resize(grid_size);
    const double lo = 0.05, hi = 0.95;
    const double h = (hi - lo) / static_cast<double>(grid_size - 1);
    std::vector<double> lpost(grid_size);
    for (std::size_t i = 0; i < grid_size; ++i) {
        res.alpha[i] = lo + h * static_cast<double>(i);
        lpost[i] = laplace_log_posterior(res.alpha[i], distances, y, prec);
    }
    double mean = 0.0;
    for (double v : lpost) mean += v;
    mean /= static_cast<double>(grid_size);
    std::vector<double> density(grid_size);
    for (std::size_t i = 0; i < grid_size; ++i)
        density[i] = std::exp(lpost[i] - mean);
    const double z = simpson(density, h);
    res.posterior.resize(grid_size);
    for (std::size_t i = 0; i < grid_size; ++i) res.posterior[i] = density[i] / z;
    res.elapsed_seconds = seconds_since(t0);
    return res;
}

LaplaceData laplace_gen_data(std::size_t n, double alpha_true, double sigma_true,
                             double beta_true, std::uint64_t seed) {
    LaplaceData out;
    out.distances = chain_distances(n);
    const MPArray cov = exp_cov(out.distances, sigma_true, alpha_true);
    Rng rng(seed);
    const MPArray x = sample_gp(cov, rng);
    out.y.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.y[i] = rng.bernoulli(logistic(beta_true * x.at_linear(i)));
    }
    return out;
}

}  // namespace mpnum::stats
