#pragma once

#include <vector>

#include "mpnum/array.hpp"
#include "mpnum/covariance.hpp"
#include "mpnum/optimize.hpp"
#include "mpnum/rng.hpp"

namespace mpnum::stats {

// ---- Gaussian process likelihood -----------------------------------------

// Jitter added to the diagonal at reduced precision before factorization;
// escalates x10 on failure up to `max_jitter`, then rethrows.
struct JitterPolicy {
    double initial = 1e-6;
    double max_jitter = 1e-3;
};

// z = L * eps with L = t(chol(cov)) and eps standard normal from rng.
MPArray sample_gp(const MPArray& cov, Rng& rng);

// Negative Gaussian log-likelihood of z under the given covariance,
// factorized at `prec` through the Cholesky path.
double gaussian_nll(const MPArray& z, const MPArray& cov, Precision prec,
                    const JitterPolicy& jitter = {});

// ---- Matern maximum likelihood -------------------------------------------

struct MleResult {
    double sigma2_hat;
    double range_hat;
    double nu;  // fixed at 0.5
    double nll;
    int iterations;
    double elapsed_seconds;
};

// Minimizes gaussian_nll over (log a, log sigma2) with nu fixed at 0.5.
MleResult matern_mle(const MPArray& z, const MPArray& distances, Precision prec,
                     double init_log_range, double init_log_sigma2,
                     const NelderMeadConfig& config = {200, 1e-4});

// ---- MALA ----------------------------------------------------------------

struct GaussianTarget {
    MPArray mu;     // n-vector
    MPArray sigma;  // n x n SPD covariance
};

struct MalaConfig {
    double step_size;       // h > 0
    MPArray preconditioner; // n x n SPD M
    int iterations;
    std::uint64_t seed;
};

struct MalaResult {
    MPArray trace;  // n x iterations, always double storage
    double accept_rate;
    double elapsed_seconds;
    std::vector<double> first_proposal;  // proposal of iteration 0
};

MalaResult mala_run(const GaussianTarget& target, const MalaConfig& config,
                    Precision prec);

// Log accept ratio p' - p + q - q' for a fixed (current, proposal) pair,
// computed through the same internals mala_run uses.
double mala_log_ratio(const GaussianTarget& target, const MalaConfig& config,
                      Precision prec, const std::vector<double>& current,
                      const std::vector<double>& proposal);

// ---- PCA / EOF -----------------------------------------------------------

struct PcaResult {
    MPArray eofs;               // n x k spatial modes (columns of V)
    MPArray scores;             // t x k temporal scores (U * diag(d))
    std::vector<double> pct_var;  // k entries; percentages over the full spectrum
    double elapsed_seconds;
};

PcaResult pca_eof(const MPArray& data, std::size_t k, Precision prec);

// Flips each column so its inner product with the reference column is >= 0.
MPArray sign_align(const MPArray& eofs, const MPArray& reference);

// ---- Laplace approximation ------------------------------------------------

// Mode of the latent conditional via fixed-point Newton iterations.
MPArray laplace_mode(const MPArray& q, const std::vector<int>& y, double beta,
                     double tol = 1e-12, int max_iter = 200);

// Log posterior contribution of one alpha grid point.
double laplace_log_posterior(double alpha, const MPArray& distances,
                             const std::vector<int>& y, Precision prec,
                             double sigma = 0.1, double beta = 10.0);

struct PosteriorGrid {
    std::vector<double> alpha;
    std::vector<double> posterior;  // Simpson-normalized density values
    double elapsed_seconds;
};

// 21-point (or any odd-size) grid over [0.05, 0.95], Simpson-normalized.
PosteriorGrid posterior_grid(const MPArray& distances, const std::vector<int>& y,
                             Precision prec, std::size_t grid_size = 21);

// Simpson quadrature over uniformly spaced values (odd count).
double simpson(const std::vector<double>& values, double spacing);

// Synthetic binary chain for the Laplace workload (latent GP + logit link).
struct LaplaceData {
    MPArray distances;
    std::vector<int> y;
};
LaplaceData laplace_gen_data(std::size_t n, double alpha_true, double sigma_true,
                             double beta_true, std::uint64_t seed);

}  // namespace mpnum::stats
