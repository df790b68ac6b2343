#pragma once

#include "mpnum/array.hpp"

namespace mpnum::linalg {

struct SvdResult {
    MPArray d;  // singular values, descending
    MPArray u;  // rows x nu
    MPArray v;  // cols x nv
};

struct GemmParams {
    bool trans_a = false;
    bool trans_b = false;
    double alpha = 1.0;
    double beta = 0.0;
};

enum class Side { Left, Right };

// Threads used for deterministic column-parallel kernels (default 1).
void set_num_threads(int threads);
int num_threads();

MPArray matmul(const MPArray& a, const MPArray& b);

// crossprod(a) = a^T a, crossprod(a, b) = a^T b.
MPArray crossprod(const MPArray& a);
MPArray crossprod(const MPArray& a, const MPArray& b);

// c <- alpha * op(a) * op(b) + beta * c, in c's precision.
void gemm(const MPArray& a, const MPArray& b, MPArray& c, const GemmParams& params);

// Upper-triangular u with a = u^T u; lower triangle of the output is zero.
MPArray chol(const MPArray& a);

// (u^T u)^-1 for upper-triangular u; output is exactly symmetric.
MPArray chol2inv(const MPArray& u);

MPArray forwardsolve(const MPArray& l, const MPArray& b);
MPArray backsolve(const MPArray& u, const MPArray& b);

// op(a) * x = alpha * b (Left) or x * op(a) = alpha * b (Right);
// b is overwritten with x.
void trsm(const MPArray& a, MPArray& b, Side side, bool upper, bool trans,
          double alpha);

// LU solve with partial pivoting; SPD inputs take a Cholesky fast path.
MPArray solve(const MPArray& a);
MPArray solve(const MPArray& a, const MPArray& b);

// One-sided Jacobi SVD; nu/nv in [-1, min(m, n)], -1 meaning min(m, n).
SvdResult svd(const MPArray& a, long nu = -1, long nv = -1);

}  // namespace mpnum::linalg
