#include "mpnum/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <thread>
#include <vector>

#include "mpnum/errors.hpp"

namespace mpnum::linalg {

namespace {

int g_threads = 1;

template <typename T>
std::vector<T> widen(const MPArray& a) {
    std::vector<T> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        out[i] = static_cast<T>(a.at_linear(i));
    return out;
}

template <typename T>
void store(MPArray& out, const std::vector<T>& buf) {
    for (std::size_t i = 0; i < buf.size(); ++i)
        out.set_linear(i, static_cast<double>(buf[i]));
}

void require_matrix(const MPArray& a, const char* what) {
    if (!a.is_matrix()) throw NotAMatrix(std::string(what) + ": input is not a matrix");
}

// Splits [0, n) into contiguous column ranges and runs fn on each; the
// per-column work is identical for any thread count.
template <typename Fn>
void parallel_columns(std::size_t n, Fn fn) {
    const int threads = std::min<int>(g_threads, static_cast<int>(n));
    if (threads <= 1) {
        for (std::size_t j = 0; j < n; ++j) fn(j);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    const std::size_t chunk = (n + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
        const std::size_t lo = t * chunk;
        const std::size_t hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &fn] {
            for (std::size_t j = lo; j < hi; ++j) fn(j);
        });
    }
    for (auto& th : pool) th.join();
}

// c (m x n) = op(a) * op(b); buffers are column-major.
template <typename T>
void gemm_kernel(const T* a, std::size_t a_rows, bool trans_a, const T* b,
                 std::size_t b_rows, bool trans_b, T* c, std::size_t m,
                 std::size_t n, std::size_t k, T alpha, T beta) {
    auto ea = [&](std::size_t i, std::size_t l) {
        return trans_a ? a[i * a_rows + l] : a[l * a_rows + i];
    };
    auto eb = [&](std::size_t l, std::size_t j) {
        return trans_b ? b[j + l * b_rows] : b[l + j * b_rows];
    };
    parallel_columns(n, [&](std::size_t j) {
        for (std::size_t i = 0; i < m; ++i) {
            T acc = 0;
            for (std::size_t l = 0; l < k; ++l) acc += ea(i, l) * eb(l, j);
            T& out = c[j * m + i];
            out = alpha * acc + (beta == T(0) ? T(0) : beta * out);
        }
    });
}

// Specialised path for plain column-major multiply: axpy over columns of a.
template <typename T>
void matmul_kernel(const T* a, const T* b, T* c, std::size_t m, std::size_t n,
                   std::size_t k) {
    parallel_columns(n, [&](std::size_t j) {
        T* cj = c + j * m;
        std::fill(cj, cj + m, T(0));
        for (std::size_t l = 0; l < k; ++l) {
            const T bv = b[l + j * k];
            const T* al = a + l * m;
            for (std::size_t i = 0; i < m; ++i) cj[i] += al[i] * bv;
        }
    });
}

// c (n_a x n_b) = a^T b via column dot products; with b == a the
// accumulation order is symmetric in (i, j), so the result is exactly so.
template <typename T>
void crossprod_kernel(const T* a, std::size_t m, std::size_t n_a, const T* b,
                      std::size_t n_b, T* c) {
    parallel_columns(n_b, [&](std::size_t j) {
        const T* bj = b + j * m;
        for (std::size_t i = 0; i < n_a; ++i) {
            const T* ai = a + i * m;
            T acc = 0;
            for (std::size_t l = 0; l < m; ++l) acc += ai[l] * bj[l];
            c[j * n_a + i] = acc;
        }
    });
}

template <typename T>
void chol_kernel(std::vector<T>& u, std::size_t n) {
    // Up-looking by columns: u holds the input on entry, U on exit.
    for (std::size_t j = 0; j < n; ++j) {
        T* uj = u.data() + j * n;
        for (std::size_t i = 0; i < j; ++i) {
            const T* ui = u.data() + i * n;
            T acc = uj[i];
            for (std::size_t k = 0; k < i; ++k) acc -= ui[k] * uj[k];
            uj[i] = acc / ui[i];
        }
        T d = uj[j];
        for (std::size_t k = 0; k < j; ++k) d -= uj[k] * uj[k];
        if (!(d > T(0))) throw NotPositiveDefinite(static_cast<int>(j));
        uj[j] = std::sqrt(d);
        for (std::size_t i = j + 1; i < n; ++i) uj[i] = T(0);
    }
}

// Solves op(tri) * x = b in place for every column of b.
template <typename T>
void tri_solve_kernel(const T* tri, std::size_t n, bool upper, bool trans, T* b,
                      std::size_t ncols) {
    auto coef = [&](std::size_t i, std::size_t k) {
        return trans ? tri[i * n + k] : tri[k * n + i];
    };
    const bool effective_lower = (upper == trans);
    for (std::size_t i = 0; i < n; ++i) {
        if (coef(i, i) == T(0)) {
            throw SingularMatrix("triangular solve: zero diagonal at index " +
                                 std::to_string(i));
        }
    }
    parallel_columns(ncols, [&](std::size_t c) {
        T* x = b + c * n;
        if (effective_lower) {
            for (std::size_t i = 0; i < n; ++i) {
                T acc = x[i];
                for (std::size_t k = 0; k < i; ++k) acc -= coef(i, k) * x[k];
                x[i] = acc / coef(i, i);
            }
        } else {
            for (std::size_t i = n; i-- > 0;) {
                T acc = x[i];
                for (std::size_t k = i + 1; k < n; ++k) acc -= coef(i, k) * x[k];
                x[i] = acc / coef(i, i);
            }
        }
    });
}

// LU with partial pivoting; a is overwritten, perm holds row swaps.
template <typename T>
void lu_kernel(std::vector<T>& a, std::size_t n, std::vector<std::size_t>& perm) {
    perm.resize(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    for (std::size_t j = 0; j < n; ++j) {
        std::size_t piv = j;
        T best = std::fabs(a[j * n + j]);
        for (std::size_t i = j + 1; i < n; ++i) {
            const T v = std::fabs(a[j * n + i]);
            if (v > best) {
                best = v;
                piv = i;
            }
        }
        if (best == T(0)) {
            throw SingularMatrix("solve: zero pivot at column " + std::to_string(j));
        }
        if (piv != j) {
            std::swap(perm[j], perm[piv]);
            for (std::size_t c = 0; c < n; ++c)
                std::swap(a[c * n + j], a[c * n + piv]);
        }
        const T d = a[j * n + j];
        for (std::size_t i = j + 1; i < n; ++i) a[j * n + i] /= d;
        for (std::size_t c = j + 1; c < n; ++c) {
            const T mult = a[c * n + j];
            if (mult == T(0)) continue;
            for (std::size_t i = j + 1; i < n; ++i)
                a[c * n + i] -= a[j * n + i] * mult;
        }
    }
}

template <typename T>
int jacobi_svd_kernel(std::vector<T>& w, std::size_t m, std::size_t n,
                      std::vector<T>& v) {
    v.assign(n * n, T(0));
    for (std::size_t i = 0; i < n; ++i) v[i * n + i] = T(1);
    const T eps = sizeof(T) == 4 ? T(0x1p-24) : T(0x1p-53);
    const T thresh = T(10) * eps;
    // Columns whose squared norm falls to rounding-noise level relative to the
    // whole matrix are numerically zero; rotating them never converges because
    // their direction is noise. The Frobenius norm is rotation-invariant, so
    // the cutoff can be fixed up front.
    T frob2 = 0;
    for (const T& x : w) frob2 += x * x;
    const T negligible = frob2 * (T(m) * eps) * (T(m) * eps);
    const int max_sweeps = 30;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        bool rotated = false;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                T* wp = w.data() + p * m;
                T* wq = w.data() + q * m;
                T app = 0, aqq = 0, apq = 0;
                for (std::size_t i = 0; i < m; ++i) {
                    app += wp[i] * wp[i];
                    aqq += wq[i] * wq[i];
                    apq += wp[i] * wq[i];
                }
                if (app <= negligible || aqq <= negligible) continue;
                if (std::fabs(apq) <= thresh * std::sqrt(app) * std::sqrt(aqq))
                    continue;
                rotated = true;
                const T zeta = (aqq - app) / (T(2) * apq);
                const T t = (zeta >= T(0) ? T(1) : T(-1)) /
                            (std::fabs(zeta) + std::sqrt(T(1) + zeta * zeta));
                const T c = T(1) / std::sqrt(T(1) + t * t);
                const T s = c * t;
                for (std::size_t i = 0; i < m; ++i) {
                    const T xp = wp[i];
                    const T xq = wq[i];
                    wp[i] = c * xp - s * xq;
                    wq[i] = s * xp + c * xq;
                }
                T* vp = v.data() + p * n;
                T* vq = v.data() + q * n;
                for (std::size_t i = 0; i < n; ++i) {
                    const T xp = vp[i];
                    const T xq = vq[i];
                    vp[i] = c * xp - s * xq;
                    vq[i] = s * xp + c * xq;
                }
            }
        }
        if (!rotated) return sweep + 1;
    }
    return -1;
}

Precision output_precision(const MPArray& a, const MPArray& b) {
    return promote(a.precision(), b.precision());
}

template <typename T>
MPArray matmul_impl(const MPArray& a, const MPArray& b, Precision out_prec) {
    const auto wa = widen<T>(a);
    const auto wb = widen<T>(b);
    std::vector<T> wc(a.rows() * b.cols());
    matmul_kernel(wa.data(), wb.data(), wc.data(), a.rows(), b.cols(), a.cols());
    MPArray out = MPArray::zeros_matrix(a.rows(), b.cols(), out_prec, a.placement());
    store(out, wc);
    return out;
}

template <typename T>
MPArray crossprod_impl(const MPArray& a, const MPArray& b, Precision out_prec) {
    const auto wa = widen<T>(a);
    const auto wb = widen<T>(b);
    std::vector<T> wc(a.cols() * b.cols());
    crossprod_kernel(wa.data(), a.rows(), a.cols(), wb.data(), b.cols(), wc.data());
    MPArray out = MPArray::zeros_matrix(a.cols(), b.cols(), out_prec, a.placement());
    store(out, wc);
    return out;
}

}  // namespace

void set_num_threads(int threads) { g_threads = std::max(1, threads); }

int num_threads() { return g_threads; }

MPArray matmul(const MPArray& a, const MPArray& b) {
    require_cpu(a, "matmul");
    require_cpu(b, "matmul");
    require_matrix(a, "matmul");
    require_matrix(b, "matmul");
    if (a.cols() != b.rows()) {
        throw ShapeMismatch("matmul: inner dimensions " + std::to_string(a.cols()) +
                            " and " + std::to_string(b.rows()) + " differ");
    }
    const Precision out_prec = output_precision(a, b);
    if (compute_precision(out_prec) == Precision::Single)
        return matmul_impl<float>(a, b, out_prec);
    return matmul_impl<double>(a, b, out_prec);
}

MPArray crossprod(const MPArray& a) { return crossprod(a, a); }

MPArray crossprod(const MPArray& a, const MPArray& b) {
    require_cpu(a, "crossprod");
    require_cpu(b, "crossprod");
    require_matrix(a, "crossprod");
    require_matrix(b, "crossprod");
    if (a.rows() != b.rows()) {
        throw ShapeMismatch("crossprod: row counts " + std::to_string(a.rows()) +
                            " and " + std::to_string(b.rows()) + " differ");
    }
    const Precision out_prec = output_precision(a, b);
    if (compute_precision(out_prec) == Precision::Single)
        return crossprod_impl<float>(a, b, out_prec);
    return crossprod_impl<double>(a, b, out_prec);
}

void gemm(const MPArray& a, const MPArray& b, MPArray& c, const GemmParams& params) {
    require_cpu(a, "gemm");
    require_cpu(b, "gemm");
    require_cpu(c, "gemm");
    require_matrix(a, "gemm");
    require_matrix(b, "gemm");
    require_matrix(c, "gemm");
    const std::size_t m = params.trans_a ? a.cols() : a.rows();
    const std::size_t k = params.trans_a ? a.rows() : a.cols();
    const std::size_t kb = params.trans_b ? b.cols() : b.rows();
    const std::size_t n = params.trans_b ? b.rows() : b.cols();
    if (k != kb || c.rows() != m || c.cols() != n) {
        throw ShapeMismatch("gemm: op(a) is " + std::to_string(m) + "x" +
                            std::to_string(k) + ", op(b) is " + std::to_string(kb) +
                            "x" + std::to_string(n) + ", c is " +
                            std::to_string(c.rows()) + "x" + std::to_string(c.cols()));
    }
    if (static_cast<int>(c.precision()) <
        static_cast<int>(output_precision(a, b))) {
        throw PrecisionMismatch(
            "gemm: accumulator precision " + precision_name(c.precision()) +
            " is below the promoted input precision " +
            precision_name(output_precision(a, b)));
    }
    if (compute_precision(c.precision()) == Precision::Single) {
        const auto wa = widen<float>(a);
        const auto wb = widen<float>(b);
        auto wc = widen<float>(c);
        gemm_kernel(wa.data(), a.rows(), params.trans_a, wb.data(), b.rows(),
                    params.trans_b, wc.data(), m, n, k,
                    static_cast<float>(params.alpha),
                    static_cast<float>(params.beta));
        store(c, wc);
    } else {
        const auto wa = widen<double>(a);
        const auto wb = widen<double>(b);
        auto wc = widen<double>(c);
        gemm_kernel(wa.data(), a.rows(), params.trans_a, wb.data(), b.rows(),
                    params.trans_b, wc.data(), m, n, k, params.alpha, params.beta);
        store(c, wc);
    }
}

MPArray chol(const MPArray& a) {
    require_cpu(a, "chol");
    require_matrix(a, "chol");
    if (a.rows() != a.cols()) {
        throw ShapeMismatch("chol: matrix is " + std::to_string(a.rows()) + "x" +
                            std::to_string(a.cols()) + ", not square");
    }
    const std::size_t n = a.rows();
    MPArray out = MPArray::zeros_matrix(n, n, a.precision(), a.placement());
    if (compute_precision(a.precision()) == Precision::Single) {
        auto w = widen<float>(a);
        chol_kernel(w, n);
        store(out, w);
    } else {
        auto w = widen<double>(a);
        chol_kernel(w, n);
        store(out, w);
    }
    return out;
}

namespace {

template <typename T>
MPArray chol2inv_impl(const MPArray& u) {
    const std::size_t n = u.rows();
    auto wu = widen<T>(u);
    for (std::size_t i = 0; i < n; ++i) {
        if (wu[i * n + i] == T(0)) {
            throw SingularMatrix("chol2inv: zero diagonal at index " +
                                 std::to_string(i));
        }
    }
    // x = u^-1 (solve u * x = I), then (u^T u)^-1 = x x^T.
    std::vector<T> x(n * n, T(0));
    for (std::size_t i = 0; i < n; ++i) x[i * n + i] = T(1);
    tri_solve_kernel(wu.data(), n, /*upper=*/true, /*trans=*/false, x.data(), n);
    std::vector<T> inv(n * n, T(0));
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i <= j; ++i) {
            T acc = 0;
            for (std::size_t k = 0; k < n; ++k) acc += x[k * n + i] * x[k * n + j];
            inv[j * n + i] = acc;
            inv[i * n + j] = acc;  // exact symmetry by construction
        }
    }
    MPArray out = MPArray::zeros_matrix(n, n, u.precision(), u.placement());
    store(out, inv);
    return out;
}

template <typename T>
MPArray tri_solve_dispatch(const MPArray& tri, const MPArray& b, bool upper,
                           Precision out_prec) {
    const std::size_t n = tri.rows();
    const auto wt = widen<T>(tri);
    auto wb = widen<T>(b);
    tri_solve_kernel(wt.data(), n, upper, /*trans=*/false, wb.data(), b.cols());
    MPArray out = b.is_matrix()
                      ? MPArray::zeros_matrix(b.rows(), b.cols(), out_prec)
                      : MPArray::zeros(b.size(), out_prec);
    store(out, wb);
    return out;
}

MPArray tri_solve(const MPArray& tri, const MPArray& b, bool upper,
                  const char* what) {
    require_cpu(tri, what);
    require_cpu(b, what);
    require_matrix(tri, what);
    if (tri.rows() != tri.cols()) {
        throw ShapeMismatch(std::string(what) + ": triangular matrix is not square");
    }
    if (b.rows() != tri.rows()) {
        throw ShapeMismatch(std::string(what) + ": rhs has " +
                            std::to_string(b.rows()) + " rows, expected " +
                            std::to_string(tri.rows()));
    }
    const Precision out_prec = promote(tri.precision(), b.precision());
    if (compute_precision(out_prec) == Precision::Single)
        return tri_solve_dispatch<float>(tri, b, upper, out_prec);
    return tri_solve_dispatch<double>(tri, b, upper, out_prec);
}

bool exactly_symmetric(const MPArray& a) {
    for (std::size_t j = 0; j < a.cols(); ++j)
        for (std::size_t i = 0; i < j; ++i)
            if (a.get(i, j) != a.get(j, i)) return false;
    return true;
}

template <typename T>
MPArray lu_solve_impl(const MPArray& a, const MPArray& b, Precision out_prec) {
    const std::size_t n = a.rows();
    auto wa = widen<T>(a);
    std::vector<std::size_t> perm;
    lu_kernel(wa, n, perm);
    const auto wb = widen<T>(b);
    std::vector<T> wx(b.size());
    const std::size_t ncols = b.cols();
    for (std::size_t c = 0; c < ncols; ++c)
        for (std::size_t i = 0; i < n; ++i) wx[c * n + i] = wb[c * n + perm[i]];
    // L has unit diagonal; temporarily set it for the substitution.
    std::vector<T> saved(n);
    for (std::size_t i = 0; i < n; ++i) {
        saved[i] = wa[i * n + i];
        wa[i * n + i] = T(1);
    }
    tri_solve_kernel(wa.data(), n, /*upper=*/false, /*trans=*/false, wx.data(),
                     ncols);
    for (std::size_t i = 0; i < n; ++i) wa[i * n + i] = saved[i];
    tri_solve_kernel(wa.data(), n, /*upper=*/true, /*trans=*/false, wx.data(),
                     ncols);
    MPArray out = b.is_matrix()
                      ? MPArray::zeros_matrix(b.rows(), b.cols(), out_prec)
                      : MPArray::zeros(b.size(), out_prec);
    store(out, wx);
    return out;
}

}  // namespace

MPArray chol2inv(const MPArray& u) {
    require_cpu(u, "chol2inv");
    require_matrix(u, "chol2inv");
    if (u.rows() != u.cols()) throw ShapeMismatch("chol2inv: matrix is not square");
    if (compute_precision(u.precision()) == Precision::Single)
        return chol2inv_impl<float>(u);
    return chol2inv_impl<double>(u);
}

MPArray forwardsolve(const MPArray& l, const MPArray& b) {
    return tri_solve(l, b, /*upper=*/false, "forwardsolve");
}

MPArray backsolve(const MPArray& u, const MPArray& b) {
    return tri_solve(u, b, /*upper=*/true, "backsolve");
}

void trsm(const MPArray& a, MPArray& b, Side side, bool upper, bool trans,
          double alpha) {
    require_cpu(a, "trsm");
    require_cpu(b, "trsm");
    require_matrix(a, "trsm");
    require_matrix(b, "trsm");
    if (a.rows() != a.cols()) throw ShapeMismatch("trsm: a is not square");
    const std::size_t n = a.rows();
    if (side == Side::Left ? b.rows() != n : b.cols() != n) {
        throw ShapeMismatch("trsm: b is " + std::to_string(b.rows()) + "x" +
                            std::to_string(b.cols()) + ", incompatible with " +
                            std::to_string(n) + "x" + std::to_string(n) +
                            (side == Side::Left ? " on the left" : " on the right"));
    }
    const bool single = compute_precision(b.precision()) == Precision::Single;
    auto run = [&](auto tag) {
        using T = decltype(tag);
        const auto wa = widen<T>(a);
        if (side == Side::Left) {
            auto wb = widen<T>(b);
            const T al = static_cast<T>(alpha);
            for (auto& x : wb) x *= al;
            tri_solve_kernel(wa.data(), n, upper, trans, wb.data(), b.cols());
            store(b, wb);
        } else {
            // x * op(a) = alpha b  <=>  op(a)^T x^T = alpha b^T
            const std::size_t r = b.rows(), c = b.cols();
            const auto wb = widen<T>(b);
            std::vector<T> bt(r * c);
            for (std::size_t j = 0; j < c; ++j)
                for (std::size_t i = 0; i < r; ++i) bt[i * c + j] = wb[j * r + i];
            const T al = static_cast<T>(alpha);
            for (auto& x : bt) x *= al;
            tri_solve_kernel(wa.data(), n, upper, !trans, bt.data(), r);
            std::vector<T> res(r * c);
            for (std::size_t j = 0; j < c; ++j)
                for (std::size_t i = 0; i < r; ++i) res[j * r + i] = bt[i * c + j];
            store(b, res);
        }
    };
    if (single)
        run(float{});
    else
        run(double{});
}

MPArray solve(const MPArray& a) {
    require_matrix(a, "solve");
    MPArray identity = MPArray::zeros_matrix(a.rows(), a.cols(), a.precision(),
                                             a.placement());
    for (std::size_t i = 0; i < a.rows(); ++i) identity.set(i, i, 1.0);
    return solve(a, identity);
}

MPArray solve(const MPArray& a, const MPArray& b) {
    require_cpu(a, "solve");
    require_cpu(b, "solve");
    require_matrix(a, "solve");
    if (a.rows() != a.cols()) throw ShapeMismatch("solve: matrix is not square");
    if (b.rows() != a.rows()) {
        throw ShapeMismatch("solve: rhs has " + std::to_string(b.rows()) +
                            " rows, expected " + std::to_string(a.rows()));
    }
    const Precision out_prec = promote(a.precision(), b.precision());
    if (exactly_symmetric(a)) {
        try {
            const MPArray u = chol(a.precision() == out_prec ? a
                                                             : a.converted(out_prec));
            const MPArray y = forwardsolve(transpose(u), b);
            return backsolve(u, y);
        } catch (const NotPositiveDefinite&) {
            // fall through to LU
        }
    }
    if (compute_precision(out_prec) == Precision::Single)
        return lu_solve_impl<float>(a, b, out_prec);
    return lu_solve_impl<double>(a, b, out_prec);
}

namespace {

template <typename T>
SvdResult svd_impl(const MPArray& a, long nu, long nv) {
    const std::size_t rows = a.rows();
    const std::size_t cols = a.cols();
    const bool flipped = rows < cols;  // run Jacobi with m >= n
    const std::size_t m = flipped ? cols : rows;
    const std::size_t n = flipped ? rows : cols;

    std::vector<T> w(m * n);
    for (std::size_t j = 0; j < cols; ++j) {
        for (std::size_t i = 0; i < rows; ++i) {
            const T v = static_cast<T>(a.get(i, j));
            if (flipped)
                w[i * m + j] = v;
            else
                w[j * m + i] = v;
        }
    }
    std::vector<T> vmat;
    if (jacobi_svd_kernel(w, m, n, vmat) < 0) {
        throw NoConvergence("svd: one-sided Jacobi did not converge in 30 sweeps");
    }

    std::vector<double> norms(n);
    for (std::size_t j = 0; j < n; ++j) {
        double acc = 0;
        for (std::size_t i = 0; i < m; ++i) {
            const double x = static_cast<double>(w[j * m + i]);
            acc += x * x;
        }
        norms[j] = std::sqrt(acc);
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return norms[x] > norms[y]; });

    const Precision prec = a.precision();
    SvdResult res;
    res.d = MPArray::zeros(n, prec, a.placement());
    for (std::size_t j = 0; j < n; ++j) res.d.set_linear(j, norms[order[j]]);

    // Left vectors of the (possibly transposed) problem: normalized columns of w.
    auto left_col = [&](std::size_t rank, std::size_t i) -> double {
        const std::size_t j = order[rank];
        if (norms[j] == 0.0) return 0.0;
        return static_cast<double>(w[j * m + i]) / norms[j];
    };
    auto right_col = [&](std::size_t rank, std::size_t i) -> double {
        const std::size_t j = order[rank];
        return static_cast<double>(vmat[j * n + i]);
    };

    const std::size_t u_cols = static_cast<std::size_t>(nu);
    const std::size_t v_cols = static_cast<std::size_t>(nv);
    res.u = MPArray::zeros_matrix(rows, u_cols, prec, a.placement());
    res.v = MPArray::zeros_matrix(cols, v_cols, prec, a.placement());
    if (!flipped) {
        for (std::size_t j = 0; j < u_cols; ++j)
            for (std::size_t i = 0; i < rows; ++i) res.u.set(i, j, left_col(j, i));
        for (std::size_t j = 0; j < v_cols; ++j)
            for (std::size_t i = 0; i < cols; ++i) res.v.set(i, j, right_col(j, i));
    } else {
        // a^T = U' D V'^T  =>  a = V' D U'^T
        for (std::size_t j = 0; j < u_cols; ++j)
            for (std::size_t i = 0; i < rows; ++i) res.u.set(i, j, right_col(j, i));
        for (std::size_t j = 0; j < v_cols; ++j)
            for (std::size_t i = 0; i < cols; ++i) res.v.set(i, j, left_col(j, i));
    }
    return res;
}

}  // namespace

SvdResult svd(const MPArray& a, long nu, long nv) {
    require_cpu(a, "svd");
    require_matrix(a, "svd");
    const long k = static_cast<long>(std::min(a.rows(), a.cols()));
    if (nu < -1 || nu > k || nv < -1 || nv > k) {
        throw InvalidParam("svd: nu/nv must lie in [-1, " + std::to_string(k) + "]");
    }
    if (nu < 0) nu = k;
    if (nv < 0) nv = k;
    if (compute_precision(a.precision()) == Precision::Single)
        return svd_impl<float>(a, nu, nv);
    return svd_impl<double>(a, nu, nv);
}

}  // namespace mpnum::linalg
