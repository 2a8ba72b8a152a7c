#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "aircast/errors.hpp"

namespace aircast {

/// Dense row-major matrix of doubles. Small and value-semantic; everything in
/// this project is at most a few hundred rows.
struct Mat {
    std::size_t rows = 0, cols = 0;
    std::vector<double> a;

    Mat() = default;
    Mat(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), a(r * c, fill) {}

    double& operator()(std::size_t r, std::size_t c) { return a[r * cols + c]; }
    double operator()(std::size_t r, std::size_t c) const { return a[r * cols + c]; }

    std::vector<double> row(std::size_t r) const {
        return std::vector<double>(a.begin() + static_cast<std::ptrdiff_t>(r * cols),
                                   a.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols));
    }
};

inline Mat gather_rows(const Mat& m, const std::vector<std::size_t>& idx) {
    Mat out(idx.size(), m.cols);
    for (std::size_t i = 0; i < idx.size(); ++i)
        for (std::size_t j = 0; j < m.cols; ++j) out(i, j) = m(idx[i], j);
    return out;
}

inline std::vector<double> gather(const std::vector<double>& v,
                                  const std::vector<std::size_t>& idx) {
    std::vector<double> out(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) out[i] = v[idx[i]];
    return out;
}

inline double dot(const std::vector<double>& x, const std::vector<double>& y) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

struct LeastSquaresResult {
    std::vector<double> coef;   // length = cols of the design matrix
    std::size_t rank = 0;
    double condition = 0.0;     // |R_00| / |R_{r-1,r-1}| from the pivoted QR
};

/// Least squares min ||A x - b|| via Householder QR with column pivoting.
/// Rank is decided against tol = 1e-10 * ||A||_F. When the design is rank
/// deficient and `require_full_rank` is set, throws RankDeficient; otherwise a
/// basic solution is returned (coefficients of non-pivot columns set to zero).
inline LeastSquaresResult least_squares(const Mat& A, const std::vector<double>& b,
                                        bool require_full_rank = true) {
    const std::size_t n = A.rows, m = A.cols;
    if (b.size() != n) throw DimensionMismatch("least_squares: rhs length mismatch");
    if (n == 0 || m == 0) throw DimensionMismatch("least_squares: empty system");

    Mat R = A;
    std::vector<double> y = b;
    std::vector<std::size_t> piv(m);
    for (std::size_t j = 0; j < m; ++j) piv[j] = j;

    double frob = 0.0;
    for (double v : R.a) frob += v * v;
    frob = std::sqrt(frob);
    const double tol = 1e-10 * frob;

    // Running squared norms of the trailing part of each column, used to pick pivots.
    std::vector<double> colnorm(m, 0.0);
    for (std::size_t j = 0; j < m; ++j)
        for (std::size_t i = 0; i < n; ++i) colnorm[j] += R(i, j) * R(i, j);

    const std::size_t kmax = std::min(n, m);
    std::size_t rank = 0;
    for (std::size_t k = 0; k < kmax; ++k) {
        // Pivot: bring the column with the largest remaining norm to position k.
        std::size_t best = k;
        for (std::size_t j = k + 1; j < m; ++j)
            if (colnorm[j] > colnorm[best]) best = j;
        if (best != k) {
            for (std::size_t i = 0; i < n; ++i) std::swap(R(i, k), R(i, best));
            std::swap(colnorm[k], colnorm[best]);
            std::swap(piv[k], piv[best]);
        }

        // Householder vector for column k (entries k..n-1), recomputing the norm
        // directly to avoid cancellation drift in the running update.
        double alpha = 0.0;
        for (std::size_t i = k; i < n; ++i) alpha += R(i, k) * R(i, k);
        alpha = std::sqrt(alpha);
        if (alpha <= tol) break;  // remaining block is numerically zero
        if (R(k, k) > 0) alpha = -alpha;

        std::vector<double> v(n - k);
        v[0] = R(k, k) - alpha;
        for (std::size_t i = k + 1; i < n; ++i) v[i - k] = R(i, k);
        double vnorm2 = 0.0;
        for (double t : v) vnorm2 += t * t;
        if (vnorm2 == 0.0) break;

        R(k, k) = alpha;
        for (std::size_t i = k + 1; i < n; ++i) R(i, k) = 0.0;

        for (std::size_t j = k + 1; j < m; ++j) {
            double s = 0.0;
            for (std::size_t i = k; i < n; ++i) s += v[i - k] * R(i, j);
            s = 2.0 * s / vnorm2;
            for (std::size_t i = k; i < n; ++i) R(i, j) -= s * v[i - k];
        }
        double s = 0.0;
        for (std::size_t i = k; i < n; ++i) s += v[i - k] * y[i];
        s = 2.0 * s / vnorm2;
        for (std::size_t i = k; i < n; ++i) y[i] -= s * v[i - k];

        for (std::size_t j = k + 1; j < m; ++j) colnorm[j] -= R(k, j) * R(k, j);
        ++rank;
    }

    if (rank < m && require_full_rank)
        throw RankDeficient("design matrix column rank " + std::to_string(rank) + " < " +
                            std::to_string(m));
    if (rank == 0) throw RankDeficient("design matrix is numerically zero");

    // Back substitution on the leading rank x rank triangle.
    std::vector<double> z(rank, 0.0);
    for (std::size_t ii = rank; ii-- > 0;) {
        double s = y[ii];
        for (std::size_t j = ii + 1; j < rank; ++j) s -= R(ii, j) * z[j];
        z[ii] = s / R(ii, ii);
    }

    LeastSquaresResult res;
    res.coef.assign(m, 0.0);
    for (std::size_t j = 0; j < rank; ++j) res.coef[piv[j]] = z[j];
    res.rank = rank;
    res.condition = std::fabs(R(0, 0)) / std::fabs(R(rank - 1, rank - 1));
    return res;
}

}  // namespace aircast
