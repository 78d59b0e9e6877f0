#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "dfd/common.hpp"

namespace dfd {

/// Dense row-major matrix of doubles.
struct Mat {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> v;

    Mat() = default;
    Mat(std::size_t r, std::size_t c) : rows(r), cols(c), v(r * c, 0.0) {}

    double& at(std::size_t r, std::size_t c) { return v[r * cols + c]; }
    double at(std::size_t r, std::size_t c) const { return v[r * cols + c]; }
    double* row(std::size_t r) { return v.data() + r * cols; }
    const double* row(std::size_t r) const { return v.data() + r * cols; }
};

inline double dot(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
}

struct EigenResult {
    std::vector<double> values;  // descending
    Mat vectors;                 // row i is the eigenvector of values[i]
};

namespace detail {

// Householder reduction of a symmetric matrix to tridiagonal form followed
// by the implicit-shift QL iteration (EISPACK tred2/tql2 lineage). V is
// n x n row-major; on return its columns are the eigenvectors of the
// ascending eigenvalues in d.
inline void tred2(std::size_t n, std::vector<double>& V, std::vector<double>& d,
                  std::vector<double>& e) {
    for (std::size_t j = 0; j < n; ++j) d[j] = V[(n - 1) * n + j];

    for (std::size_t i = n - 1; i > 0; --i) {
        double scale = 0.0, h = 0.0;
        for (std::size_t k = 0; k < i; ++k) scale += std::fabs(d[k]);
        if (scale == 0.0) {
            e[i] = d[i - 1];
            for (std::size_t j = 0; j < i; ++j) {
                d[j] = V[(i - 1) * n + j];
                V[i * n + j] = 0.0;
                V[j * n + i] = 0.0;
            }
        } else {
            for (std::size_t k = 0; k < i; ++k) {
                d[k] /= scale;
                h += d[k] * d[k];
            }
            double f = d[i - 1];
            double g = std::sqrt(h);
            if (f > 0.0) g = -g;
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            for (std::size_t j = 0; j < i; ++j) e[j] = 0.0;
            for (std::size_t j = 0; j < i; ++j) {
                f = d[j];
                V[j * n + i] = f;
                g = e[j] + V[j * n + j] * f;
                for (std::size_t k = j + 1; k < i; ++k) {
                    g += V[k * n + j] * d[k];
                    e[k] += V[k * n + j] * f;
                }
                e[j] = g;
            }
            f = 0.0;
            for (std::size_t j = 0; j < i; ++j) {
                e[j] /= h;
                f += e[j] * d[j];
            }
            const double hh = f / (h + h);
            for (std::size_t j = 0; j < i; ++j) e[j] -= hh * d[j];
            for (std::size_t j = 0; j < i; ++j) {
                f = d[j];
                g = e[j];
                for (std::size_t k = j; k < i; ++k) V[k * n + j] -= f * e[k] + g * d[k];
                d[j] = V[(i - 1) * n + j];
                V[i * n + j] = 0.0;
            }
        }
        d[i] = h;
    }

    for (std::size_t i = 0; i + 1 < n; ++i) {
        V[(n - 1) * n + i] = V[i * n + i];
        V[i * n + i] = 1.0;
        const double h = d[i + 1];
        if (h != 0.0) {
            for (std::size_t k = 0; k <= i; ++k) d[k] = V[k * n + i + 1] / h;
            for (std::size_t j = 0; j <= i; ++j) {
                double g = 0.0;
                for (std::size_t k = 0; k <= i; ++k) g += V[k * n + i + 1] * V[k * n + j];
                for (std::size_t k = 0; k <= i; ++k) V[k * n + j] -= g * d[k];
            }
        }
        for (std::size_t k = 0; k <= i; ++k) V[k * n + i + 1] = 0.0;
    }
    for (std::size_t j = 0; j < n; ++j) {
        d[j] = V[(n - 1) * n + j];
        V[(n - 1) * n + j] = 0.0;
    }
    V[(n - 1) * n + (n - 1)] = 1.0;
    e[0] = 0.0;
}

inline void tql2(std::size_t n, std::vector<double>& V, std::vector<double>& d,
                 std::vector<double>& e) {
    for (std::size_t i = 1; i < n; ++i) e[i - 1] = e[i];
    e[n - 1] = 0.0;

    double f = 0.0, tst1 = 0.0;
    const double eps = std::ldexp(1.0, -52);
    for (std::size_t l = 0; l < n; ++l) {
        tst1 = std::max(tst1, std::fabs(d[l]) + std::fabs(e[l]));
        std::size_t m = l;
        while (m < n && std::fabs(e[m]) > eps * tst1) ++m;
        if (m > l) {
            int iter = 0;
            do {
                ++iter;
                double g = d[l];
                double p = (d[l + 1] - g) / (2.0 * e[l]);
                double r = std::hypot(p, 1.0);
                if (p < 0.0) r = -r;
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                const double dl1 = d[l + 1];
                double h = g - d[l];
                for (std::size_t i = l + 2; i < n; ++i) d[i] -= h;
                f += h;
                p = d[m];
                double c = 1.0, c2 = c, c3 = c;
                const double el1 = e[l + 1];
                double s = 0.0, s2 = 0.0;
                for (std::size_t i = m; i-- > l;) {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = std::hypot(p, e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    for (std::size_t k = 0; k < n; ++k) {
                        h = V[k * n + i + 1];
                        V[k * n + i + 1] = s * V[k * n + i] + c * h;
                        V[k * n + i] = c * V[k * n + i] - s * h;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
            } while (std::fabs(e[l]) > eps * tst1 && iter < 64);
        }
        d[l] += f;
        e[l] = 0.0;
    }
}

}  // namespace detail

/// Eigendecomposition of a symmetric matrix, eigenvalues descending,
/// eigenvectors as orthonormal rows.
inline EigenResult symmetric_eigen(const Mat& A) {
    require(A.rows == A.cols && A.rows >= 1, "symmetric_eigen: square matrix required");
    const std::size_t n = A.rows;
    std::vector<double> V = A.v;
    std::vector<double> d(n, 0.0), e(n, 0.0);
    if (n == 1) {
        return {{A.at(0, 0)}, [] {
                    Mat m(1, 1);
                    m.at(0, 0) = 1.0;
                    return m;
                }()};
    }
    detail::tred2(n, V, d, e);
    detail::tql2(n, V, d, e);

    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return d[a] > d[b]; });

    EigenResult res;
    res.values.resize(n);
    res.vectors = Mat(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        res.values[i] = d[order[i]];
        for (std::size_t k = 0; k < n; ++k) res.vectors.at(i, k) = V[k * n + order[i]];
    }
    return res;
}

/// Solves A x = b by Gaussian elimination with partial pivoting.
inline std::vector<double> solve_linear(Mat A, std::vector<double> b) {
    require(A.rows == A.cols && A.rows == b.size(), "solve_linear: shape mismatch");
    const std::size_t n = A.rows;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::fabs(A.at(r, col)) > std::fabs(A.at(pivot, col))) pivot = r;
        if (A.at(pivot, col) == 0.0) fail("solve_linear: singular matrix");
        if (pivot != col) {
            for (std::size_t c = col; c < n; ++c) std::swap(A.at(pivot, c), A.at(col, c));
            std::swap(b[pivot], b[col]);
        }
        const double inv = 1.0 / A.at(col, col);
        for (std::size_t r = col + 1; r < n; ++r) {
            const double factor = A.at(r, col) * inv;
            if (factor == 0.0) continue;
            for (std::size_t c = col; c < n; ++c) A.at(r, c) -= factor * A.at(col, c);
            b[r] -= factor * b[col];
        }
    }
    std::vector<double> x(n, 0.0);
    for (std::size_t r = n; r-- > 0;) {
        double s = b[r];
        for (std::size_t c = r + 1; c < n; ++c) s -= A.at(r, c) * x[c];
        x[r] = s / A.at(r, r);
    }
    return x;
}

}  // namespace dfd
