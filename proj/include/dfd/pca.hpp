#pragma once

#include <cmath>
#include <vector>

#include "dfd/common.hpp"
#include "dfd/linalg.hpp"

namespace dfd {

/// Principal component basis of a training sample, eigenvalue-descending,
/// with the minimal component count reaching the retained variance fraction.
struct PcaModel {
    std::vector<double> mean;        // d
    Mat components;                  // k x d, orthonormal rows
    std::vector<double> eigenvalues; // k, non-increasing, clamped at 0
    double retained_fraction = 1.0;

    std::size_t k() const { return components.rows; }
    std::size_t d() const { return components.cols; }

    std::vector<double> transform(const std::vector<double>& x) const {
        require(x.size() == d(), "pca_transform: dimension mismatch");
        std::vector<double> centered(x);
        for (std::size_t j = 0; j < d(); ++j) centered[j] -= mean[j];
        std::vector<double> z(k(), 0.0);
        for (std::size_t i = 0; i < k(); ++i) z[i] = dot(components.row(i), centered.data(), d());
        return z;
    }

    std::vector<double> inverse_transform(const std::vector<double>& z) const {
        require(z.size() == k(), "pca inverse_transform: dimension mismatch");
        std::vector<double> x(mean);
        for (std::size_t i = 0; i < k(); ++i) {
            const double* c = components.row(i);
            for (std::size_t j = 0; j < d(); ++j) x[j] += z[i] * c[j];
        }
        return x;
    }
};

/// Mean-centered eigendecomposition of the sample covariance (divisor n-1).
/// Keeps the smallest k with cumulative eigenvalue fraction >= retained;
/// each component's sign is fixed so its largest-magnitude entry is positive.
inline PcaModel fit_pca(const Mat& X, double retained) {
    require(X.rows >= 2, "fit_pca: need at least 2 samples");
    require(X.cols >= 1, "fit_pca: need at least 1 dimension");
    require(retained > 0.0 && retained <= 1.0, "fit_pca: retained must be in (0,1]");
    for (double v : X.v)
        require(std::isfinite(v), "fit_pca: non-finite input");

    const std::size_t n = X.rows, d = X.cols;
    PcaModel model;
    model.retained_fraction = retained;
    model.mean.assign(d, 0.0);
    for (std::size_t r = 0; r < n; ++r) {
        const double* row = X.row(r);
        for (std::size_t j = 0; j < d; ++j) model.mean[j] += row[j];
    }
    for (double& m : model.mean) m /= static_cast<double>(n);

    Mat centered(n, d);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t j = 0; j < d; ++j) centered.at(r, j) = X.at(r, j) - model.mean[j];

    // Upper triangle of (centered^T centered) / (n - 1), mirrored after.
    Mat cov(d, d);
    for (std::size_t r = 0; r < n; ++r) {
        const double* row = centered.row(r);
        for (std::size_t i = 0; i < d; ++i) {
            const double a = row[i];
            if (a == 0.0) continue;
            double* out = cov.row(i);
            for (std::size_t j = i; j < d; ++j) out[j] += a * row[j];
        }
    }
    const double inv = 1.0 / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i; j < d; ++j) {
            cov.at(i, j) *= inv;
            cov.at(j, i) = cov.at(i, j);
        }

    EigenResult eig = symmetric_eigen(cov);
    for (double& v : eig.values) v = std::max(v, 0.0);

    double total = 0.0;
    for (double v : eig.values) total += v;
    std::size_t k = 1;
    if (total > 0.0) {
        double cumulative = 0.0;
        for (k = 0; k < d;) {
            cumulative += eig.values[k];
            ++k;
            if (cumulative / total >= retained) break;
        }
    }

    model.eigenvalues.assign(eig.values.begin(), eig.values.begin() + k);
    model.components = Mat(k, d);
    for (std::size_t i = 0; i < k; ++i) {
        const double* src = eig.vectors.row(i);
        std::size_t arg_max = 0;
        for (std::size_t j = 1; j < d; ++j)
            if (std::fabs(src[j]) > std::fabs(src[arg_max])) arg_max = j;
        const double sign = src[arg_max] < 0.0 ? -1.0 : 1.0;
        for (std::size_t j = 0; j < d; ++j) model.components.at(i, j) = sign * src[j];
    }
    return model;
}

inline std::vector<double> pca_transform(const PcaModel& model, const std::vector<double>& x) {
    return model.transform(x);
}

}  // namespace dfd
