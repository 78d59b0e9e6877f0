#pragma once

#include <cmath>
#include <vector>

#include "dfd/common.hpp"
#include "dfd/linalg.hpp"

namespace dfd {

inline constexpr double kSvmDefaultC = 1.0;
inline constexpr double kSvmDefaultTolerance = 1e-4;
inline constexpr int kSvmPassLimit = 10000;

/// Linear soft-margin SVM with z-score standardization fitted on the
/// training data. Scores are w^T standardize(x) + b, higher = more genuine.
struct SvmModel {
    std::vector<double> weights;      // d, in standardized space
    double bias = 0.0;
    std::vector<double> scaler_mean;  // d
    std::vector<double> scaler_std;   // d, zero-variance features replaced by 1
    double C = kSvmDefaultC;
    double tolerance = kSvmDefaultTolerance;

    // Training diagnostics; not persisted.
    int passes = 0;
    bool converged = true;
    double final_kkt_violation = 0.0;
    std::vector<double> primal_history;  // primal objective after each pass

    double score(const std::vector<double>& x) const {
        require(x.size() == weights.size(), "svm_score: dimension mismatch");
        double s = bias;
        for (std::size_t j = 0; j < x.size(); ++j)
            s += weights[j] * (x[j] - scaler_mean[j]) / scaler_std[j];
        return s;
    }
};

namespace detail {

// Projected-gradient KKT violation of one dual variable (liblinear style).
inline double projected_gradient(double g, double alpha, double upper) {
    if (alpha <= 0.0) return std::min(g, 0.0);
    if (alpha >= upper) return std::max(g, 0.0);
    return g;
}

}  // namespace detail

/// Trains by dual coordinate ascent over the samples in their given order,
/// dual variables starting at 0, bias handled as a constant augmented
/// feature. Terminates when a full verification sweep with frozen weights
/// shows every KKT violation <= tolerance, or at the pass limit (reported
/// through the converged flag). Labels are +1 genuine / -1 attack.
inline SvmModel fit_svm(const Mat& X, const std::vector<int>& y, double C = kSvmDefaultC,
                        double tolerance = kSvmDefaultTolerance) {
    require(X.rows == y.size(), "fit_svm: label count mismatch");
    require(C > 0.0, "fit_svm: C must be positive");
    require(tolerance > 0.0, "fit_svm: tolerance must be positive");
    const std::size_t n = X.rows, d = X.cols;
    std::size_t n_pos = 0;
    for (int label : y) {
        require(label == 1 || label == -1, "fit_svm: labels must be +1/-1");
        n_pos += label == 1 ? 1 : 0;
    }
    require(n_pos >= 1 && n_pos < n, "fit_svm: both classes required");
    for (double v : X.v)
        require(std::isfinite(v), "fit_svm: non-finite feature");

    SvmModel model;
    model.C = C;
    model.tolerance = tolerance;

    // Z-score scaler (population moments). Numerically constant features
    // get unit scale so standardization is a no-op for them.
    model.scaler_mean.assign(d, 0.0);
    model.scaler_std.assign(d, 1.0);
    for (std::size_t r = 0; r < n; ++r) {
        const double* row = X.row(r);
        for (std::size_t j = 0; j < d; ++j) model.scaler_mean[j] += row[j];
    }
    for (double& m : model.scaler_mean) m /= static_cast<double>(n);
    for (std::size_t j = 0; j < d; ++j) {
        double var = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
            const double dev = X.at(r, j) - model.scaler_mean[j];
            var += dev * dev;
        }
        var /= static_cast<double>(n);
        const double m = model.scaler_mean[j];
        model.scaler_std[j] = var <= 1e-24 * (1.0 + m * m) ? 1.0 : std::sqrt(var);
    }

    // Standardized samples with the augmented constant-1 bias coordinate.
    Mat Z(n, d + 1);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t j = 0; j < d; ++j)
            Z.at(r, j) = (X.at(r, j) - model.scaler_mean[j]) / model.scaler_std[j];
        Z.at(r, d) = 1.0;
    }

    std::vector<double> q(n);  // squared norms
    for (std::size_t r = 0; r < n; ++r) q[r] = dot(Z.row(r), Z.row(r), d + 1);

    std::vector<double> alpha(n, 0.0);
    std::vector<double> w(d + 1, 0.0);

    const auto primal = [&] {
        double obj = 0.0;
        for (std::size_t j = 0; j < d; ++j) obj += w[j] * w[j];
        obj *= 0.5;
        for (std::size_t r = 0; r < n; ++r) {
            const double margin = 1.0 - y[r] * dot(w.data(), Z.row(r), d + 1);
            if (margin > 0.0) obj += C * margin;
        }
        return obj;
    };
    const auto max_violation = [&] {
        double worst = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
            const double g = y[r] * dot(w.data(), Z.row(r), d + 1) - 1.0;
            worst = std::max(worst, std::fabs(detail::projected_gradient(g, alpha[r], C)));
        }
        return worst;
    };

    model.converged = false;
    for (int pass = 0; pass < kSvmPassLimit; ++pass) {
        double pass_violation = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
            const double* z = Z.row(r);
            const double g = y[r] * dot(w.data(), z, d + 1) - 1.0;
            const double pg = detail::projected_gradient(g, alpha[r], C);
            pass_violation = std::max(pass_violation, std::fabs(pg));
            if (std::fabs(pg) > 1e-14) {
                const double updated = std::clamp(alpha[r] - g / q[r], 0.0, C);
                const double delta = (updated - alpha[r]) * y[r];
                if (delta != 0.0)
                    for (std::size_t j = 0; j <= d; ++j) w[j] += delta * z[j];
                alpha[r] = updated;
            }
        }
        model.passes = pass + 1;
        model.primal_history.push_back(primal());
        if (pass_violation <= tolerance && max_violation() <= tolerance) {
            model.converged = true;
            break;
        }
    }
    model.final_kkt_violation = max_violation();

    model.weights.assign(w.begin(), w.begin() + d);
    model.bias = w[d];
    return model;
}

inline double svm_score(const SvmModel& model, const std::vector<double>& x) {
    return model.score(x);
}

}  // namespace dfd
