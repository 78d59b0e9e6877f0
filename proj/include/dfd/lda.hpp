#pragma once

#include <cmath>
#include <vector>

#include "dfd/common.hpp"
#include "dfd/linalg.hpp"

namespace dfd {

/// Two-class Fisher discriminant direction. Scores are polarity * (w^T x),
/// oriented so genuine training samples score higher than attacks.
struct LdaModel {
    std::vector<double> weights;
    double threshold_free_bias = 0.0;  // midpoint of the class mean scores, informational
    double polarity = 1.0;

    double score(const std::vector<double>& x) const {
        require(x.size() == weights.size(), "lda_score: dimension mismatch");
        return polarity * dot(weights.data(), x.data(), x.size());
    }
};

/// w = (S_w + lambda I)^-1 (mu_genuine - mu_attack), within-class scatter
/// S_w, ridge lambda = 1e-6 * trace(S_w) / k. Labels: true = genuine.
inline LdaModel fit_lda(const Mat& X, const std::vector<bool>& genuine) {
    require(X.rows == genuine.size(), "fit_lda: label count mismatch");
    const std::size_t n = X.rows, k = X.cols;
    std::size_t n_genuine = 0;
    for (bool g : genuine) n_genuine += g ? 1 : 0;
    const std::size_t n_attack = n - n_genuine;
    require(n_genuine >= 2 && n_attack >= 2, "fit_lda: each class needs at least 2 samples");

    std::vector<double> mu_g(k, 0.0), mu_a(k, 0.0);
    for (std::size_t r = 0; r < n; ++r) {
        const double* row = X.row(r);
        std::vector<double>& mu = genuine[r] ? mu_g : mu_a;
        for (std::size_t j = 0; j < k; ++j) mu[j] += row[j];
    }
    for (double& v : mu_g) v /= static_cast<double>(n_genuine);
    for (double& v : mu_a) v /= static_cast<double>(n_attack);

    Mat scatter(k, k);
    std::vector<double> dev(k);
    for (std::size_t r = 0; r < n; ++r) {
        const double* row = X.row(r);
        const std::vector<double>& mu = genuine[r] ? mu_g : mu_a;
        for (std::size_t j = 0; j < k; ++j) dev[j] = row[j] - mu[j];
        for (std::size_t i = 0; i < k; ++i) {
            if (dev[i] == 0.0) continue;
            double* out = scatter.row(i);
            for (std::size_t j = 0; j < k; ++j) out[j] += dev[i] * dev[j];
        }
    }

    double trace = 0.0;
    for (std::size_t i = 0; i < k; ++i) trace += scatter.at(i, i);

    std::vector<double> mu_diff(k);
    for (std::size_t j = 0; j < k; ++j) mu_diff[j] = mu_g[j] - mu_a[j];

    LdaModel model;
    if (trace == 0.0) {
        // Degenerate scatter (every sample equals its class mean).
        model.weights = mu_diff;
    } else {
        const double lambda = 1e-6 * trace / static_cast<double>(k);
        for (std::size_t i = 0; i < k; ++i) scatter.at(i, i) += lambda;
        model.weights = solve_linear(scatter, mu_diff);
    }

    bool all_zero = true;
    for (double w : model.weights)
        if (w != 0.0) all_zero = false;
    require(!all_zero, "fit_lda: class means coincide, no discriminant direction");

    const double score_g = dot(model.weights.data(), mu_g.data(), k);
    const double score_a = dot(model.weights.data(), mu_a.data(), k);
    model.polarity = score_g >= score_a ? 1.0 : -1.0;
    model.threshold_free_bias = model.polarity * 0.5 * (score_g + score_a);
    return model;
}

inline double lda_score(const LdaModel& model, const std::vector<double>& x) {
    return model.score(x);
}

}  // namespace dfd
