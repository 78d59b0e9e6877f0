#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "dfd/common.hpp"

namespace dfd {

enum class TrialType { genuine, impostor, tampered };

inline const char* to_string(TrialType t) {
    switch (t) {
        case TrialType::genuine: return "genuine";
        case TrialType::impostor: return "impostor";
        default: return "tampered";
    }
}

struct ScoreRecord {
    std::string probe_video_id;
    std::string claim_subject;
    TrialType trial_type = TrialType::genuine;
    double score = 0.0;  // higher = more genuine / better identity match
};

enum class ScoreContext { licit, tampered, detection };

struct ScoreSet {
    std::vector<ScoreRecord> records;
    ScoreContext context = ScoreContext::detection;

    void check() const {
        for (const auto& r : records) {
            require(std::isfinite(r.score), "ScoreSet: non-finite score for " + r.probe_video_id);
            if (context == ScoreContext::licit)
                require(r.trial_type != TrialType::tampered,
                        "ScoreSet: tampered record in licit context");
            if (context == ScoreContext::tampered)
                require(r.trial_type == TrialType::tampered,
                        "ScoreSet: non-tampered record in tampered context");
        }
    }
};

struct EvalReport {
    double eer = 0.0;
    double theta_eer = 0.0;
    double frr_at_far10 = 0.0;
    std::vector<std::pair<double, double>> det_points;  // (far, frr), far ascending
    std::size_t n_genuine = 0;
    std::size_t n_impostor = 0;  // impostor/attack trials
};

struct VulnReport {
    double licit_eer = 0.0;
    double theta_licit = 0.0;
    double tampered_far = 0.0;
    std::size_t n_tampered = 0;
};

namespace detail {

// Sorted genuine and non-genuine score arrays; the substrate of every
// threshold sweep.
struct SplitScores {
    std::vector<double> genuine;
    std::vector<double> attack;  // impostor or tampered

    static SplitScores from(const ScoreSet& set) {
        SplitScores s;
        for (const auto& r : set.records)
            (r.trial_type == TrialType::genuine ? s.genuine : s.attack).push_back(r.score);
        require(!s.genuine.empty(), "metrics: no genuine records");
        require(!s.attack.empty(), "metrics: no impostor/attack records");
        std::sort(s.genuine.begin(), s.genuine.end());
        std::sort(s.attack.begin(), s.attack.end());
        return s;
    }

    // FAR = fraction of non-genuine scores >= theta.
    double far(double theta) const {
        const auto it = std::lower_bound(attack.begin(), attack.end(), theta);
        return static_cast<double>(attack.end() - it) / static_cast<double>(attack.size());
    }

    // FRR = fraction of genuine scores < theta.
    double frr(double theta) const {
        const auto it = std::lower_bound(genuine.begin(), genuine.end(), theta);
        return static_cast<double>(it - genuine.begin()) / static_cast<double>(genuine.size());
    }

    // Sorted unique scores with -inf/+inf sentinels.
    std::vector<double> candidate_thresholds() const {
        std::vector<double> c;
        c.reserve(genuine.size() + attack.size() + 2);
        c.push_back(-std::numeric_limits<double>::infinity());
        std::merge(genuine.begin(), genuine.end(), attack.begin(), attack.end(),
                   std::back_inserter(c));
        c.erase(std::unique(c.begin(), c.end()), c.end());
        c.push_back(std::numeric_limits<double>::infinity());
        return c;
    }
};

}  // namespace detail

/// FAR/FRR of a score set at a threshold: non-genuine accepted at score >=
/// theta, genuine rejected at score < theta.
inline std::pair<double, double> far_frr(const ScoreSet& scores, double theta) {
    const auto s = detail::SplitScores::from(scores);
    return {s.far(theta), s.frr(theta)};
}

struct EerResult {
    double eer = 0.0;
    double theta = 0.0;
};

/// Equal error rate over the candidate thresholds (sorted unique scores plus
/// sentinels). The FAR/FRR curves are linearly interpolated between
/// candidates to locate the crossing; where they touch exactly over a range
/// of candidates, theta is that range's midpoint.
inline EerResult eer(const ScoreSet& scores) {
    const auto s = detail::SplitScores::from(scores);
    const std::vector<double> thetas = s.candidate_thresholds();
    const std::size_t m = thetas.size();
    std::vector<double> far(m), frr(m);
    for (std::size_t i = 0; i < m; ++i) {
        far[i] = s.far(thetas[i]);
        frr[i] = s.frr(thetas[i]);
    }
    // far - frr is non-increasing, 1 at -inf, -1 at +inf.
    std::size_t j = 0;
    while (far[j] - frr[j] > 0.0) ++j;

    EerResult result;
    if (far[j] == frr[j]) {
        std::size_t l = j;
        while (l + 1 < m && far[l + 1] == frr[l + 1]) ++l;
        result.eer = far[j];
        result.theta = l == j ? thetas[j] : 0.5 * (thetas[j] + thetas[l]);
    } else {
        const double d0 = far[j - 1] - frr[j - 1];
        const double d1 = far[j] - frr[j];
        const double t = d0 / (d0 - d1);
        result.eer = far[j - 1] + t * (far[j] - far[j - 1]);
        result.theta = std::isinf(thetas[j]) ? thetas[j - 1] + 1.0
                                             : thetas[j - 1] + t * (thetas[j] - thetas[j - 1]);
    }
    return result;
}

/// FRR at the smallest candidate threshold whose FAR <= target_far.
inline double frr_at_far(const ScoreSet& scores, double target_far) {
    require(target_far > 0.0 && target_far <= 1.0, "frr_at_far: target must be in (0,1]");
    const auto s = detail::SplitScores::from(scores);
    for (double theta : s.candidate_thresholds()) {
        if (s.far(theta) <= target_far) return s.frr(theta);
    }
    return 1.0;  // unreachable: FAR at +inf is 0
}

/// DET operating points: (FAR, FRR) at every candidate threshold, FAR
/// ascending, duplicate points removed.
inline std::vector<std::pair<double, double>> det_curve(const ScoreSet& scores) {
    const auto s = detail::SplitScores::from(scores);
    const std::vector<double> thetas = s.candidate_thresholds();
    std::vector<std::pair<double, double>> points;
    points.reserve(thetas.size());
    for (std::size_t i = thetas.size(); i-- > 0;) {
        const std::pair<double, double> p{s.far(thetas[i]), s.frr(thetas[i])};
        if (points.empty() || points.back() != p) points.push_back(p);
    }
    return points;
}

/// Threshold-transfer vulnerability: the fraction of tampered probes
/// accepted at the licit scenario's EER threshold.
inline VulnReport vulnerability(const ScoreSet& licit, const ScoreSet& tampered) {
    require(!tampered.records.empty(), "vulnerability: no tampered records");
    tampered.check();
    const EerResult licit_eer = eer(licit);
    std::size_t accepted = 0;
    for (const auto& r : tampered.records)
        if (r.score >= licit_eer.theta) ++accepted;
    VulnReport report;
    report.licit_eer = licit_eer.eer;
    report.theta_licit = licit_eer.theta;
    report.tampered_far = static_cast<double>(accepted) / static_cast<double>(tampered.records.size());
    report.n_tampered = tampered.records.size();
    return report;
}

/// Full detection/verification report at FAR target 10%.
inline EvalReport evaluate_scores(const ScoreSet& scores) {
    EvalReport report;
    const EerResult e = eer(scores);
    report.eer = e.eer;
    report.theta_eer = e.theta;
    report.frr_at_far10 = frr_at_far(scores, 0.10);
    report.det_points = det_curve(scores);
    for (const auto& r : scores.records)
        (r.trial_type == TrialType::genuine ? report.n_genuine : report.n_impostor) += 1;
    return report;
}

}  // namespace dfd
