#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "dfd/common.hpp"
#include "dfd/manifest.hpp"
#include "dfd/metrics.hpp"

namespace dfd {

/// Per-video embedding vectors keyed by video_id, all the same dimension.
struct EmbeddingTable {
    std::map<std::string, std::vector<double>> by_video;
    std::size_t dimension = 0;

    const std::vector<double>& get(const std::string& video_id) const {
        auto it = by_video.find(video_id);
        if (it == by_video.end()) fail("embeddings: no vector for video '" + video_id + "'");
        return it->second;
    }
};

/// Enrollment model: the arithmetic mean of the given embedding vectors.
inline std::vector<double> enroll(const std::vector<std::vector<double>>& embeddings) {
    require(!embeddings.empty(), "enroll: empty embedding list");
    const std::size_t dim = embeddings.front().size();
    std::vector<double> model(dim, 0.0);
    for (const auto& e : embeddings) {
        require(e.size() == dim, "enroll: dimension mismatch");
        for (std::size_t j = 0; j < dim; ++j) model[j] += e[j];
    }
    for (double& v : model) v /= static_cast<double>(embeddings.size());
    return model;
}

/// Cosine similarity in [-1, 1]; higher = better identity match.
inline double cosine_score(const std::vector<double>& model, const std::vector<double>& probe) {
    require(model.size() == probe.size(), "cosine_score: dimension mismatch");
    double mp = 0.0, mm = 0.0, pp = 0.0;
    for (std::size_t j = 0; j < model.size(); ++j) {
        mp += model[j] * probe[j];
        mm += model[j] * model[j];
        pp += probe[j] * probe[j];
    }
    require(mm > 0.0 && pp > 0.0, "cosine_score: zero-norm vector");
    return mp / (std::sqrt(mm) * std::sqrt(pp));
}

namespace detail {

struct SubjectVideos {
    std::vector<std::string> enrolled;  // lexicographically first enroll_count ids
    std::vector<std::string> probes;    // the remaining genuine ids, sorted
};

// Deterministic enrollment/probe partition of the genuine videos.
inline std::map<std::string, SubjectVideos> partition_genuine(const Manifest& manifest,
                                                              int enroll_count) {
    require(enroll_count >= 1, "enrollment: enroll_count must be >= 1");
    std::map<std::string, std::vector<std::string>> genuine_ids;
    for (const auto& e : manifest.entries)
        if (e.label == Label::genuine) genuine_ids[e.claimed_subject].push_back(e.video_id);

    std::map<std::string, SubjectVideos> out;
    for (auto& [subject, ids] : genuine_ids) {
        require(ids.size() > static_cast<std::size_t>(enroll_count),
                "enrollment: subject '" + subject + "' has " + std::to_string(ids.size()) +
                    " genuine videos, needs more than " + std::to_string(enroll_count));
        std::sort(ids.begin(), ids.end());
        SubjectVideos sv;
        sv.enrolled.assign(ids.begin(), ids.begin() + enroll_count);
        sv.probes.assign(ids.begin() + enroll_count, ids.end());
        out.emplace(subject, std::move(sv));
    }
    require(!out.empty(), "enrollment: manifest has no genuine videos");
    return out;
}

inline std::map<std::string, std::vector<double>> enrollment_models(
    const std::map<std::string, SubjectVideos>& partition, const EmbeddingTable& table) {
    std::map<std::string, std::vector<double>> models;
    for (const auto& [subject, sv] : partition) {
        std::vector<std::vector<double>> vecs;
        vecs.reserve(sv.enrolled.size());
        for (const auto& id : sv.enrolled) vecs.push_back(table.get(id));
        std::vector<double> model = enroll(vecs);
        double norm = 0.0;
        for (double v : model) norm += v * v;
        require(norm > 0.0, "enrollment: zero-norm model for subject '" + subject + "'");
        models.emplace(subject, std::move(model));
    }
    return models;
}

}  // namespace detail

/// Licit scenario: per subject, the enroll_count lexicographically first
/// genuine videos form the model; the subject's remaining genuine videos are
/// genuine probes, every other subject's remaining genuine videos are
/// zero-effort impostor probes.
inline ScoreSet run_licit(const Manifest& manifest, const EmbeddingTable& table,
                          int enroll_count = 2) {
    const auto partition = detail::partition_genuine(manifest, enroll_count);
    const auto models = detail::enrollment_models(partition, table);

    ScoreSet set;
    set.context = ScoreContext::licit;
    for (const auto& [subject, model] : models) {
        for (const auto& probe_id : partition.at(subject).probes)
            set.records.push_back({probe_id, subject, TrialType::genuine,
                                   cosine_score(model, table.get(probe_id))});
        for (const auto& [other, sv] : partition) {
            if (other == subject) continue;
            for (const auto& probe_id : sv.probes)
                set.records.push_back({probe_id, subject, TrialType::impostor,
                                       cosine_score(model, table.get(probe_id))});
        }
    }
    return set;
}

/// Tampered scenario: every deepfake video with the requested label probes
/// the licit enrollment model of its claimed subject.
inline ScoreSet run_tampered(const Manifest& manifest, const EmbeddingTable& table, Label label,
                             int enroll_count = 2) {
    require(label != Label::genuine, "run_tampered: label must be a deepfake label");
    const auto partition = detail::partition_genuine(manifest, enroll_count);
    const auto models = detail::enrollment_models(partition, table);

    ScoreSet set;
    set.context = ScoreContext::tampered;
    for (const auto& e : manifest.entries) {
        if (e.label != label) continue;
        auto it = models.find(e.claimed_subject);
        if (it == models.end())
            fail("run_tampered: claimed_subject '" + e.claimed_subject + "' of video '" +
                 e.video_id + "' has no enrollment model");
        set.records.push_back({e.video_id, e.claimed_subject, TrialType::tampered,
                               cosine_score(it->second, table.get(e.video_id))});
    }
    require(!set.records.empty(),
            std::string("run_tampered: no deepfake entries with label ") + to_string(label));
    return set;
}

}  // namespace dfd
