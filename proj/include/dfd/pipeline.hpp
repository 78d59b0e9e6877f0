#pragma once

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "dfd/common.hpp"
#include "dfd/iqm.hpp"
#include "dfd/lda.hpp"
#include "dfd/pca.hpp"
#include "dfd/svm.hpp"

namespace dfd {

enum class PipelineKind { pixels_pca_lda, iqm_pca_lda, iqm_svm };

inline const char* to_string(PipelineKind k) {
    switch (k) {
        case PipelineKind::pixels_pca_lda: return "pixels_pca_lda";
        case PipelineKind::iqm_pca_lda: return "iqm_pca_lda";
        default: return "iqm_svm";
    }
}

inline PipelineKind pipeline_kind_from(const std::string& s) {
    if (s == "pixels_pca_lda") return PipelineKind::pixels_pca_lda;
    if (s == "iqm_pca_lda") return PipelineKind::iqm_pca_lda;
    if (s == "iqm_svm") return PipelineKind::iqm_svm;
    fail("unknown pipeline kind '" + s + "'");
}

inline constexpr double kDefaultRetainedPixels = 0.99;
inline constexpr double kDefaultRetainedIqm = 0.95;

inline double default_retained(PipelineKind kind) {
    return kind == PipelineKind::pixels_pca_lda ? kDefaultRetainedPixels : kDefaultRetainedIqm;
}

/// A trained detection pipeline: PCA+LDA stages or a standardized linear
/// SVM, with the feature schema version it was trained on.
struct PipelineModel {
    PipelineKind kind = PipelineKind::iqm_svm;
    int schema_version = kIqmSchemaVersion;
    std::string created = kVersion;  // deterministic provenance tag
    std::optional<PcaModel> pca;
    std::optional<LdaModel> lda;
    std::optional<SvmModel> svm;

    bool uses_iqm() const { return kind != PipelineKind::pixels_pca_lda; }

    std::size_t input_dimension() const {
        return svm ? svm->weights.size() : pca->d();
    }

    /// Per-frame score, higher = more genuine.
    double score_frame(const std::vector<double>& features) const {
        if (kind == PipelineKind::iqm_svm) return svm->score(features);
        return lda->score(pca->transform(features));
    }
};

struct TrainOptions {
    double retained = 0.0;  // 0 = pipeline default
    double svm_c = kSvmDefaultC;
    double svm_tolerance = kSvmDefaultTolerance;
};

/// Trains the stages of a pipeline on per-frame features. Labels:
/// true = genuine frame, false = attack frame.
inline PipelineModel train_pipeline(PipelineKind kind, const Mat& X,
                                    const std::vector<bool>& genuine,
                                    const TrainOptions& options = {}) {
    require(X.rows == genuine.size(), "train_pipeline: label count mismatch");
    require(X.rows >= 4, "train_pipeline: too few samples");
    if (kind != PipelineKind::pixels_pca_lda)
        require(X.cols == static_cast<std::size_t>(kIqmDimensions),
                "train_pipeline: feature schema mismatch, expected " +
                    std::to_string(kIqmDimensions) + " quality measures, got " +
                    std::to_string(X.cols));
    std::size_t n_genuine = 0;
    for (bool g : genuine) n_genuine += g ? 1 : 0;
    require(n_genuine >= 2 && X.rows - n_genuine >= 2,
            "train_pipeline: both genuine and attack samples required");

    PipelineModel model;
    model.kind = kind;
    model.schema_version = kIqmSchemaVersion;

    if (kind == PipelineKind::iqm_svm) {
        std::vector<int> y(X.rows);
        for (std::size_t i = 0; i < X.rows; ++i) y[i] = genuine[i] ? 1 : -1;
        model.svm = fit_svm(X, y, options.svm_c, options.svm_tolerance);
    } else {
        const double retained = options.retained > 0.0 ? options.retained : default_retained(kind);
        model.pca = fit_pca(X, retained);
        Mat projected(X.rows, model.pca->k());
        std::vector<double> x(X.cols);
        for (std::size_t r = 0; r < X.rows; ++r) {
            std::copy(X.row(r), X.row(r) + X.cols, x.begin());
            const std::vector<double> z = model.pca->transform(x);
            std::copy(z.begin(), z.end(), projected.row(r));
        }
        model.lda = fit_lda(projected, genuine);
    }
    return model;
}

/// Video-level score: the arithmetic mean of its frame scores.
inline double fuse_video_score(const std::vector<double>& frame_scores) {
    require(!frame_scores.empty(), "fuse_video_score: empty score list");
    double sum = 0.0;
    for (double s : frame_scores) {
        require(std::isfinite(s), "fuse_video_score: non-finite score");
        sum += s;
    }
    return sum / static_cast<double>(frame_scores.size());
}

namespace detail {

// Deterministic JSON emitter; every real is written with 17 significant
// digits so the file parses back bit-exactly.
struct JsonWriter {
    std::ostringstream out;
    bool first_in_scope = true;

    void comma() {
        if (!first_in_scope) out << ",";
        first_in_scope = false;
    }
    void open(const char* key) {
        comma();
        out << "\"" << key << "\":{";
        first_in_scope = true;
    }
    void close() {
        out << "}";
        first_in_scope = false;
    }
    void field(const char* key, const std::string& value) {
        comma();
        out << "\"" << key << "\":\"" << value << "\"";
    }
    void field(const char* key, double value) {
        comma();
        out << "\"" << key << "\":" << format_real(value);
    }
    void field(const char* key, long value) {
        comma();
        out << "\"" << key << "\":" << value;
    }
    void field(const char* key, const std::vector<double>& values) {
        comma();
        out << "\"" << key << "\":[";
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (i) out << ",";
            out << format_real(values[i]);
        }
        out << "]";
    }
};

inline std::vector<double> json_real_array(const nlohmann::json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_array()) fail(std::string("model JSON: missing array '") + key + "'");
    std::vector<double> v;
    v.reserve(j[key].size());
    for (const auto& x : j[key]) v.push_back(x.get<double>());
    return v;
}

}  // namespace detail

inline std::string model_to_json(const PipelineModel& model) {
    detail::JsonWriter w;
    w.out << "{";
    w.field("kind", std::string(to_string(model.kind)));
    w.field("schema_version", static_cast<long>(model.schema_version));
    w.field("created", model.created);
    if (model.pca) {
        w.open("pca");
        w.field("k", static_cast<long>(model.pca->k()));
        w.field("d", static_cast<long>(model.pca->d()));
        w.field("retained_fraction", model.pca->retained_fraction);
        w.field("mean", model.pca->mean);
        w.field("eigenvalues", model.pca->eigenvalues);
        w.field("components", model.pca->components.v);
        w.close();
    }
    if (model.lda) {
        w.open("lda");
        w.field("weights", model.lda->weights);
        w.field("polarity", model.lda->polarity);
        w.close();
    }
    if (model.svm) {
        w.open("svm");
        w.field("weights", model.svm->weights);
        w.field("bias", model.svm->bias);
        w.field("scaler_mean", model.svm->scaler_mean);
        w.field("scaler_std", model.svm->scaler_std);
        w.field("C", model.svm->C);
        w.field("tolerance", model.svm->tolerance);
        w.close();
    }
    w.out << "}\n";
    return w.out.str();
}

inline PipelineModel model_from_json(const std::string& text, const std::string& origin) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        fail(origin + ": invalid model JSON: " + e.what());
    }
    PipelineModel model;
    try {
        model.kind = pipeline_kind_from(j.at("kind").get<std::string>());
        model.schema_version = j.at("schema_version").get<int>();
        model.created = j.value("created", std::string(kVersion));
    } catch (const nlohmann::json::exception& e) {
        fail(origin + ": malformed model JSON: " + e.what());
    }
    if (model.schema_version != kIqmSchemaVersion)
        fail(origin + ": model schema_version " + std::to_string(model.schema_version) +
             " does not match this build's schema " + std::to_string(kIqmSchemaVersion));

    if (model.kind == PipelineKind::iqm_svm) {
        if (!j.contains("svm")) fail(origin + ": iqm_svm model lacks svm stage");
        const auto& s = j["svm"];
        SvmModel svm;
        svm.weights = detail::json_real_array(s, "weights");
        svm.bias = s.at("bias").get<double>();
        svm.scaler_mean = detail::json_real_array(s, "scaler_mean");
        svm.scaler_std = detail::json_real_array(s, "scaler_std");
        svm.C = s.at("C").get<double>();
        svm.tolerance = s.at("tolerance").get<double>();
        require(svm.weights.size() == svm.scaler_mean.size() &&
                    svm.weights.size() == svm.scaler_std.size(),
                origin + ": inconsistent svm stage dimensions");
        for (double sd : svm.scaler_std)
            require(sd > 0.0, origin + ": non-positive scaler_std entry");
        model.svm = std::move(svm);
    } else {
        if (!j.contains("pca") || !j.contains("lda"))
            fail(origin + ": pca_lda model lacks pca/lda stages");
        const auto& p = j["pca"];
        PcaModel pca;
        const auto k = p.at("k").get<std::size_t>();
        const auto d = p.at("d").get<std::size_t>();
        pca.retained_fraction = p.value("retained_fraction", 1.0);
        pca.mean = detail::json_real_array(p, "mean");
        pca.eigenvalues = detail::json_real_array(p, "eigenvalues");
        pca.components.rows = k;
        pca.components.cols = d;
        pca.components.v = detail::json_real_array(p, "components");
        require(pca.mean.size() == d && pca.components.v.size() == k * d &&
                    pca.eigenvalues.size() == k,
                origin + ": inconsistent pca stage dimensions");
        model.pca = std::move(pca);

        const auto& l = j["lda"];
        LdaModel lda;
        lda.weights = detail::json_real_array(l, "weights");
        lda.polarity = l.at("polarity").get<double>();
        require(lda.weights.size() == k, origin + ": lda weights do not match pca k");
        require(lda.polarity == 1.0 || lda.polarity == -1.0, origin + ": polarity must be +-1");
        model.lda = std::move(lda);
    }
    return model;
}

inline void save_model(const PipelineModel& model, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail(path + ": cannot open for writing");
    out << model_to_json(model);
    if (!out) fail(path + ": write failed");
}

inline PipelineModel load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(path + ": cannot open model file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return model_from_json(buf.str(), path);
}

}  // namespace dfd
