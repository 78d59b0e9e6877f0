#pragma once

#include <atomic>
#include <exception>
#include <iostream>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include "dfd/common.hpp"
#include "dfd/files.hpp"
#include "dfd/iqm.hpp"
#include "dfd/manifest.hpp"
#include "dfd/metrics.hpp"
#include "dfd/pipeline.hpp"
#include "dfd/pnm.hpp"
#include "dfd/verification.hpp"

namespace dfd {

/// Minimum frame side accepted by the extraction pipeline; the quality
/// measures are meaningless below this.
inline constexpr int kMinFrameSide = 8;

struct RunConfig {
    std::string manifest_path;
    FeatureKind features = FeatureKind::iqm;
    PipelineKind pipeline = PipelineKind::iqm_svm;
    int frames_per_video = 20;
    double svm_c = kSvmDefaultC;
    double retained = 0.0;  // 0 = pipeline default (0.99 pixels / 0.95 iqm)
    std::string in_path;
    std::string model_path;
    std::string out_path;
    std::string det_path;
    std::string scores_path;
    Label tampered_label = Label::deepfake_hq;
    int threads = 1;
    bool verbose = false;

    void check() const {
        require(frames_per_video >= 1, "frames-per-video must be >= 1");
        require(retained >= 0.0 && retained <= 1.0, "retained must be in (0,1]");
        require(threads >= 1, "threads must be >= 1");
        require(svm_c > 0.0, "svm-c must be positive");
    }
};

namespace detail {

inline std::vector<double> extract_features(FeatureKind kind, const RgbFrame& frame) {
    if (kind == FeatureKind::iqm) {
        const QualityVector qv = extract_iqm_vector(frame);
        return {qv.values.begin(), qv.values.end()};
    }
    return extract_pixel_vector(frame);
}

struct VideoLookup {
    std::map<std::string, const VideoEntry*> by_id;

    explicit VideoLookup(const Manifest& manifest) {
        for (const auto& e : manifest.entries) by_id.emplace(e.video_id, &e);
    }
    const VideoEntry& get(const std::string& id, const std::string& origin) const {
        auto it = by_id.find(id);
        if (it == by_id.end()) fail(origin + ": video '" + id + "' not in manifest");
        return *it->second;
    }
};

// Per-frame feature matrix of one split, with per-row genuine flags.
struct SplitFeatures {
    Mat X;
    std::vector<bool> genuine;
};

inline SplitFeatures collect_split(const Manifest& manifest, const FeatureFile& features,
                                   Split split, const std::string& origin) {
    std::map<std::string, std::vector<const FeatureRow*>> rows_by_video;
    for (const auto& row : features.rows) rows_by_video[row.video_id].push_back(&row);

    const VideoLookup lookup(manifest);
    for (const auto& [id, rows] : rows_by_video) lookup.get(id, origin);

    SplitFeatures out;
    std::vector<const FeatureRow*> selected;
    for (const auto& e : manifest.entries) {
        if (e.split != split) continue;
        auto it = rows_by_video.find(e.video_id);
        if (it == rows_by_video.end() || it->second.empty())
            fail(origin + ": no feature rows for video '" + e.video_id + "'");
        for (const FeatureRow* row : it->second) {
            selected.push_back(row);
            out.genuine.push_back(e.label == Label::genuine);
        }
    }
    require(!selected.empty(), origin + ": split has no feature rows");
    out.X = Mat(selected.size(), features.dimension);
    for (std::size_t r = 0; r < selected.size(); ++r)
        std::copy(selected[r]->values.begin(), selected[r]->values.end(), out.X.row(r));
    return out;
}

}  // namespace detail

/// extract: one feature row per (video, sampled frame) over the whole
/// manifest. Frame work is spread over config.threads workers; the output
/// bytes do not depend on the worker count.
inline void cmd_extract(const RunConfig& config) {
    config.check();
    require(!config.manifest_path.empty() && !config.out_path.empty(),
            "extract: --manifest and --out are required");
    const Manifest manifest = parse_manifest(config.manifest_path);
    require(!manifest.entries.empty(), config.manifest_path + ": no entries");

    std::vector<std::vector<std::string>> frame_paths(manifest.entries.size());
    for (std::size_t v = 0; v < manifest.entries.size(); ++v)
        frame_paths[v] = sample_frames(manifest.entries[v], config.frames_per_video);

    std::vector<std::vector<FeatureRow>> rows_per_video(manifest.entries.size());
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(config.threads));
    const auto worker = [&](std::size_t worker_id) {
        try {
            for (std::size_t v = next.fetch_add(1); v < manifest.entries.size();
                 v = next.fetch_add(1)) {
                const VideoEntry& entry = manifest.entries[v];
                std::vector<FeatureRow>& rows = rows_per_video[v];
                rows.reserve(frame_paths[v].size());
                for (const std::string& path : frame_paths[v]) {
                    const RgbFrame frame = load_frame(path);
                    require(frame.width >= kMinFrameSide && frame.height >= kMinFrameSide,
                            path + ": frame smaller than " + std::to_string(kMinFrameSide) + "x" +
                                std::to_string(kMinFrameSide));
                    rows.push_back({entry.video_id, frame_index_of(path),
                                    detail::extract_features(config.features, frame)});
                }
            }
        } catch (...) {
            errors[worker_id] = std::current_exception();
        }
    };
    if (config.threads == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < config.threads; ++t) pool.emplace_back(worker, static_cast<std::size_t>(t));
        for (auto& t : pool) t.join();
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);

    FeatureFile file;
    file.kind = config.features;
    file.dimension = config.features == FeatureKind::iqm
                         ? static_cast<std::size_t>(kIqmDimensions)
                         : static_cast<std::size_t>(kDefaultPixelSide) * kDefaultPixelSide;
    for (auto& rows : rows_per_video)
        for (auto& row : rows) file.rows.push_back(std::move(row));

    atomic_write(config.out_path, [&](std::ostream& out) { write_feature_csv(out, file); });
    if (config.verbose)
        std::cout << "extract: " << file.rows.size() << " rows, " << file.dimension
                  << " features -> " << config.out_path << "\n";
}

/// train: fit the chosen pipeline on the manifest's train split.
inline void cmd_train(const RunConfig& config) {
    config.check();
    require(!config.manifest_path.empty() && !config.in_path.empty() && !config.out_path.empty(),
            "train: --manifest, --in and --out are required");
    const Manifest manifest = parse_manifest(config.manifest_path);
    const FeatureFile features = read_feature_csv(config.in_path);

    const FeatureKind expected = config.pipeline == PipelineKind::pixels_pca_lda
                                     ? FeatureKind::pixels
                                     : FeatureKind::iqm;
    require(features.kind == expected,
            std::string("train: pipeline ") + to_string(config.pipeline) + " needs " +
                to_string(expected) + " features, file has " + to_string(features.kind));

    const detail::SplitFeatures train =
        detail::collect_split(manifest, features, Split::train, config.in_path);

    TrainOptions options;
    options.retained = config.retained;
    options.svm_c = config.svm_c;
    const PipelineModel model = train_pipeline(config.pipeline, train.X, train.genuine, options);

    atomic_write(config.out_path, [&](std::ostream& out) { out << model_to_json(model); });

    std::cout << "train: " << to_string(config.pipeline) << " on " << train.X.rows
              << " samples x " << train.X.cols << " dims";
    if (model.pca) std::cout << ", pca k=" << model.pca->k();
    if (model.svm) {
        std::cout << ", svm passes=" << model.svm->passes;
        if (!model.svm->converged) std::cout << " (pass limit hit, not fully converged)";
    }
    std::cout << " -> " << config.out_path << "\n";
}

/// score: fused per-video scores of the manifest's test split.
inline void cmd_score(const RunConfig& config) {
    config.check();
    require(!config.manifest_path.empty() && !config.in_path.empty() &&
                !config.model_path.empty() && !config.out_path.empty(),
            "score: --manifest, --in, --model and --out are required");
    const Manifest manifest = parse_manifest(config.manifest_path);
    const FeatureFile features = read_feature_csv(config.in_path);
    const PipelineModel model = load_model(config.model_path);

    const FeatureKind expected =
        model.kind == PipelineKind::pixels_pca_lda ? FeatureKind::pixels : FeatureKind::iqm;
    require(features.kind == expected,
            config.in_path + ": feature kind does not match model " + to_string(model.kind));
    require(features.dimension == model.input_dimension(),
            config.in_path + ": feature dimension " + std::to_string(features.dimension) +
                " does not match model dimension " + std::to_string(model.input_dimension()));

    std::map<std::string, std::vector<const FeatureRow*>> rows_by_video;
    for (const auto& row : features.rows) rows_by_video[row.video_id].push_back(&row);

    ScoreSet scores;
    scores.context = ScoreContext::detection;
    for (const auto& e : manifest.entries) {
        if (e.split != Split::test) continue;
        auto it = rows_by_video.find(e.video_id);
        if (it == rows_by_video.end() || it->second.empty())
            fail(config.in_path + ": no feature rows for test video '" + e.video_id + "'");
        std::vector<double> frame_scores;
        frame_scores.reserve(it->second.size());
        for (const FeatureRow* row : it->second) frame_scores.push_back(model.score_frame(row->values));
        scores.records.push_back({e.video_id, e.claimed_subject,
                                  e.label == Label::genuine ? TrialType::genuine
                                                            : TrialType::tampered,
                                  fuse_video_score(frame_scores)});
    }
    require(!scores.records.empty(), "score: manifest has no test videos");

    atomic_write(config.out_path, [&](std::ostream& out) { write_score_csv(out, scores); });
    if (config.verbose)
        std::cout << "score: " << scores.records.size() << " videos -> " << config.out_path << "\n";
}

/// evaluate: EER / FRR@FAR=10% / DET report of a detection score file.
inline void cmd_evaluate(const RunConfig& config) {
    config.check();
    require(!config.in_path.empty() && !config.out_path.empty(),
            "evaluate: --in and --out are required");
    const ScoreSet scores = read_score_csv(config.in_path, ScoreContext::detection);
    const EvalReport report = evaluate_scores(scores);

    atomic_write(config.out_path, [&](std::ostream& out) { out << report_to_json(report); });
    if (!config.det_path.empty())
        atomic_write(config.det_path,
                     [&](std::ostream& out) { write_det_csv(out, report.det_points); });
    if (config.verbose)
        std::cout << "evaluate: eer=" << format_real(report.eer)
                  << " frr@far10=" << format_real(report.frr_at_far10) << " -> "
                  << config.out_path << "\n";
}

/// vulnerability: licit + tampered verification over an embedding file,
/// reporting the tampered FAR at the licit EER threshold.
inline void cmd_vulnerability(const RunConfig& config) {
    config.check();
    require(!config.manifest_path.empty() && !config.in_path.empty() && !config.out_path.empty(),
            "vulnerability: --manifest, --in and --out are required");
    const Manifest manifest = parse_manifest(config.manifest_path);
    const EmbeddingTable table = read_embedding_csv(config.in_path);

    const ScoreSet licit = run_licit(manifest, table);
    const ScoreSet tampered = run_tampered(manifest, table, config.tampered_label);
    const VulnReport vuln = vulnerability(licit, tampered);
    const EvalReport report = evaluate_scores(licit);

    atomic_write(config.out_path, [&](std::ostream& out) { out << report_to_json(report, &vuln); });
    if (!config.det_path.empty())
        atomic_write(config.det_path,
                     [&](std::ostream& out) { write_det_csv(out, report.det_points); });
    if (!config.scores_path.empty()) {
        ScoreSet combined = licit;
        combined.context = ScoreContext::detection;  // mixed trial types for inspection
        combined.records.insert(combined.records.end(), tampered.records.begin(),
                                tampered.records.end());
        atomic_write(config.scores_path,
                     [&](std::ostream& out) { write_score_csv(out, combined); });
    }
    if (config.verbose)
        std::cout << "vulnerability: licit eer=" << format_real(vuln.licit_eer)
                  << " tampered far=" << format_real(vuln.tampered_far) << " -> "
                  << config.out_path << "\n";
}

}  // namespace dfd
