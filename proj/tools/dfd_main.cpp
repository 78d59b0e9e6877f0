// dfd: deepfake detection via image-quality measures, and verification
// score evaluation under licit/tampered protocols.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "dfd/commands.hpp"

namespace {

void add_common_flags(CLI::App* cmd, dfd::RunConfig& config) {
    cmd->add_option("--threads", config.threads, "Worker threads (never changes output bytes)")
        ->check(CLI::PositiveNumber);
    cmd->add_flag("--verbose", config.verbose, "Print a summary line on success");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Deepfake detection toolkit: quality-measure features, classical "
                 "classifiers, and biometric verification metrics"};
    app.require_subcommand(1);

    dfd::RunConfig config;
    std::string features = "iqm";
    std::string pipeline = "iqm_svm";
    std::string label = "deepfake_hq";

    CLI::App* extract = app.add_subcommand("extract", "Extract per-frame features to CSV");
    extract->add_option("--manifest", config.manifest_path, "Dataset manifest CSV")->required();
    extract->add_option("--features", features, "Feature kind: iqm | pixels")
        ->check(CLI::IsMember({"iqm", "pixels"}));
    extract->add_option("--frames-per-video", config.frames_per_video,
                        "Frames sampled per video (uniform spacing)")
        ->check(CLI::PositiveNumber);
    extract->add_option("--out", config.out_path, "Output feature CSV")->required();
    add_common_flags(extract, config);

    CLI::App* train = app.add_subcommand("train", "Train a detection pipeline on the train split");
    train->add_option("--manifest", config.manifest_path, "Dataset manifest CSV")->required();
    train->add_option("--pipeline", pipeline,
                      "Pipeline: iqm_svm | iqm_pca_lda | pixels_pca_lda")
        ->check(CLI::IsMember({"iqm_svm", "iqm_pca_lda", "pixels_pca_lda"}));
    train->add_option("--in", config.in_path, "Feature CSV from extract")->required();
    train->add_option("--out", config.out_path, "Output model JSON")->required();
    train->add_option("--svm-c", config.svm_c, "SVM regularization C")->check(CLI::PositiveNumber);
    train->add_option("--retained", config.retained,
                      "PCA retained variance fraction (default 0.99 pixels / 0.95 iqm)")
        ->check(CLI::Range(1e-9, 1.0));
    add_common_flags(train, config);

    CLI::App* score = app.add_subcommand("score", "Score the test split with a trained model");
    score->add_option("--manifest", config.manifest_path, "Dataset manifest CSV")->required();
    score->add_option("--in", config.in_path, "Feature CSV from extract")->required();
    score->add_option("--model", config.model_path, "Model JSON from train")->required();
    score->add_option("--out", config.out_path, "Output score CSV")->required();
    add_common_flags(score, config);

    CLI::App* evaluate = app.add_subcommand("evaluate", "Compute EER/FRR@FAR metrics from scores");
    evaluate->add_option("--in", config.in_path, "Score CSV")->required();
    evaluate->add_option("--out", config.out_path, "Output report JSON")->required();
    evaluate->add_option("--det", config.det_path, "Optional DET points CSV");
    add_common_flags(evaluate, config);

    CLI::App* vuln = app.add_subcommand(
        "vulnerability", "Licit/tampered verification analysis over an embedding file");
    vuln->add_option("--manifest", config.manifest_path, "Dataset manifest CSV")->required();
    vuln->add_option("--in", config.in_path, "Embedding CSV (video_id,e0,e1,...)")->required();
    vuln->add_option("--label", label, "Deepfake label to probe with")
        ->check(CLI::IsMember({"deepfake_lq", "deepfake_hq"}));
    vuln->add_option("--out", config.out_path, "Output report JSON")->required();
    vuln->add_option("--det", config.det_path, "Optional licit DET points CSV");
    vuln->add_option("--scores", config.scores_path, "Optional raw score CSV (licit + tampered)");
    add_common_flags(vuln, config);

    CLI11_PARSE(app, argc, argv);

    try {
        config.features = dfd::feature_kind_from(features);
        config.pipeline = dfd::pipeline_kind_from(pipeline);
        config.tampered_label =
            label == "deepfake_lq" ? dfd::Label::deepfake_lq : dfd::Label::deepfake_hq;

        if (extract->parsed()) dfd::cmd_extract(config);
        else if (train->parsed()) dfd::cmd_train(config);
        else if (score->parsed()) dfd::cmd_score(config);
        else if (evaluate->parsed()) dfd::cmd_evaluate(config);
        else if (vuln->parsed()) dfd::cmd_vulnerability(config);
    } catch (const std::exception& e) {
        std::cerr << "dfd: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
