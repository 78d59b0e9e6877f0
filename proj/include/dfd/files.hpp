#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <string>
#include <vector>

#include "dfd/common.hpp"
#include "dfd/csv.hpp"
#include "dfd/iqm.hpp"
#include "dfd/linalg.hpp"
#include "dfd/metrics.hpp"
#include "dfd/verification.hpp"

namespace dfd {

/// Writes a file atomically: the content goes to a sibling temp file that is
/// renamed over the target, so failures never leave partial outputs behind.
inline void atomic_write(const std::string& path, const std::function<void(std::ostream&)>& emit) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    const fs::path tmp = target.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) fail(path + ": cannot open for writing");
        try {
            emit(out);
        } catch (...) {
            out.close();
            std::error_code ec;
            fs::remove(tmp, ec);
            throw;
        }
        out.flush();
        if (!out) {
            std::error_code ec;
            fs::remove(tmp, ec);
            fail(path + ": write failed");
        }
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp, ec);
        fail(path + ": rename failed: " + ec.message());
    }
}

enum class FeatureKind { iqm, pixels };

inline const char* to_string(FeatureKind k) { return k == FeatureKind::iqm ? "iqm" : "pixels"; }

inline FeatureKind feature_kind_from(const std::string& s) {
    if (s == "iqm") return FeatureKind::iqm;
    if (s == "pixels") return FeatureKind::pixels;
    fail("unknown feature kind '" + s + "'");
}

/// One extracted feature row: a sampled frame of a video.
struct FeatureRow {
    std::string video_id;
    long frame_index = 0;
    std::vector<double> values;
};

struct FeatureFile {
    FeatureKind kind = FeatureKind::iqm;
    std::size_t dimension = 0;
    std::vector<FeatureRow> rows;
};

inline std::string feature_column_name(FeatureKind kind, std::size_t i) {
    char buf[16];
    if (kind == FeatureKind::iqm)
        std::snprintf(buf, sizeof(buf), "f%02zu", i);
    else
        std::snprintf(buf, sizeof(buf), "p%04zu", i);
    return buf;
}

inline void write_feature_csv(std::ostream& out, const FeatureFile& file) {
    out << "video_id,frame_index";
    for (std::size_t i = 0; i < file.dimension; ++i)
        out << "," << feature_column_name(file.kind, i);
    out << "\n";
    for (const auto& row : file.rows) {
        out << row.video_id << "," << row.frame_index;
        for (double v : row.values) out << "," << format_real(v);
        out << "\n";
    }
}

inline FeatureFile read_feature_csv(const std::string& path) {
    CsvFile csv = read_csv(path);
    require(csv.header.size() >= 3 && csv.header[0] == "video_id" &&
                csv.header[1] == "frame_index",
            path + ": bad feature header");
    FeatureFile file;
    file.dimension = csv.header.size() - 2;
    const std::string& first = csv.header[2];
    if (first.rfind('f', 0) == 0) file.kind = FeatureKind::iqm;
    else if (first.rfind('p', 0) == 0) file.kind = FeatureKind::pixels;
    else fail(path + ": unknown feature column '" + first + "'");
    if (file.kind == FeatureKind::iqm)
        require(file.dimension == static_cast<std::size_t>(kIqmDimensions),
                path + ": iqm feature file must have " + std::to_string(kIqmDimensions) +
                    " measures, found " + std::to_string(file.dimension));
    for (std::size_t i = 0; i < file.dimension; ++i)
        require(csv.header[i + 2] == feature_column_name(file.kind, i),
                path + ": unexpected feature column '" + csv.header[i + 2] + "'");

    file.rows.reserve(csv.rows.size());
    for (std::size_t r = 0; r < csv.rows.size(); ++r) {
        const auto& row = csv.rows[r];
        const std::string context = path + " line " + std::to_string(csv.line_numbers[r]);
        require(row.size() == csv.header.size(), context + ": wrong field count");
        FeatureRow fr;
        fr.video_id = row[0];
        fr.frame_index = static_cast<long>(parse_real(row[1], context));
        fr.values.reserve(file.dimension);
        for (std::size_t i = 2; i < row.size(); ++i) fr.values.push_back(parse_real(row[i], context));
        file.rows.push_back(std::move(fr));
    }
    return file;
}

inline void write_score_csv(std::ostream& out, const ScoreSet& scores) {
    out << "probe_video_id,claim_subject,trial_type,score\n";
    for (const auto& r : scores.records)
        out << r.probe_video_id << "," << r.claim_subject << "," << to_string(r.trial_type) << ","
            << format_real(r.score) << "\n";
}

inline ScoreSet read_score_csv(const std::string& path, ScoreContext context) {
    CsvFile csv = read_csv(path);
    const std::vector<std::string> expected = {"probe_video_id", "claim_subject", "trial_type",
                                               "score"};
    require(csv.header == expected, path + ": bad score header");
    ScoreSet set;
    set.context = context;
    for (std::size_t r = 0; r < csv.rows.size(); ++r) {
        const auto& row = csv.rows[r];
        const std::string context_str = path + " line " + std::to_string(csv.line_numbers[r]);
        require(row.size() == 4, context_str + ": wrong field count");
        ScoreRecord rec;
        rec.probe_video_id = row[0];
        rec.claim_subject = row[1];
        if (row[2] == "genuine") rec.trial_type = TrialType::genuine;
        else if (row[2] == "impostor") rec.trial_type = TrialType::impostor;
        else if (row[2] == "tampered") rec.trial_type = TrialType::tampered;
        else fail(context_str + ": unknown trial_type '" + row[2] + "'");
        rec.score = parse_real(row[3], context_str);
        set.records.push_back(std::move(rec));
    }
    return set;
}

inline EmbeddingTable read_embedding_csv(const std::string& path) {
    CsvFile csv = read_csv(path);
    require(csv.header.size() >= 2 && csv.header[0] == "video_id" && csv.header[1] == "e0",
            path + ": bad embedding header, expected video_id,e0,e1,...");
    EmbeddingTable table;
    table.dimension = csv.header.size() - 1;
    for (std::size_t r = 0; r < csv.rows.size(); ++r) {
        const auto& row = csv.rows[r];
        const std::string context = path + " line " + std::to_string(csv.line_numbers[r]);
        require(row.size() == csv.header.size(), context + ": wrong field count");
        std::vector<double> vec;
        vec.reserve(table.dimension);
        double norm = 0.0;
        for (std::size_t i = 1; i < row.size(); ++i) {
            vec.push_back(parse_real(row[i], context));
            norm += vec.back() * vec.back();
        }
        require(norm > 0.0, context + ": zero embedding for video '" + row[0] + "'");
        auto [it, inserted] = table.by_video.emplace(row[0], std::move(vec));
        require(inserted, context + ": duplicate embedding for video '" + row[0] + "'");
    }
    require(!table.by_video.empty(), path + ": no embeddings");
    return table;
}

inline void write_det_csv(std::ostream& out, const std::vector<std::pair<double, double>>& det) {
    out << "far,frr\n";
    for (const auto& [far, frr] : det) out << format_real(far) << "," << format_real(frr) << "\n";
}

/// Report JSON shared by `evaluate` and `vulnerability`. The tampered block
/// is present only for vulnerability runs.
inline std::string report_to_json(const EvalReport& report, const VulnReport* vuln = nullptr) {
    std::ostringstream out;
    out << "{";
    out << "\"eer\":" << format_real(report.eer);
    out << ",\"theta_eer\":" << format_real(report.theta_eer);
    out << ",\"frr_at_far10\":" << format_real(report.frr_at_far10);
    out << ",\"n_genuine\":" << report.n_genuine;
    out << ",\"n_impostor\":" << report.n_impostor;
    if (vuln) {
        out << ",\"tampered_far\":" << format_real(vuln->tampered_far);
        out << ",\"n_tampered\":" << vuln->n_tampered;
    }
    out << ",\"det\":[";
    for (std::size_t i = 0; i < report.det_points.size(); ++i) {
        if (i) out << ",";
        out << "[" << format_real(report.det_points[i].first) << ","
            << format_real(report.det_points[i].second) << "]";
    }
    out << "]}\n";
    return out.str();
}

}  // namespace dfd
