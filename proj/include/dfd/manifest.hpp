#pragma once

#include <algorithm>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "dfd/common.hpp"
#include "dfd/csv.hpp"

namespace dfd {

enum class Label { genuine, deepfake_lq, deepfake_hq };
enum class Split { train, test };

inline const char* to_string(Label l) {
    switch (l) {
        case Label::genuine: return "genuine";
        case Label::deepfake_lq: return "deepfake_lq";
        default: return "deepfake_hq";
    }
}

inline const char* to_string(Split s) { return s == Split::train ? "train" : "test"; }

struct VideoEntry {
    std::string video_id;
    std::string claimed_subject;   // identity whose face appears / is claimed
    std::string source_subject;    // body/source video for deepfakes, empty for genuine
    Label label = Label::genuine;
    Split split = Split::train;
    std::string frames_path;       // directory holding frame_%06d.pgm/.ppm files

    bool is_attack() const { return label != Label::genuine; }
};

struct Manifest {
    std::vector<VideoEntry> entries;

    std::vector<const VideoEntry*> in_split(Split s) const {
        std::vector<const VideoEntry*> out;
        for (const auto& e : entries)
            if (e.split == s) out.push_back(&e);
        return out;
    }
};

/// Parses and validates the manifest CSV. All violations are collected and
/// reported in one error, each with its line number.
inline Manifest parse_manifest(const std::string& path) {
    CsvFile csv = read_csv(path);
    const std::vector<std::string> expected = {"video_id",    "claimed_subject", "source_subject",
                                               "label",       "split",           "frames_path"};
    if (csv.header != expected)
        fail(path + ": bad manifest header, expected video_id,claimed_subject,source_subject,"
                    "label,split,frames_path");

    Manifest manifest;
    std::vector<std::string> problems;
    std::map<std::string, int> first_line_of_id;  // video_id -> line number
    std::map<std::string, std::set<std::string>> subjects_by_split;

    for (std::size_t r = 0; r < csv.rows.size(); ++r) {
        const auto& row = csv.rows[r];
        const int line = csv.line_numbers[r];
        if (row.size() != expected.size()) {
            problems.push_back("line " + std::to_string(line) + ": expected 6 fields, got " +
                               std::to_string(row.size()));
            continue;
        }
        VideoEntry e;
        e.video_id = row[0];
        e.claimed_subject = row[1];
        e.source_subject = row[2];
        e.frames_path = row[5];
        bool row_ok = true;

        if (e.video_id.empty() || e.claimed_subject.empty()) {
            problems.push_back("line " + std::to_string(line) + ": empty video_id or claimed_subject");
            row_ok = false;
        }
        if (row[3] == "genuine") e.label = Label::genuine;
        else if (row[3] == "deepfake_lq") e.label = Label::deepfake_lq;
        else if (row[3] == "deepfake_hq") e.label = Label::deepfake_hq;
        else {
            problems.push_back("line " + std::to_string(line) + ": unknown label '" + row[3] + "'");
            row_ok = false;
        }
        if (row[4] == "train") e.split = Split::train;
        else if (row[4] == "test") e.split = Split::test;
        else {
            problems.push_back("line " + std::to_string(line) + ": unknown split '" + row[4] + "'");
            row_ok = false;
        }
        if (row_ok && e.label == Label::genuine && !e.source_subject.empty() &&
            e.source_subject != e.claimed_subject) {
            problems.push_back("line " + std::to_string(line) + ": genuine row '" + e.video_id +
                               "' has source_subject different from claimed_subject");
            row_ok = false;
        }
        if (row_ok && e.is_attack() &&
            (e.source_subject.empty() || e.source_subject == e.claimed_subject)) {
            problems.push_back("line " + std::to_string(line) + ": deepfake row '" + e.video_id +
                               "' needs a source_subject different from claimed_subject");
            row_ok = false;
        }
        if (!e.video_id.empty()) {
            auto [it, inserted] = first_line_of_id.emplace(e.video_id, line);
            if (!inserted) {
                problems.push_back("duplicate video_id '" + e.video_id + "' on lines " +
                                   std::to_string(it->second) + " and " + std::to_string(line));
                row_ok = false;
            }
        }
        if (row_ok) {
            subjects_by_split[row[4]].insert(e.claimed_subject);
            manifest.entries.push_back(std::move(e));
        }
    }

    for (const auto& s : subjects_by_split["train"]) {
        if (subjects_by_split["test"].count(s))
            problems.push_back("claimed_subject '" + s + "' appears in both train and test splits");
    }

    if (!problems.empty()) {
        std::string msg = path + ": manifest validation failed:";
        for (const auto& p : problems) msg += "\n  " + p;
        fail(msg);
    }
    return manifest;
}

/// Lists the frame files of a video, sorted by numeric index.
/// Files must be named frame_<index>.pgm or frame_<index>.ppm.
inline std::vector<std::string> list_frames(const std::string& frames_path) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(frames_path)) fail(frames_path + ": frames directory not found");
    std::vector<std::pair<long, std::string>> found;
    for (const auto& de : fs::directory_iterator(frames_path)) {
        if (!de.is_regular_file()) continue;
        const std::string name = de.path().filename().string();
        if (name.rfind("frame_", 0) != 0) continue;
        const std::string ext = de.path().extension().string();
        if (ext != ".pgm" && ext != ".ppm") continue;
        const std::string digits = name.substr(6, name.size() - 6 - 4);
        if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos) continue;
        found.emplace_back(std::stol(digits), de.path().string());
    }
    if (found.empty()) fail(frames_path + ": no frames found");
    std::sort(found.begin(), found.end());
    for (std::size_t i = 1; i < found.size(); ++i)
        if (found[i].first == found[i - 1].first)
            fail(frames_path + ": duplicate frame index " + std::to_string(found[i].first));
    std::vector<std::string> paths;
    paths.reserve(found.size());
    for (auto& [idx, p] : found) paths.push_back(std::move(p));
    return paths;
}

/// Picks min(count, n) frames at uniformly spaced indices
/// floor(i*(n-1)/(count-1)), duplicates removed, order preserved.
inline std::vector<std::string> sample_frames(const VideoEntry& entry, int count) {
    require(count >= 1, "sample_frames: count must be >= 1");
    std::vector<std::string> frames = list_frames(entry.frames_path);
    const long n = static_cast<long>(frames.size());
    std::vector<std::string> picked;
    long prev = -1;
    for (int i = 0; i < count; ++i) {
        long idx = count == 1 ? 0 : (static_cast<long>(i) * (n - 1)) / (count - 1);
        if (idx != prev) {
            picked.push_back(frames[static_cast<std::size_t>(idx)]);
            prev = idx;
        }
    }
    return picked;
}

/// Numeric frame index parsed from a frame_%06d.* filename.
inline long frame_index_of(const std::string& frame_path) {
    namespace fs = std::filesystem;
    const std::string name = fs::path(frame_path).filename().string();
    const std::string digits = name.substr(6, name.size() - 6 - 4);
    return std::stol(digits);
}

}  // namespace dfd
