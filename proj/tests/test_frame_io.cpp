#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <random>

#include "dfd/image.hpp"
#include "dfd/iqm.hpp"
#include "dfd/manifest.hpp"
#include "dfd/pnm.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using dfd::RgbFrame;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("dfd_test_" + std::to_string(std::random_device{}()));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

void write_bytes(const std::string& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

RgbFrame gray_frame(int w, int h, const std::vector<std::uint8_t>& gray) {
    RgbFrame f{w, h, {}};
    for (auto v : gray) {
        f.data.push_back(v);
        f.data.push_back(v);
        f.data.push_back(v);
    }
    return f;
}

}  // namespace

TEST_CASE("load_frame decodes P5 with grayscale replication") {
    TempDir dir;
    const std::string path = dir.file("a.pgm");
    write_bytes(path, std::string("P5\n2 2\n255\n") + '\0' + '\x80' + '\xff' + '\x40');
    const RgbFrame f = dfd::load_frame(path);
    REQUIRE(f.width == 2);
    REQUIRE(f.height == 2);
    const std::vector<std::uint8_t> expected = {0,   0,   0,   128, 128, 128,
                                                255, 255, 255, 64,  64,  64};
    REQUIRE(f.data == expected);
}

TEST_CASE("load_frame decodes P6 verbatim") {
    TempDir dir;
    const std::string path = dir.file("a.ppm");
    write_bytes(path, std::string("P6\n1 1\n255\n") + '\x0a' + '\x14' + '\x1e');
    const RgbFrame f = dfd::load_frame(path);
    REQUIRE(f.width == 1);
    REQUIRE(f.height == 1);
    REQUIRE(f.data == std::vector<std::uint8_t>{10, 20, 30});
}

TEST_CASE("load_frame handles header comments") {
    TempDir dir;
    const std::string path = dir.file("c.pgm");
    write_bytes(path, std::string("P5\n# a comment\n1 1\n# another\n255\n") + '\x7f');
    REQUIRE(dfd::load_frame(path).data == std::vector<std::uint8_t>{127, 127, 127});
}

TEST_CASE("load_frame error cases") {
    TempDir dir;

    SECTION("missing file") {
        REQUIRE_THROWS_WITH(dfd::load_frame(dir.file("nope.pgm")),
                            Catch::Matchers::ContainsSubstring("cannot open"));
    }
    SECTION("empty file is truncated") {
        const std::string path = dir.file("empty.pgm");
        write_bytes(path, "");
        REQUIRE_THROWS_WITH(dfd::load_frame(path),
                            Catch::Matchers::ContainsSubstring("truncated"));
    }
    SECTION("bad magic") {
        const std::string path = dir.file("bad.pgm");
        write_bytes(path, "P3\n1 1\n255\n1 2 3\n");
        REQUIRE_THROWS_WITH(dfd::load_frame(path),
                            Catch::Matchers::ContainsSubstring("P5/P6"));
    }
    SECTION("truncated pixel data reports byte offset") {
        const std::string path = dir.file("short.ppm");
        write_bytes(path, std::string("P6\n2 2\n255\n") + "abc");
        try {
            dfd::load_frame(path);
            FAIL("expected error");
        } catch (const dfd::Error& e) {
            const std::string msg = e.what();
            REQUIRE(msg.find("truncated pixel data") != std::string::npos);
            REQUIRE(msg.find(path) != std::string::npos);
            REQUIRE(msg.find("byte offset") != std::string::npos);
        }
    }
    SECTION("unsupported maxval") {
        const std::string path = dir.file("m.pgm");
        write_bytes(path, "P5\n1 1\n65535\n??");
        REQUIRE_THROWS_WITH(dfd::load_frame(path),
                            Catch::Matchers::ContainsSubstring("maxval"));
    }
}

TEST_CASE("PNM round trip preserves pixel bytes") {
    TempDir dir;
    std::mt19937 rng(7);
    for (int trial = 0; trial < 5; ++trial) {
        const int w = 1 + static_cast<int>(rng() % 13);
        const int h = 1 + static_cast<int>(rng() % 9);
        const RgbFrame color = oracle::random_frame(w, h, rng);
        const std::string ppm = dir.file("rt.ppm");
        dfd::save_ppm(color, ppm);
        REQUIRE(dfd::load_frame(ppm).data == color.data);

        std::vector<std::uint8_t> gray(static_cast<std::size_t>(w) * h);
        for (auto& v : gray) v = static_cast<std::uint8_t>(rng() % 256);
        const RgbFrame gf = gray_frame(w, h, gray);
        const std::string pgm = dir.file("rt.pgm");
        dfd::save_pgm(gf, pgm);
        REQUIRE(dfd::load_frame(pgm).data == gf.data);
    }
}

TEST_CASE("to_luminance matches BT.601 weights") {
    RgbFrame f{1, 1, {255, 255, 255}};
    REQUIRE(dfd::to_luminance(f).values[0] == 255.0);
    f.data = {0, 0, 0};
    REQUIRE(dfd::to_luminance(f).values[0] == 0.0);
    f.data = {255, 0, 0};
    REQUIRE(dfd::to_luminance(f).values[0] == 76.245);
    f.data = {0, 255, 0};
    REQUIRE(dfd::to_luminance(f).values[0] == 149.685);

    std::mt19937 rng(11);
    const RgbFrame random = oracle::random_frame(9, 9, rng);
    for (double v : dfd::to_luminance(random).values) {
        REQUIRE(v >= 0.0);
        REQUIRE(v <= 255.0);
    }
}

TEST_CASE("bilinear resize") {
    SECTION("identity when sizes match") {
        std::mt19937 rng(3);
        const dfd::LumaPlane src = oracle::random_luma(6, 5, rng);
        const dfd::LumaPlane out = dfd::bilinear_resize(src, 6, 5);
        REQUIRE(out.values == src.values);
    }
    SECTION("2x2 step to 4x4 hand values") {
        const RgbFrame f = gray_frame(2, 2, {0, 0, 255, 255});
        const std::vector<double> v = dfd::extract_pixel_vector(f, 4);
        REQUIRE(v.size() == 16);
        const double rows[4] = {0.0, 63.75, 191.25, 255.0};
        for (int y = 0; y < 4; ++y)
            for (int x = 0; x < 4; ++x)
                REQUIRE(v[static_cast<std::size_t>(y) * 4 + x] == Catch::Approx(rows[y]).margin(1e-12));
    }
    SECTION("constant frame stays constant at any size") {
        const RgbFrame f = gray_frame(3, 7, std::vector<std::uint8_t>(21, 77));
        for (double v : dfd::extract_pixel_vector(f, 16)) REQUIRE(v == 77.0);
    }
}

namespace {

std::string manifest_with_rows(const TempDir& dir, const std::string& rows) {
    const std::string path = dir.file("manifest.csv");
    write_bytes(path, "video_id,claimed_subject,source_subject,label,split,frames_path\n" + rows);
    return path;
}

}  // namespace

TEST_CASE("parse_manifest accepts a valid file") {
    TempDir dir;
    const std::string path = manifest_with_rows(
        dir,
        "v1,s01,,genuine,train,/data/v1\n"
        "v2,s02,s01,deepfake_lq,train,/data/v2\n"
        "v3,s03,,genuine,test,/data/v3\n");
    const dfd::Manifest m = dfd::parse_manifest(path);
    REQUIRE(m.entries.size() == 3);
    REQUIRE(m.entries[1].label == dfd::Label::deepfake_lq);
    REQUIRE(m.entries[1].source_subject == "s01");
    REQUIRE(m.in_split(dfd::Split::train).size() == 2);
}

TEST_CASE("parse_manifest rejects invalid files") {
    TempDir dir;

    SECTION("duplicate video_id lists both line numbers") {
        const std::string path = manifest_with_rows(dir,
                                                    "v1,s01,,genuine,train,/d\n"
                                                    "v1,s02,,genuine,train,/d\n");
        try {
            dfd::parse_manifest(path);
            FAIL("expected error");
        } catch (const dfd::Error& e) {
            const std::string msg = e.what();
            REQUIRE(msg.find("duplicate video_id 'v1'") != std::string::npos);
            REQUIRE(msg.find("lines 2 and 3") != std::string::npos);
        }
    }
    SECTION("subject in both splits") {
        const std::string path = manifest_with_rows(dir,
                                                    "v1,s01,,genuine,train,/d\n"
                                                    "v2,s01,,genuine,test,/d\n");
        REQUIRE_THROWS_WITH(dfd::parse_manifest(path),
                            Catch::Matchers::ContainsSubstring("both train and test"));
    }
    SECTION("unknown label") {
        const std::string path = manifest_with_rows(dir, "v1,s01,,fake,train,/d\n");
        REQUIRE_THROWS_WITH(dfd::parse_manifest(path),
                            Catch::Matchers::ContainsSubstring("unknown label 'fake'"));
    }
    SECTION("deepfake without source subject") {
        const std::string path = manifest_with_rows(dir, "v1,s01,,deepfake_hq,train,/d\n");
        REQUIRE_THROWS_WITH(dfd::parse_manifest(path),
                            Catch::Matchers::ContainsSubstring("needs a source_subject"));
    }
    SECTION("genuine with foreign source subject") {
        const std::string path = manifest_with_rows(dir, "v1,s01,s02,genuine,train,/d\n");
        REQUIRE_THROWS_WITH(dfd::parse_manifest(path),
                            Catch::Matchers::ContainsSubstring("source_subject different"));
    }
    SECTION("short row reports its line number") {
        const std::string path = manifest_with_rows(dir, "v1,s01,,genuine,train\n");
        REQUIRE_THROWS_WITH(dfd::parse_manifest(path),
                            Catch::Matchers::ContainsSubstring("line 2"));
    }
    SECTION("violations are aggregated into one report") {
        const std::string path = manifest_with_rows(dir,
                                                    "v1,s01,,bogus,train,/d\n"
                                                    "v2,s02,,genuine,nowhere,/d\n");
        try {
            dfd::parse_manifest(path);
            FAIL("expected error");
        } catch (const dfd::Error& e) {
            const std::string msg = e.what();
            REQUIRE(msg.find("unknown label") != std::string::npos);
            REQUIRE(msg.find("unknown split") != std::string::npos);
        }
    }
}

namespace {

dfd::VideoEntry entry_with_frames(const TempDir& dir, const std::string& sub, int n) {
    const fs::path video_dir = dir.path / sub;
    fs::create_directories(video_dir);
    for (int i = 0; i < n; ++i) {
        char name[32];
        std::snprintf(name, sizeof(name), "frame_%06d.pgm", i);
        std::ofstream((video_dir / name).string()).put('x');
    }
    dfd::VideoEntry e;
    e.video_id = sub;
    e.claimed_subject = "s";
    e.frames_path = video_dir.string();
    return e;
}

}  // namespace

TEST_CASE("sample_frames uses the uniform floor formula") {
    TempDir dir;

    SECTION("n=100 count=20 enumerates floor(i*99/19)") {
        const auto e = entry_with_frames(dir, "v100", 100);
        const auto picked = dfd::sample_frames(e, 20);
        REQUIRE(picked.size() == 20);
        for (int i = 0; i < 20; ++i) {
            const long expected = (static_cast<long>(i) * 99) / 19;
            REQUIRE(dfd::frame_index_of(picked[static_cast<std::size_t>(i)]) == expected);
        }
        REQUIRE(dfd::frame_index_of(picked.front()) == 0);
        REQUIRE(dfd::frame_index_of(picked.back()) == 99);
    }
    SECTION("n=20 count=20 returns all in order") {
        const auto e = entry_with_frames(dir, "v20", 20);
        const auto picked = dfd::sample_frames(e, 20);
        REQUIRE(picked.size() == 20);
        for (int i = 0; i < 20; ++i)
            REQUIRE(dfd::frame_index_of(picked[static_cast<std::size_t>(i)]) == i);
    }
    SECTION("n=5 count=20 clamps without duplicates") {
        const auto e = entry_with_frames(dir, "v5", 5);
        const auto picked = dfd::sample_frames(e, 20);
        REQUIRE(picked.size() == 5);
        for (int i = 0; i < 5; ++i)
            REQUIRE(dfd::frame_index_of(picked[static_cast<std::size_t>(i)]) == i);
    }
    SECTION("deterministic across calls") {
        const auto e = entry_with_frames(dir, "vd", 37);
        REQUIRE(dfd::sample_frames(e, 20) == dfd::sample_frames(e, 20));
    }
    SECTION("count=1 picks the first frame") {
        const auto e = entry_with_frames(dir, "v1c", 9);
        const auto picked = dfd::sample_frames(e, 1);
        REQUIRE(picked.size() == 1);
        REQUIRE(dfd::frame_index_of(picked[0]) == 0);
    }
    SECTION("missing frames error") {
        dfd::VideoEntry e;
        e.frames_path = (dir.path / "does_not_exist").string();
        REQUIRE_THROWS_AS(dfd::sample_frames(e, 20), dfd::Error);
    }
}
