#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "dfd/common.hpp"
#include "dfd/image.hpp"

namespace dfd {

namespace detail {

// Skips whitespace and '#' comment lines inside a PNM header.
inline void pnm_skip_space(const std::vector<char>& buf, std::size_t& pos) {
    while (pos < buf.size()) {
        char c = buf[pos];
        if (c == '#') {
            while (pos < buf.size() && buf[pos] != '\n') ++pos;
        } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
            ++pos;
        } else {
            break;
        }
    }
}

inline long pnm_read_int(const std::vector<char>& buf, std::size_t& pos,
                         const std::string& path, const char* what) {
    pnm_skip_space(buf, pos);
    if (pos >= buf.size() || buf[pos] < '0' || buf[pos] > '9')
        fail(path + ": malformed header, expected " + std::string(what) +
             " at byte offset " + std::to_string(pos));
    long v = 0;
    while (pos < buf.size() && buf[pos] >= '0' && buf[pos] <= '9') {
        v = v * 10 + (buf[pos] - '0');
        if (v > 1000000000L) fail(path + ": absurd " + std::string(what) + " in header");
        ++pos;
    }
    return v;
}

inline std::vector<char> read_file_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(path + ": cannot open file");
    std::vector<char> buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return buf;
}

}  // namespace detail

/// Decodes a binary PGM (P5) or PPM (P6) file, 8-bit maxval 255.
/// Grayscale input is replicated across the three channels.
inline RgbFrame load_frame(const std::string& path) {
    std::vector<char> buf = detail::read_file_bytes(path);
    if (buf.empty()) fail(path + ": truncated file (0 bytes)");
    if (buf.size() < 2 || buf[0] != 'P' || (buf[1] != '5' && buf[1] != '6'))
        fail(path + ": malformed header, not a binary PGM/PPM (P5/P6) file");
    const bool color = buf[1] == '6';
    std::size_t pos = 2;
    long width = detail::pnm_read_int(buf, pos, path, "width");
    long height = detail::pnm_read_int(buf, pos, path, "height");
    long maxval = detail::pnm_read_int(buf, pos, path, "maxval");
    if (width < 1 || height < 1) fail(path + ": malformed header, empty dimensions");
    if (maxval != 255) fail(path + ": unsupported maxval " + std::to_string(maxval) + " (only 255)");
    if (pos >= buf.size()) fail(path + ": truncated pixel data at byte offset " + std::to_string(pos));
    ++pos;  // single whitespace byte after maxval

    const std::size_t pixels = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    const std::size_t need = pixels * (color ? 3 : 1);
    if (buf.size() - pos < need)
        fail(path + ": truncated pixel data, expected " + std::to_string(need) + " bytes, have " +
             std::to_string(buf.size() - pos) + " at byte offset " + std::to_string(pos));

    RgbFrame frame{static_cast<int>(width), static_cast<int>(height), {}};
    frame.data.resize(pixels * 3);
    const std::uint8_t* src = reinterpret_cast<const std::uint8_t*>(buf.data() + pos);
    if (color) {
        std::copy(src, src + need, frame.data.begin());
    } else {
        for (std::size_t i = 0; i < pixels; ++i) {
            frame.data[3 * i] = frame.data[3 * i + 1] = frame.data[3 * i + 2] = src[i];
        }
    }
    return frame;
}

/// Writes a color frame as binary PPM (P6).
inline void save_ppm(const RgbFrame& frame, const std::string& path) {
    frame.check();
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail(path + ": cannot open for writing");
    out << "P6\n" << frame.width << " " << frame.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(frame.data.data()),
              static_cast<std::streamsize>(frame.data.size()));
    if (!out) fail(path + ": write failed");
}

/// Writes a gray frame (R == G == B required) as binary PGM (P5).
inline void save_pgm(const RgbFrame& frame, const std::string& path) {
    frame.check();
    std::vector<std::uint8_t> gray(frame.pixel_count());
    for (std::size_t i = 0; i < gray.size(); ++i) {
        const std::uint8_t* p = frame.data.data() + 3 * i;
        require(p[0] == p[1] && p[1] == p[2], path + ": save_pgm requires a gray frame");
        gray[i] = p[0];
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail(path + ": cannot open for writing");
    out << "P5\n" << frame.width << " " << frame.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(gray.data()), static_cast<std::streamsize>(gray.size()));
    if (!out) fail(path + ": write failed");
}

}  // namespace dfd
