#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "dfd/common.hpp"

namespace dfd {

/// Decoded 8-bit image, row-major RGB triplets.
struct RgbFrame {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data;  // 3 * width * height bytes, RGBRGB...

    std::size_t pixel_count() const { return static_cast<std::size_t>(width) * height; }

    const std::uint8_t* pixel(int x, int y) const {
        return data.data() + 3 * (static_cast<std::size_t>(y) * width + x);
    }

    void check() const {
        require(width >= 1 && height >= 1, "RgbFrame: empty dimensions");
        require(data.size() == 3 * pixel_count(), "RgbFrame: data length != 3*width*height");
    }
};

/// Real-valued luminance plane, values in [0, 255].
struct LumaPlane {
    int width = 0;
    int height = 0;
    std::vector<double> values;  // width * height, row-major

    double at(int x, int y) const { return values[static_cast<std::size_t>(y) * width + x]; }
    double& at(int x, int y) { return values[static_cast<std::size_t>(y) * width + x]; }

    /// Clamped lookup, replicating the border pixel outside the image.
    double at_clamped(int x, int y) const {
        x = std::clamp(x, 0, width - 1);
        y = std::clamp(y, 0, height - 1);
        return at(x, y);
    }
};

/// BT.601 luminance, Y = 0.299 R + 0.587 G + 0.114 B. Evaluated as an exact
/// integer numerator over 1000 so that e.g. pure white maps to 255.0 exactly.
inline LumaPlane to_luminance(const RgbFrame& frame) {
    frame.check();
    LumaPlane luma{frame.width, frame.height, {}};
    luma.values.resize(frame.pixel_count());
    const std::uint8_t* p = frame.data.data();
    for (std::size_t i = 0; i < luma.values.size(); ++i, p += 3) {
        const double num = 299.0 * p[0] + 587.0 * p[1] + 114.0 * p[2];
        luma.values[i] = num / 1000.0;
    }
    return luma;
}

/// Bilinear resize with half-pixel centers: src = (dst + 0.5) * scale - 0.5,
/// clamped to the source rectangle. Equal sizes copy values unchanged.
inline LumaPlane bilinear_resize(const LumaPlane& src, int out_width, int out_height) {
    require(out_width >= 1 && out_height >= 1, "bilinear_resize: empty output");
    require(src.width >= 1 && src.height >= 1, "bilinear_resize: empty input");
    LumaPlane out{out_width, out_height, std::vector<double>(static_cast<std::size_t>(out_width) * out_height)};
    const double sx = static_cast<double>(src.width) / out_width;
    const double sy = static_cast<double>(src.height) / out_height;
    for (int y = 0; y < out_height; ++y) {
        double fy = std::clamp((y + 0.5) * sy - 0.5, 0.0, static_cast<double>(src.height - 1));
        int y0 = static_cast<int>(fy);
        int y1 = std::min(y0 + 1, src.height - 1);
        double wy = fy - y0;
        for (int x = 0; x < out_width; ++x) {
            double fx = std::clamp((x + 0.5) * sx - 0.5, 0.0, static_cast<double>(src.width - 1));
            int x0 = static_cast<int>(fx);
            int x1 = std::min(x0 + 1, src.width - 1);
            double wx = fx - x0;
            double top = (1.0 - wx) * src.at(x0, y0) + wx * src.at(x1, y0);
            double bot = (1.0 - wx) * src.at(x0, y1) + wx * src.at(x1, y1);
            out.at(x, y) = (1.0 - wy) * top + wy * bot;
        }
    }
    return out;
}

}  // namespace dfd
