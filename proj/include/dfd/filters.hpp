#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "dfd/common.hpp"
#include "dfd/image.hpp"

namespace dfd {

/// Row-major Sobel responses of a luminance plane.
struct GradientField {
    int width = 0;
    int height = 0;
    std::vector<double> gx;
    std::vector<double> gy;

    double magnitude_at(std::size_t i) const { return std::sqrt(gx[i] * gx[i] + gy[i] * gy[i]); }
    double orientation_at(std::size_t i) const { return std::atan2(gy[i], gx[i]); }
};

namespace detail {

// Normalized 3x3 Gaussian, sigma = 0.5.
inline const std::array<double, 9>& gaussian3x3_kernel() {
    static const std::array<double, 9> k = [] {
        std::array<double, 9> w{};
        double sum = 0.0;
        for (int dy = -1; dy <= 1; ++dy)
            for (int dx = -1; dx <= 1; ++dx) {
                double v = std::exp(-(dx * dx + dy * dy) / (2.0 * 0.5 * 0.5));
                w[(dy + 1) * 3 + (dx + 1)] = v;
                sum += v;
            }
        for (double& v : w) v /= sum;
        return w;
    }();
    return k;
}

}  // namespace detail

/// Blurred self-reference used by the full-reference quality measures:
/// 3x3 Gaussian, sigma 0.5, replicate border. Evaluated in centered form
/// (center + sum of w * (neighbor - center)) so constant regions pass
/// through bit-exactly; output is clamped back into [0, 255].
inline LumaPlane gaussian_reference(const LumaPlane& img) {
    require(img.width >= 1 && img.height >= 1, "gaussian_reference: empty image");
    const auto& k = detail::gaussian3x3_kernel();
    LumaPlane out{img.width, img.height,
                  std::vector<double>(static_cast<std::size_t>(img.width) * img.height)};
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            const double c = img.at(x, y);
            double acc = 0.0;
            for (int dy = -1; dy <= 1; ++dy)
                for (int dx = -1; dx <= 1; ++dx)
                    acc += k[(dy + 1) * 3 + (dx + 1)] * (img.at_clamped(x + dx, y + dy) - c);
            out.at(x, y) = std::clamp(c + acc, 0.0, 255.0);
        }
    }
    return out;
}

/// 3x3 Sobel operator, replicate border. gx responds to horizontal change
/// (kernel [-1,0,1; -2,0,2; -1,0,1]), gy is its transpose.
inline GradientField sobel(const LumaPlane& img) {
    require(img.width >= 3 && img.height >= 3, "sobel: image smaller than 3x3");
    GradientField g{img.width, img.height,
                    std::vector<double>(static_cast<std::size_t>(img.width) * img.height),
                    std::vector<double>(static_cast<std::size_t>(img.width) * img.height)};
    std::size_t i = 0;
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x, ++i) {
            const double a = img.at_clamped(x - 1, y - 1), b = img.at_clamped(x, y - 1),
                         c = img.at_clamped(x + 1, y - 1);
            const double d = img.at_clamped(x - 1, y), f = img.at_clamped(x + 1, y);
            const double p = img.at_clamped(x - 1, y + 1), q = img.at_clamped(x, y + 1),
                         r = img.at_clamped(x + 1, y + 1);
            g.gx[i] = (c + 2.0 * f + r) - (a + 2.0 * d + p);
            g.gy[i] = (p + 2.0 * q + r) - (a + 2.0 * b + c);
        }
    }
    return g;
}

/// 4-neighbor Laplacian over interior pixels:
/// L(x,y) = I(x-1,y) + I(x+1,y) + I(x,y-1) + I(x,y+1) - 4 I(x,y).
/// Returns a (width-2) x (height-2) plane; empty when there is no interior.
inline std::vector<double> laplacian_interior(const LumaPlane& img) {
    if (img.width < 3 || img.height < 3) return {};
    std::vector<double> lap;
    lap.reserve(static_cast<std::size_t>(img.width - 2) * (img.height - 2));
    for (int y = 1; y + 1 < img.height; ++y)
        for (int x = 1; x + 1 < img.width; ++x)
            lap.push_back(img.at(x - 1, y) + img.at(x + 1, y) + img.at(x, y - 1) +
                          img.at(x, y + 1) - 4.0 * img.at(x, y));
    return lap;
}

}  // namespace dfd
