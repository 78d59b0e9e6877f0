#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "dfd/common.hpp"
#include "dfd/image.hpp"

namespace dfd {

/// Unnormalized 2D DFT of a real plane:
///   F(v,u) = sum_y sum_x f(y,x) * exp(-2*pi*i*(u*x/W + v*y/H))
/// stored row-major with v over rows. Computed by the row-column
/// factorization, which is exact and keeps desk-scale images cheap.
struct Spectrum {
    int width = 0;   // frequency bins along u
    int height = 0;  // frequency bins along v
    std::vector<std::complex<double>> bins;

    const std::complex<double>& at(int u, int v) const {
        return bins[static_cast<std::size_t>(v) * width + u];
    }
};

inline Spectrum dft2d(const LumaPlane& img) {
    const int w = img.width, h = img.height;
    require(w >= 1 && h >= 1, "dft2d: empty image");
    std::vector<std::complex<double>> tw(static_cast<std::size_t>(w) * w);
    for (int u = 0; u < w; ++u)
        for (int x = 0; x < w; ++x) {
            double ang = -2.0 * M_PI * (static_cast<double>(u) * x / w);
            tw[static_cast<std::size_t>(u) * w + x] = {std::cos(ang), std::sin(ang)};
        }
    // rows: x -> u
    std::vector<std::complex<double>> rows(static_cast<std::size_t>(w) * h);
    for (int y = 0; y < h; ++y)
        for (int u = 0; u < w; ++u) {
            std::complex<double> acc{0.0, 0.0};
            for (int x = 0; x < w; ++x)
                acc += img.at(x, y) * tw[static_cast<std::size_t>(u) * w + x];
            rows[static_cast<std::size_t>(y) * w + u] = acc;
        }
    std::vector<std::complex<double>> th(static_cast<std::size_t>(h) * h);
    for (int v = 0; v < h; ++v)
        for (int y = 0; y < h; ++y) {
            double ang = -2.0 * M_PI * (static_cast<double>(v) * y / h);
            th[static_cast<std::size_t>(v) * h + y] = {std::cos(ang), std::sin(ang)};
        }
    // columns: y -> v
    Spectrum spec{w, h, std::vector<std::complex<double>>(static_cast<std::size_t>(w) * h)};
    for (int u = 0; u < w; ++u)
        for (int v = 0; v < h; ++v) {
            std::complex<double> acc{0.0, 0.0};
            for (int y = 0; y < h; ++y)
                acc += rows[static_cast<std::size_t>(y) * w + u] * th[static_cast<std::size_t>(v) * h + y];
            spec.bins[static_cast<std::size_t>(v) * w + u] = acc;
        }
    return spec;
}

}  // namespace dfd
