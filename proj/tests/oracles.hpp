#pragma once

// Brute-force reference implementations used only by the tests. Everything
// here re-derives the documented formulas with naive loops; none of it calls
// the library's computation paths it is checking against.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <random>
#include <set>
#include <vector>

#include "dfd/image.hpp"
#include "dfd/metrics.hpp"

namespace oracle {

// ---------------------------------------------------------------- images

inline dfd::RgbFrame random_frame(int w, int h, std::mt19937& rng) {
    dfd::RgbFrame f{w, h, {}};
    f.data.resize(static_cast<std::size_t>(3) * w * h);
    std::uniform_int_distribution<int> byte(0, 255);
    for (auto& b : f.data) b = static_cast<std::uint8_t>(byte(rng));
    return f;
}

// Smooth textured frame: random frames stress ties, these stress structure.
inline dfd::RgbFrame textured_frame(int w, int h, std::mt19937& rng) {
    std::uniform_real_distribution<double> u(0.0, 2.0 * M_PI);
    std::uniform_real_distribution<double> freq(0.05, 0.45);
    const double fx1 = freq(rng), fy1 = freq(rng), p1 = u(rng);
    const double fx2 = freq(rng), fy2 = freq(rng), p2 = u(rng);
    dfd::RgbFrame f{w, h, {}};
    f.data.resize(static_cast<std::size_t>(3) * w * h);
    std::size_t i = 0;
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const double a = std::sin(fx1 * x + fy1 * y + p1);
            const double b = std::cos(fx2 * x - fy2 * y + p2);
            f.data[i++] = static_cast<std::uint8_t>(127.5 + 90.0 * a + 30.0 * b);
            f.data[i++] = static_cast<std::uint8_t>(127.5 + 70.0 * b - 40.0 * a);
            f.data[i++] = static_cast<std::uint8_t>(127.5 + 50.0 * a * b);
        }
    return f;
}

inline dfd::LumaPlane random_luma(int w, int h, std::mt19937& rng) {
    std::uniform_real_distribution<double> u(0.0, 255.0);
    dfd::LumaPlane p{w, h, {}};
    p.values.resize(static_cast<std::size_t>(w) * h);
    for (auto& v : p.values) v = u(rng);
    return p;
}

// Same definition as the library's luminance (exact integer numerator so the
// binary-threshold measures see identical values).
inline dfd::LumaPlane luminance(const dfd::RgbFrame& f) {
    dfd::LumaPlane p{f.width, f.height, {}};
    p.values.resize(f.pixel_count());
    for (std::size_t i = 0; i < p.values.size(); ++i) {
        const std::uint8_t* px = f.data.data() + 3 * i;
        p.values[i] = (299.0 * px[0] + 587.0 * px[1] + 114.0 * px[2]) / 1000.0;
    }
    return p;
}

inline double at_rep(const dfd::LumaPlane& img, int x, int y) {
    x = std::max(0, std::min(x, img.width - 1));
    y = std::max(0, std::min(y, img.height - 1));
    return img.values[static_cast<std::size_t>(y) * img.width + x];
}

// Plain replicate-border 3x3 convolution.
inline dfd::LumaPlane conv3x3(const dfd::LumaPlane& img, const std::array<double, 9>& k,
                              bool clamp_255) {
    dfd::LumaPlane out{img.width, img.height,
                       std::vector<double>(static_cast<std::size_t>(img.width) * img.height)};
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x) {
            double s = 0.0;
            for (int dy = -1; dy <= 1; ++dy)
                for (int dx = -1; dx <= 1; ++dx)
                    s += k[(dy + 1) * 3 + (dx + 1)] * at_rep(img, x + dx, y + dy);
            if (clamp_255) s = std::max(0.0, std::min(255.0, s));
            out.values[static_cast<std::size_t>(y) * img.width + x] = s;
        }
    return out;
}

inline std::array<double, 9> gaussian_kernel_sigma_half() {
    std::array<double, 9> k{};
    double sum = 0.0;
    for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx) {
            k[(dy + 1) * 3 + (dx + 1)] = std::exp(-2.0 * (dx * dx + dy * dy));
            sum += k[(dy + 1) * 3 + (dx + 1)];
        }
    for (double& v : k) v /= sum;
    return k;
}

inline dfd::LumaPlane blur_reference(const dfd::LumaPlane& img) {
    return conv3x3(img, gaussian_kernel_sigma_half(), true);
}

struct Gradients {
    std::vector<double> gx, gy;
};

inline Gradients sobel_naive(const dfd::LumaPlane& img) {
    Gradients g;
    g.gx.resize(img.values.size());
    g.gy.resize(img.values.size());
    static const int kx[3][3] = {{-1, 0, 1}, {-2, 0, 2}, {-1, 0, 1}};
    static const int ky[3][3] = {{-1, -2, -1}, {0, 0, 0}, {1, 2, 1}};
    std::size_t i = 0;
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x, ++i) {
            double sx = 0.0, sy = 0.0;
            for (int dy = -1; dy <= 1; ++dy)
                for (int dx = -1; dx <= 1; ++dx) {
                    const double v = at_rep(img, x + dx, y + dy);
                    sx += kx[dy + 1][dx + 1] * v;
                    sy += ky[dy + 1][dx + 1] * v;
                }
            g.gx[i] = sx;
            g.gy[i] = sy;
        }
    return g;
}

// Direct O(N^4) unnormalized 2D DFT.
inline std::vector<std::complex<double>> dft_direct(const dfd::LumaPlane& img) {
    const int w = img.width, h = img.height;
    std::vector<std::complex<double>> out(static_cast<std::size_t>(w) * h);
    for (int v = 0; v < h; ++v)
        for (int u = 0; u < w; ++u) {
            std::complex<double> acc{0.0, 0.0};
            for (int y = 0; y < h; ++y)
                for (int x = 0; x < w; ++x) {
                    const double ang =
                        -2.0 * M_PI * (static_cast<double>(u) * x / w + static_cast<double>(v) * y / h);
                    acc += img.values[static_cast<std::size_t>(y) * w + x] *
                           std::complex<double>(std::cos(ang), std::sin(ang));
                }
            out[static_cast<std::size_t>(v) * w + u] = acc;
        }
    return out;
}

inline double wrap_pi(double x) {
    while (x > M_PI) x -= 2.0 * M_PI;
    while (x <= -M_PI) x += 2.0 * M_PI;
    return x;
}

// ------------------------------------------------- full-reference measures

inline std::vector<double> laplacian4_interior(const dfd::LumaPlane& img) {
    std::vector<double> out;
    for (int y = 1; y + 1 < img.height; ++y)
        for (int x = 1; x + 1 < img.width; ++x)
            out.push_back(at_rep(img, x - 1, y) + at_rep(img, x + 1, y) + at_rep(img, x, y - 1) +
                          at_rep(img, x, y + 1) - 4.0 * at_rep(img, x, y));
    return out;
}

inline std::array<double, 16> full_reference(const dfd::LumaPlane& I, const dfd::LumaPlane& R) {
    const double eps = 1e-10;
    const std::size_t n = I.values.size();
    const double dn = static_cast<double>(n);

    double sq_diff = 0.0, diff_sum = 0.0, abs_diff_sum = 0.0, md = 0.0;
    double sq_i = 0.0, sq_r = 0.0, abs_i = 0.0, prod = 0.0;
    std::vector<double> diffs;
    for (std::size_t k = 0; k < n; ++k) {
        const double a = I.values[k], b = R.values[k], d = a - b;
        sq_diff += d * d;
        diff_sum += d;
        abs_diff_sum += std::fabs(d);
        md = std::max(md, std::fabs(d));
        sq_i += a * a;
        sq_r += b * b;
        abs_i += std::fabs(a);
        prod += a * b;
        diffs.push_back(std::fabs(d));
    }
    const double mse = sq_diff / dn;
    const double psnr = 10.0 * std::log10(255.0 * 255.0 / std::max(mse, eps));
    const double snr = 10.0 * std::log10(std::max(sq_i, eps) / std::max(dn * mse, eps));
    const double sc = sq_i / (sq_r + eps);
    const double ad = diff_sum / dn;
    const double nae = abs_diff_sum / (abs_i + eps);
    std::sort(diffs.rbegin(), diffs.rend());
    const std::size_t top = std::min<std::size_t>(10, n);
    double ramd = 0.0;
    for (std::size_t k = 0; k < top; ++k) ramd += diffs[k];
    ramd /= static_cast<double>(top);

    const std::vector<double> li = laplacian4_interior(I);
    const std::vector<double> lr = laplacian4_interior(R);
    double lnum = 0.0, lden = 0.0;
    for (std::size_t k = 0; k < li.size(); ++k) {
        lnum += (li[k] - lr[k]) * (li[k] - lr[k]);
        lden += li[k] * li[k];
    }
    const double lmse = lnum / (lden + eps);
    const double nxc = prod / (sq_i + eps);

    double ted = 0.0, gme = 0.0, gpe = 0.0;
    if (I.width >= 3 && I.height >= 3) {
        const Gradients gi = sobel_naive(I);
        const Gradients gr = sobel_naive(R);
        std::vector<double> mi(n), mr(n);
        double max_i = 0.0, max_r = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            mi[k] = std::sqrt(gi.gx[k] * gi.gx[k] + gi.gy[k] * gi.gy[k]);
            mr[k] = std::sqrt(gr.gx[k] * gr.gx[k] + gr.gy[k] * gr.gy[k]);
            max_i = std::max(max_i, mi[k]);
            max_r = std::max(max_r, mr[k]);
        }
        for (std::size_t k = 0; k < n; ++k) {
            const bool ei = mi[k] > 0.1 * max_i;
            const bool er = mr[k] > 0.1 * max_r;
            if (ei != er) ted += 1.0;
            gme += (mi[k] - mr[k]) * (mi[k] - mr[k]);
            const double dp = wrap_pi(std::atan2(gi.gy[k], gi.gx[k]) - std::atan2(gr.gy[k], gr.gx[k]));
            gpe += dp * dp;
        }
        ted /= dn;
        gme /= dn;
        gpe /= dn;
    }

    const auto fi = dft_direct(I);
    const auto fr = dft_direct(R);
    double sme = 0.0, spe = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double dm = std::abs(fi[k]) - std::abs(fr[k]);
        sme += dm * dm;
        const double dp = wrap_pi(std::arg(fi[k]) - std::arg(fr[k]));
        spe += dp * dp;
    }
    sme /= dn;
    spe /= dn;

    // Local SSIM, 11x11 Gaussian window sigma 1.5, replicate border.
    double ssim_total = 0.0;
    {
        const double c1 = 6.5025, c2 = 58.5225;  // (0.01*255)^2, (0.03*255)^2
        double wsum = 0.0;
        double win[11][11];
        for (int dy = -5; dy <= 5; ++dy)
            for (int dx = -5; dx <= 5; ++dx) {
                win[dy + 5][dx + 5] = std::exp(-(dx * dx + dy * dy) / 4.5);
                wsum += win[dy + 5][dx + 5];
            }
        for (auto& row : win)
            for (double& v : row) v /= wsum;
        for (int y = 0; y < I.height; ++y)
            for (int x = 0; x < I.width; ++x) {
                double mx = 0.0, my = 0.0, xx = 0.0, yy = 0.0, xy = 0.0;
                for (int dy = -5; dy <= 5; ++dy)
                    for (int dx = -5; dx <= 5; ++dx) {
                        const double w = win[dy + 5][dx + 5];
                        const double a = at_rep(I, x + dx, y + dy);
                        const double b = at_rep(R, x + dx, y + dy);
                        mx += w * a;
                        my += w * b;
                        xx += w * a * a;
                        yy += w * b * b;
                        xy += w * a * b;
                    }
                ssim_total += ((2.0 * mx * my + c1) * (2.0 * (xy - mx * my) + c2)) /
                              ((mx * mx + my * my + c1) * ((xx - mx * mx) + (yy - my * my) + c2));
            }
        ssim_total /= dn;
    }

    return {mse, psnr, snr, sc, md, ad, nae, ramd, lmse, nxc, ted, sme, spe, gme, gpe, ssim_total};
}

// -------------------------------------------------- no-reference measures

inline std::array<double, 10> no_reference(const dfd::RgbFrame& frame) {
    const dfd::LumaPlane luma = luminance(frame);
    const std::size_t n = luma.values.size();
    const double dn = static_cast<double>(n);

    double lapvar = 0.0;
    {
        const std::vector<double> lap = laplacian4_interior(luma);
        if (!lap.empty()) {
            double mean = 0.0;
            for (double v : lap) mean += v;
            mean /= static_cast<double>(lap.size());
            for (double v : lap) lapvar += (v - mean) * (v - mean);
            lapvar /= static_cast<double>(lap.size());
        }
    }

    double edge_width = 0.0;
    if (luma.width >= 3 && luma.height >= 3) {
        const Gradients g = sobel_naive(luma);
        double gx_max = 0.0;
        for (double v : g.gx) gx_max = std::max(gx_max, std::fabs(v));
        if (gx_max > 0.0) {
            double total = 0.0;
            long count = 0;
            for (int y = 0; y < luma.height; ++y) {
                auto is_extremum = [&](int x) {
                    if (x == 0 || x == luma.width - 1) return true;
                    const double d1 = at_rep(luma, x, y) - at_rep(luma, x - 1, y);
                    const double d2 = at_rep(luma, x + 1, y) - at_rep(luma, x, y);
                    return d1 * d2 <= 0.0;
                };
                for (int x = 0; x < luma.width; ++x) {
                    if (std::fabs(g.gx[static_cast<std::size_t>(y) * luma.width + x]) <=
                        0.2 * gx_max)
                        continue;
                    int left = x - 1;
                    while (left > 0 && !is_extremum(left)) --left;
                    if (left < 0) left = 0;
                    int right = x + 1;
                    while (right < luma.width - 1 && !is_extremum(right)) ++right;
                    if (right > luma.width - 1) right = luma.width - 1;
                    total += right - left;
                    ++count;
                }
            }
            if (count > 0) edge_width = total / count;
        }
    }

    double specular = 0.0;
    std::vector<double> hue(n), sat(n);
    std::set<int> color_bins;
    for (std::size_t i = 0; i < n; ++i) {
        const std::uint8_t r = frame.data[3 * i], g = frame.data[3 * i + 1],
                           b = frame.data[3 * i + 2];
        const int hi = std::max(r, std::max(g, b));
        const int lo = std::min(r, std::min(g, b));
        double h = 0.0;
        if (hi != lo) {
            const double c = hi - lo;
            if (hi == r) h = std::fmod((g - b) / c + 6.0, 6.0) / 6.0;
            else if (hi == g) h = ((b - r) / c + 2.0) / 6.0;
            else h = ((r - g) / c + 4.0) / 6.0;
        }
        hue[i] = h;
        sat[i] = hi == 0 ? 0.0 : static_cast<double>(hi - lo) / hi;
        if (luma.values[i] >= 0.95 * 255.0 && sat[i] <= 0.1) specular += 1.0;
        color_bins.insert(((r >> 3) << 10) | ((g >> 3) << 5) | (b >> 3));
    }
    specular /= dn;
    const double diversity =
        static_cast<double>(color_bins.size()) / static_cast<double>(std::min<std::size_t>(n, 32768));

    auto moments = [](const std::vector<double>& v) {
        const double n2 = static_cast<double>(v.size());
        double mean = 0.0;
        for (double x : v) mean += x;
        mean /= n2;
        double m2 = 0.0, m3 = 0.0;
        for (double x : v) {
            m2 += (x - mean) * (x - mean);
            m3 += (x - mean) * (x - mean) * (x - mean);
        }
        m2 /= n2;
        m3 /= n2;
        const double stddev = std::sqrt(m2);
        const double skew = m2 <= 1e-24 ? 0.0 : m3 / (m2 * stddev);
        return std::array<double, 3>{mean, stddev, skew};
    };
    const auto hm = moments(hue);
    const auto sm = moments(sat);

    return {lapvar, edge_width, specular, hm[0], hm[1], hm[2], sm[0], sm[1], sm[2], diversity};
}

inline std::array<double, 26> iqm_vector(const dfd::RgbFrame& frame) {
    const dfd::LumaPlane luma = luminance(frame);
    const dfd::LumaPlane ref = blur_reference(luma);
    const auto fr = full_reference(luma, ref);
    const auto nr = no_reference(frame);
    std::array<double, 26> out{};
    std::copy(fr.begin(), fr.end(), out.begin());
    std::copy(nr.begin(), nr.end(), out.begin() + 16);
    return out;
}

// ------------------------------------------------------- detection metrics

struct CountMetrics {
    static double far_at(const std::vector<double>& genuine, const std::vector<double>& attack,
                         double theta) {
        long c = 0;
        for (double s : attack)
            if (s >= theta) ++c;
        return static_cast<double>(c) / static_cast<double>(attack.size());
    }
    static double frr_at(const std::vector<double>& genuine, const std::vector<double>& attack,
                         double theta) {
        long c = 0;
        for (double s : genuine)
            if (s < theta) ++c;
        return static_cast<double>(c) / static_cast<double>(genuine.size());
    }
    static std::vector<double> candidates(const std::vector<double>& genuine,
                                          const std::vector<double>& attack) {
        std::set<double> u(genuine.begin(), genuine.end());
        u.insert(attack.begin(), attack.end());
        std::vector<double> c;
        c.push_back(-std::numeric_limits<double>::infinity());
        c.insert(c.end(), u.begin(), u.end());
        c.push_back(std::numeric_limits<double>::infinity());
        return c;
    }
    // Best achievable max(FAR, FRR) over every candidate threshold.
    static double min_max_error(const std::vector<double>& genuine,
                                const std::vector<double>& attack) {
        double best = 1.0;
        for (double theta : candidates(genuine, attack))
            best = std::min(best, std::max(far_at(genuine, attack, theta),
                                           frr_at(genuine, attack, theta)));
        return best;
    }
    static double frr_at_far(const std::vector<double>& genuine, const std::vector<double>& attack,
                             double target) {
        for (double theta : candidates(genuine, attack))
            if (far_at(genuine, attack, theta) <= target) return frr_at(genuine, attack, theta);
        return 1.0;
    }
};

// ------------------------------------------------------ svm grid oracle

struct SvmGridResult {
    double w1 = 0.0, w2 = 0.0, b = 0.0;
    double objective = 0.0;
};

inline double svm_primal_2d(const std::vector<std::array<double, 2>>& x,
                            const std::vector<int>& y, double c, double w1, double w2, double b) {
    double obj = 0.5 * (w1 * w1 + w2 * w2);
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double margin = 1.0 - y[i] * (w1 * x[i][0] + w2 * x[i][1] + b);
        if (margin > 0.0) obj += c * margin;
    }
    return obj;
}

// Shrinking grid search over (w1, w2, b) of the primal objective.
inline SvmGridResult svm_grid_search(const std::vector<std::array<double, 2>>& x,
                                     const std::vector<int>& y, double c) {
    SvmGridResult best;
    best.objective = svm_primal_2d(x, y, c, 0.0, 0.0, 0.0);
    double range = 6.0;
    for (int stage = 0; stage < 8; ++stage) {
        const SvmGridResult center = best;
        const int steps = 12;
        for (int i = -steps; i <= steps; ++i)
            for (int j = -steps; j <= steps; ++j)
                for (int k = -steps; k <= steps; ++k) {
                    const double w1 = center.w1 + range * i / steps;
                    const double w2 = center.w2 + range * j / steps;
                    const double b = center.b + range * k / steps;
                    const double obj = svm_primal_2d(x, y, c, w1, w2, b);
                    if (obj < best.objective) best = {w1, w2, b, obj};
                }
        range *= 0.25;
    }
    return best;
}

}  // namespace oracle
