#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "dfd/common.hpp"
#include "dfd/dft.hpp"
#include "dfd/filters.hpp"
#include "dfd/image.hpp"

namespace dfd {

inline constexpr int kIqmSchemaVersion = 1;
inline constexpr int kIqmDimensions = 26;

/// Schema order of the quality vector. The first 16 are full-reference
/// measures of the luminance against its blurred self-reference, the last
/// 10 are no-reference color/blur measures of the frame itself.
inline constexpr std::array<const char*, kIqmDimensions> kIqmMeasureNames = {
    "MSE",  "PSNR", "SNR",  "SC",   "MD",   "AD",   "NAE",  "RAMD", "LMSE",
    "NXC",  "TED",  "SME",  "SPE",  "GME",  "GPE",  "SSIM", "BLUR_LAPVAR",
    "BLUR_EDGEWIDTH", "SPECULARITY", "HUE_MEAN", "HUE_STD", "HUE_SKEW",
    "SAT_MEAN", "SAT_STD", "SAT_SKEW", "COLOR_DIVERSITY"};

/// Fixed-order vector of image-quality measures for one frame.
struct QualityVector {
    int schema_version = kIqmSchemaVersion;
    std::array<double, kIqmDimensions> values{};
};

// Schema constants. These are part of the feature definition, not tuning knobs.
inline constexpr double kTedEdgeThreshold = 0.1;        // fraction of max gradient magnitude
inline constexpr double kEdgeWidthThreshold = 0.2;      // fraction of max |gx|
inline constexpr double kSpecularLumaFloor = 0.95 * 255.0;
inline constexpr double kSpecularSaturationCeil = 0.1;
inline constexpr double kZeroVarianceGuard = 1e-24;     // on the second central moment
inline constexpr int kColorQuantBits = 5;
inline constexpr int kColorQuantBins = 1 << (3 * kColorQuantBits);

namespace detail {

struct Moments {
    double mean = 0.0, stddev = 0.0, skewness = 0.0;
};

// Population moments; skewness of a (numerically) constant channel is 0.
inline Moments channel_moments(const std::vector<double>& v) {
    Moments m;
    const double n = static_cast<double>(v.size());
    double sum = 0.0;
    for (double x : v) sum += x;
    m.mean = sum / n;
    double m2 = 0.0, m3 = 0.0;
    for (double x : v) {
        const double d = x - m.mean;
        m2 += d * d;
        m3 += d * d * d;
    }
    m2 /= n;
    m3 /= n;
    m.stddev = std::sqrt(m2);
    m.skewness = m2 <= kZeroVarianceGuard ? 0.0 : m3 / (m2 * std::sqrt(m2));
    return m;
}

// HSV hue scaled to [0,1); 0 for achromatic pixels. Ties for the channel
// maximum resolve in R, G, B order.
inline double hue01(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    const int M = std::max({r, g, b});
    const int m = std::min({r, g, b});
    const int c = M - m;
    if (c == 0) return 0.0;
    double hp;
    if (M == r) {
        hp = static_cast<double>(g - b) / c;
        if (hp < 0.0) hp += 6.0;
    } else if (M == g) {
        hp = static_cast<double>(b - r) / c + 2.0;
    } else {
        hp = static_cast<double>(r - g) / c + 4.0;
    }
    return hp / 6.0;
}

inline double saturation(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    const int M = std::max({r, g, b});
    if (M == 0) return 0.0;
    const int m = std::min({r, g, b});
    return static_cast<double>(M - m) / M;
}

// Binary edge map: gradient magnitude strictly above frac * max magnitude.
// A flat image (max magnitude 0) has no edges.
inline std::vector<bool> edge_map(const GradientField& g, double frac) {
    const std::size_t n = g.gx.size();
    double max_mag = 0.0;
    std::vector<double> mag(n);
    for (std::size_t i = 0; i < n; ++i) {
        mag[i] = g.magnitude_at(i);
        max_mag = std::max(max_mag, mag[i]);
    }
    const double threshold = frac * max_mag;
    std::vector<bool> edges(n);
    for (std::size_t i = 0; i < n; ++i) edges[i] = mag[i] > threshold;
    return edges;
}

// Mean local SSIM, 11x11 Gaussian window sigma 1.5, replicate border,
// C1 = (0.01*255)^2, C2 = (0.03*255)^2.
inline double ssim(const LumaPlane& a, const LumaPlane& b) {
    constexpr int half = 5;
    constexpr double c1 = (0.01 * 255.0) * (0.01 * 255.0);
    constexpr double c2 = (0.03 * 255.0) * (0.03 * 255.0);
    static const std::array<double, 121> window = [] {
        std::array<double, 121> w{};
        double sum = 0.0;
        for (int dy = -half; dy <= half; ++dy)
            for (int dx = -half; dx <= half; ++dx) {
                double v = std::exp(-(dx * dx + dy * dy) / (2.0 * 1.5 * 1.5));
                w[(dy + half) * 11 + (dx + half)] = v;
                sum += v;
            }
        for (double& v : w) v /= sum;
        return w;
    }();

    double total = 0.0;
    for (int y = 0; y < a.height; ++y) {
        for (int x = 0; x < a.width; ++x) {
            double mx = 0.0, my = 0.0, sxx = 0.0, syy = 0.0, sxy = 0.0;
            for (int dy = -half; dy <= half; ++dy)
                for (int dx = -half; dx <= half; ++dx) {
                    const double w = window[(dy + half) * 11 + (dx + half)];
                    const double va = a.at_clamped(x + dx, y + dy);
                    const double vb = b.at_clamped(x + dx, y + dy);
                    mx += w * va;
                    my += w * vb;
                    sxx += w * va * va;
                    syy += w * vb * vb;
                    sxy += w * va * vb;
                }
            const double vx = sxx - mx * mx;
            const double vy = syy - my * my;
            const double cxy = sxy - mx * my;
            total += ((2.0 * mx * my + c1) * (2.0 * cxy + c2)) /
                     ((mx * mx + my * my + c1) * (vx + vy + c2));
        }
    }
    return total / (static_cast<double>(a.width) * a.height);
}

}  // namespace detail

/// The 16 full-reference measures (schema slots MSE..SSIM) of a luminance
/// plane I against a reference R of the same size. Gradient-based measures
/// (TED, GME, GPE) are 0 for images smaller than 3x3, where the Sobel
/// operator is undefined.
inline std::array<double, 16> full_reference_measures(const LumaPlane& I, const LumaPlane& R) {
    require(I.width == R.width && I.height == R.height,
            "full_reference_measures: dimension mismatch");
    require(I.width >= 1 && I.height >= 1, "full_reference_measures: empty image");
    const std::size_t n = I.values.size();
    const double dn = static_cast<double>(n);

    double sum_sq_diff = 0.0, sum_diff = 0.0, sum_abs_diff = 0.0, max_abs_diff = 0.0;
    double sum_sq_i = 0.0, sum_sq_r = 0.0, sum_abs_i = 0.0, sum_ir = 0.0;
    std::vector<double> abs_diffs(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double a = I.values[k], b = R.values[k];
        const double d = a - b;
        sum_sq_diff += d * d;
        sum_diff += d;
        const double ad = std::fabs(d);
        abs_diffs[k] = ad;
        sum_abs_diff += ad;
        max_abs_diff = std::max(max_abs_diff, ad);
        sum_sq_i += a * a;
        sum_sq_r += b * b;
        sum_abs_i += std::fabs(a);
        sum_ir += a * b;
    }

    const double mse = sum_sq_diff / dn;
    const double psnr = 10.0 * std::log10(255.0 * 255.0 / std::max(mse, kEpsilon));
    const double snr =
        10.0 * std::log10(std::max(sum_sq_i, kEpsilon) / std::max(dn * mse, kEpsilon));
    const double sc = sum_sq_i / (sum_sq_r + kEpsilon);
    const double ad_mean = sum_diff / dn;
    const double nae = sum_abs_diff / (sum_abs_i + kEpsilon);

    const std::size_t top = std::min<std::size_t>(10, n);
    std::partial_sort(abs_diffs.begin(), abs_diffs.begin() + top, abs_diffs.end(),
                      std::greater<double>());
    double ramd = 0.0;
    for (std::size_t k = 0; k < top; ++k) ramd += abs_diffs[k];
    ramd /= static_cast<double>(top);

    const std::vector<double> lap_i = laplacian_interior(I);
    const std::vector<double> lap_r = laplacian_interior(R);
    double lmse_num = 0.0, lmse_den = 0.0;
    for (std::size_t k = 0; k < lap_i.size(); ++k) {
        const double d = lap_i[k] - lap_r[k];
        lmse_num += d * d;
        lmse_den += lap_i[k] * lap_i[k];
    }
    const double lmse = lmse_num / (lmse_den + kEpsilon);

    const double nxc = sum_ir / (sum_sq_i + kEpsilon);

    double ted = 0.0, gme = 0.0, gpe = 0.0;
    if (I.width >= 3 && I.height >= 3) {
        const GradientField gi = sobel(I);
        const GradientField gr = sobel(R);
        const std::vector<bool> ei = detail::edge_map(gi, kTedEdgeThreshold);
        const std::vector<bool> er = detail::edge_map(gr, kTedEdgeThreshold);
        std::size_t mismatches = 0;
        for (std::size_t k = 0; k < n; ++k) {
            if (ei[k] != er[k]) ++mismatches;
            const double dm = gi.magnitude_at(k) - gr.magnitude_at(k);
            gme += dm * dm;
            const double dp = wrap_angle(gi.orientation_at(k) - gr.orientation_at(k));
            gpe += dp * dp;
        }
        ted = static_cast<double>(mismatches) / dn;
        gme /= dn;
        gpe /= dn;
    }

    const Spectrum fi = dft2d(I);
    const Spectrum fr = dft2d(R);
    double sme = 0.0, spe = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double mi = std::abs(fi.bins[k]);
        const double mr = std::abs(fr.bins[k]);
        sme += (mi - mr) * (mi - mr);
        const double dp = wrap_angle(std::arg(fi.bins[k]) - std::arg(fr.bins[k]));
        spe += dp * dp;
    }
    sme /= dn;
    spe /= dn;

    const double ssim_value = detail::ssim(I, R);

    return {mse, psnr, snr,  sc,  max_abs_diff, ad_mean, nae, ramd,
            lmse, nxc, ted, sme, spe, gme, gpe, ssim_value};
}

/// The 10 no-reference measures (schema slots BLUR_LAPVAR..COLOR_DIVERSITY).
/// Gradient-dependent BLUR_EDGEWIDTH is 0 for images smaller than 3x3.
inline std::array<double, 10> no_reference_measures(const RgbFrame& frame) {
    frame.check();
    const LumaPlane luma = to_luminance(frame);
    const std::size_t n = luma.values.size();
    const double dn = static_cast<double>(n);

    // Variance of the interior 4-neighbor Laplacian.
    double blur_lapvar = 0.0;
    {
        const std::vector<double> lap = laplacian_interior(luma);
        if (!lap.empty()) {
            double mean = 0.0;
            for (double v : lap) mean += v;
            mean /= static_cast<double>(lap.size());
            for (double v : lap) blur_lapvar += (v - mean) * (v - mean);
            blur_lapvar /= static_cast<double>(lap.size());
        }
    }

    // Marziliano-style horizontal edge width: distance between the local
    // luminance extrema bracketing each strong |gx| response in its row.
    double blur_edgewidth = 0.0;
    if (luma.width >= 3 && luma.height >= 3) {
        const GradientField g = sobel(luma);
        double gx_max = 0.0;
        for (double v : g.gx) gx_max = std::max(gx_max, std::fabs(v));
        if (gx_max > 0.0) {
            const double threshold = kEdgeWidthThreshold * gx_max;
            double width_sum = 0.0;
            std::size_t edge_count = 0;
            std::vector<int> extrema;
            for (int y = 0; y < luma.height; ++y) {
                extrema.clear();
                extrema.push_back(0);
                for (int x = 1; x + 1 < luma.width; ++x) {
                    const double d1 = luma.at(x, y) - luma.at(x - 1, y);
                    const double d2 = luma.at(x + 1, y) - luma.at(x, y);
                    if (d1 * d2 <= 0.0) extrema.push_back(x);
                }
                extrema.push_back(luma.width - 1);
                for (int x = 0; x < luma.width; ++x) {
                    if (std::fabs(g.gx[static_cast<std::size_t>(y) * luma.width + x]) <= threshold)
                        continue;
                    auto it = std::lower_bound(extrema.begin(), extrema.end(), x);
                    const int following = it == extrema.end() ? luma.width - 1
                                          : *it == x ? (it + 1 == extrema.end() ? *it : *(it + 1))
                                                     : *it;
                    const int preceding = it == extrema.begin() ? 0 : *(it - 1);
                    width_sum += following - preceding;
                    ++edge_count;
                }
            }
            if (edge_count > 0) blur_edgewidth = width_sum / static_cast<double>(edge_count);
        }
    }

    // Color statistics.
    std::vector<double> hue(n), sat(n);
    std::vector<bool> bins(kColorQuantBins, false);
    std::size_t specular = 0;
    const int shift = 8 - kColorQuantBits;
    for (std::size_t i = 0; i < n; ++i) {
        const std::uint8_t* p = frame.data.data() + 3 * i;
        hue[i] = detail::hue01(p[0], p[1], p[2]);
        sat[i] = detail::saturation(p[0], p[1], p[2]);
        if (luma.values[i] >= kSpecularLumaFloor && sat[i] <= kSpecularSaturationCeil) ++specular;
        const int bin = ((p[0] >> shift) << (2 * kColorQuantBits)) |
                        ((p[1] >> shift) << kColorQuantBits) | (p[2] >> shift);
        bins[static_cast<std::size_t>(bin)] = true;
    }
    const double specularity = static_cast<double>(specular) / dn;
    std::size_t occupied = 0;
    for (bool b : bins) occupied += b ? 1 : 0;
    const double color_diversity =
        static_cast<double>(occupied) /
        static_cast<double>(std::min<std::size_t>(n, kColorQuantBins));

    const detail::Moments hm = detail::channel_moments(hue);
    const detail::Moments sm = detail::channel_moments(sat);

    return {blur_lapvar, blur_edgewidth, specularity, hm.mean, hm.stddev,
            hm.skewness, sm.mean,        sm.stddev,   sm.skewness, color_diversity};
}

/// Full quality vector of a frame: luminance -> Gaussian self-reference ->
/// full-reference measures, concatenated with the no-reference measures.
inline QualityVector extract_iqm_vector(const RgbFrame& frame) {
    const LumaPlane luma = to_luminance(frame);
    const LumaPlane reference = gaussian_reference(luma);
    const std::array<double, 16> fr = full_reference_measures(luma, reference);
    const std::array<double, 10> nr = no_reference_measures(frame);
    QualityVector qv;
    std::copy(fr.begin(), fr.end(), qv.values.begin());
    std::copy(nr.begin(), nr.end(), qv.values.begin() + 16);
    return qv;
}

inline constexpr int kDefaultPixelSide = 32;

/// Raw-face feature: luminance resized to side x side, flattened row-major.
inline std::vector<double> extract_pixel_vector(const RgbFrame& frame,
                                                int side = kDefaultPixelSide) {
    require(side >= 1, "extract_pixel_vector: side must be positive");
    const LumaPlane luma = to_luminance(frame);
    return bilinear_resize(luma, side, side).values;
}

}  // namespace dfd
