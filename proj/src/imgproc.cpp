#include "hmrf/imgproc.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>

namespace hmrf {

std::pair<RasterImage, RasterImage> rgb_to_hsl_planes(const RasterImage& rgb) {
    if (rgb.channels != 3)
        throw std::invalid_argument("rgb_to_hsl_planes: RGB input required");
    RasterImage sat(rgb.width, rgb.height, 1);
    RasterImage lum(rgb.width, rgb.height, 1);
    const std::size_t n = rgb.pixel_count();
    for (std::size_t i = 0; i < n; ++i) {
        const int r = rgb.data[i * 3 + 0];
        const int g = rgb.data[i * 3 + 1];
        const int b = rgb.data[i * 3 + 2];
        const int mx = std::max({r, g, b});
        const int mn = std::min({r, g, b});
        lum.data[i] = static_cast<std::uint8_t>((mx + mn) / 2);
        if (mx == mn) {
            sat.data[i] = 0;
        } else {
            // S = (max-min)/(max+min) below half lightness, (max-min)/(2-max-min) above
            const int denom = (mx + mn <= 255) ? (mx + mn) : (510 - mx - mn);
            sat.data[i] = static_cast<std::uint8_t>(
                std::lround(255.0 * (mx - mn) / denom));
        }
    }
    return {std::move(sat), std::move(lum)};
}

ThresholdResult histogram_peak_threshold(const RasterImage& plane) {
    if (plane.channels != 1)
        throw std::invalid_argument("histogram_peak_threshold: single-channel plane required");
    std::array<std::int64_t, 256> hist{};
    for (auto v : plane.data) hist[v]++;

    const std::int64_t total = static_cast<std::int64_t>(plane.data.size());
    std::int64_t weighted_total = 0;
    for (int v = 0; v < 256; ++v) weighted_total += static_cast<std::int64_t>(v) * hist[v];

    // Candidate t puts values <= t in the background class; returned threshold
    // is t+1 so that (value >= threshold) selects the bright class.
    int best_t = -1;
    double best_var = -1.0;
    std::int64_t w_bg = 0, sum_bg = 0;
    for (int t = 0; t < 256; ++t) {
        w_bg += hist[t];
        sum_bg += static_cast<std::int64_t>(t) * hist[t];
        const std::int64_t w_fg = total - w_bg;
        if (w_bg == 0 || w_fg == 0) continue;
        const double mu_bg = static_cast<double>(sum_bg) / w_bg;
        const double mu_fg = static_cast<double>(weighted_total - sum_bg) / w_fg;
        const double var = static_cast<double>(w_bg) * static_cast<double>(w_fg) *
                           (mu_bg - mu_fg) * (mu_bg - mu_fg);
        if (var > best_var) {
            best_var = var;
            best_t = t;
        }
    }
    if (best_t < 0) {
        // constant plane
        int v = 0;
        for (int i = 0; i < 256; ++i)
            if (hist[i] > 0) { v = i; break; }
        return {v, true};
    }
    return {best_t + 1, false};
}

BinaryMask hybrid_channel(const RasterImage& sat, const RasterImage& lum,
                          int alpha_s, int alpha_l) {
    if (sat.width != lum.width || sat.height != lum.height)
        throw std::invalid_argument("hybrid_channel: plane dimensions differ");
    if (sat.channels != 1 || lum.channels != 1)
        throw std::invalid_argument("hybrid_channel: planes must be single-channel");
    BinaryMask mask(sat.width, sat.height);
    for (std::size_t i = 0; i < sat.data.size(); ++i) {
        const int dark = lum.data[i] < alpha_l ? 255 : 0;
        const int hybrid = std::max<int>(sat.data[i], dark);
        mask.bits[i] = hybrid >= alpha_s ? 1 : 0;
    }
    return mask;
}

namespace {

BinaryMask morph(const BinaryMask& mask, int radius, bool erosion) {
    BinaryMask out(mask.width, mask.height);
    for (int y = 0; y < mask.height; ++y) {
        for (int x = 0; x < mask.width; ++x) {
            bool hit = erosion;  // erosion: all-of, dilation: any-of
            for (int dy = -radius; dy <= radius && hit == erosion; ++dy) {
                for (int dx = -radius; dx <= radius; ++dx) {
                    const int nx = x + dx, ny = y + dy;
                    const bool v = nx >= 0 && nx < mask.width && ny >= 0 &&
                                   ny < mask.height && mask.get(nx, ny);
                    if (erosion && !v) { hit = false; break; }
                    if (!erosion && v) { hit = true; break; }
                }
            }
            out.set(x, y, hit);
        }
    }
    return out;
}

}  // namespace

BinaryMask erode(const BinaryMask& mask, int radius) { return morph(mask, radius, true); }
BinaryMask dilate(const BinaryMask& mask, int radius) { return morph(mask, radius, false); }

BinaryMask morphological_open(const BinaryMask& mask, int radius) {
    if (radius < 1) throw std::invalid_argument("morphological_open: radius must be >= 1");
    return dilate(erode(mask, radius), radius);
}

}  // namespace hmrf
