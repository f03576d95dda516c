#pragma once

#include <utility>

#include "hmrf/image.hpp"

namespace hmrf {

/// Saturation and lightness planes of the bi-hexcone HSL model, scaled to 0-255.
/// Lightness uses integer (max+min)/2; achromatic pixels get zero saturation.
std::pair<RasterImage, RasterImage> rgb_to_hsl_planes(const RasterImage& rgb);

struct ThresholdResult {
    int value = 0;        // splits background (below) from the bright tail (>= value)
    bool degenerate = false;  // constant plane, no separation exists
};

/// Otsu's between-class-variance criterion evaluated exhaustively over all
/// 256 candidate split points. Ties pick the lowest split. A constant plane
/// returns that constant, flagged degenerate.
ThresholdResult histogram_peak_threshold(const RasterImage& plane);

/// I_hybrid = max(sat, dark), dark = 255 where lum < alpha_l else 0;
/// mask bit = hybrid >= alpha_s.
BinaryMask hybrid_channel(const RasterImage& sat, const RasterImage& lum,
                          int alpha_s, int alpha_l);

/// Erosion followed by dilation with a square element of the given radius
/// (radius 1 = 3x3). Out-of-bounds counts as background. Solid rectangles
/// at least as large as the element are recovered exactly.
BinaryMask morphological_open(const BinaryMask& mask, int radius);

BinaryMask erode(const BinaryMask& mask, int radius);
BinaryMask dilate(const BinaryMask& mask, int radius);

}  // namespace hmrf
