#pragma once

#include <string>

#include "hmrf/image.hpp"

namespace hmrf {

/// Binary PGM (P5) / PPM (P6) reader-writer, maxval 255.
/// read_pnm returns a 1-channel image for P5 and a 3-channel image for P6.
RasterImage read_pnm(const std::string& path);

void write_pgm(const std::string& path, const RasterImage& gray);
void write_ppm(const std::string& path, const RasterImage& rgb);

/// Mask serializes with foreground = 255, background = 0.
void write_mask_pgm(const std::string& path, const BinaryMask& mask);
BinaryMask read_mask_pgm(const std::string& path);

}  // namespace hmrf
