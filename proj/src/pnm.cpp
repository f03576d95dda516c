#include "hmrf/pnm.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace hmrf {

namespace {

// Skips whitespace and '#' comment lines between header tokens.
int next_header_int(std::istream& in, const std::string& path) {
    int ch = in.get();
    while (ch != EOF) {
        if (ch == '#') {
            while (ch != EOF && ch != '\n') ch = in.get();
        } else if (std::isspace(ch)) {
            ch = in.get();
        } else {
            break;
        }
    }
    if (ch == EOF || !std::isdigit(ch))
        throw std::runtime_error("pnm: malformed header in " + path);
    int value = 0;
    while (ch != EOF && std::isdigit(ch)) {
        value = value * 10 + (ch - '0');
        ch = in.get();
    }
    if (ch != EOF) in.unget();
    return value;
}

void write_raw(const std::string& path, const char* magic, const RasterImage& img) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("pnm: cannot open for write: " + path);
    out << magic << "\n" << img.width << " " << img.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(img.data.data()),
              static_cast<std::streamsize>(img.data.size()));
    if (!out) throw std::runtime_error("pnm: write failed: " + path);
}

}  // namespace

RasterImage read_pnm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("pnm: cannot open: " + path);
    char m0 = 0, m1 = 0;
    in.get(m0);
    in.get(m1);
    if (m0 != 'P' || (m1 != '5' && m1 != '6'))
        throw std::runtime_error("pnm: unsupported format (want P5/P6): " + path);
    const int channels = (m1 == '6') ? 3 : 1;
    const int w = next_header_int(in, path);
    const int h = next_header_int(in, path);
    const int maxval = next_header_int(in, path);
    if (w <= 0 || h <= 0) throw std::runtime_error("pnm: bad dimensions: " + path);
    if (maxval != 255) throw std::runtime_error("pnm: only maxval 255 supported: " + path);
    in.get();  // single whitespace byte after maxval
    RasterImage img(w, h, channels);
    in.read(reinterpret_cast<char*>(img.data.data()),
            static_cast<std::streamsize>(img.data.size()));
    if (in.gcount() != static_cast<std::streamsize>(img.data.size()))
        throw std::runtime_error("pnm: truncated pixel data: " + path);
    return img;
}

void write_pgm(const std::string& path, const RasterImage& gray) {
    if (gray.channels != 1) throw std::invalid_argument("write_pgm: need 1 channel");
    write_raw(path, "P5", gray);
}

void write_ppm(const std::string& path, const RasterImage& rgb) {
    if (rgb.channels != 3) throw std::invalid_argument("write_ppm: need 3 channels");
    write_raw(path, "P6", rgb);
}

void write_mask_pgm(const std::string& path, const BinaryMask& mask) {
    RasterImage img(mask.width, mask.height, 1);
    for (std::size_t i = 0; i < mask.bits.size(); ++i)
        img.data[i] = mask.bits[i] ? 255 : 0;
    write_raw(path, "P5", img);
}

BinaryMask read_mask_pgm(const std::string& path) {
    RasterImage img = read_pnm(path);
    if (img.channels != 1) throw std::runtime_error("mask pgm must be grayscale: " + path);
    BinaryMask mask(img.width, img.height);
    for (std::size_t i = 0; i < img.data.size(); ++i)
        mask.bits[i] = img.data[i] >= 128 ? 1 : 0;
    return mask;
}

}  // namespace hmrf
