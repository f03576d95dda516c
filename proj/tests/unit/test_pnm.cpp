#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "hmrf/pnm.hpp"

using namespace hmrf;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const char* name) { return fs::temp_directory_path() / name; }

}  // namespace

TEST_CASE("pnm: pgm and ppm round trips are bit exact") {
    std::mt19937_64 rng(123);
    RasterImage gray(31, 17, 1);
    for (auto& v : gray.data) v = static_cast<std::uint8_t>(rng() % 256);
    const auto pgm = temp_file("hmrf_roundtrip.pgm");
    write_pgm(pgm.string(), gray);
    const RasterImage gray2 = read_pnm(pgm.string());
    CHECK(gray2.channels == 1);
    CHECK(gray2.data == gray.data);

    RasterImage rgb(13, 7, 3);
    for (auto& v : rgb.data) v = static_cast<std::uint8_t>(rng() % 256);
    const auto ppm = temp_file("hmrf_roundtrip.ppm");
    write_ppm(ppm.string(), rgb);
    const RasterImage rgb2 = read_pnm(ppm.string());
    CHECK(rgb2.channels == 3);
    CHECK(rgb2.data == rgb.data);
    fs::remove(pgm);
    fs::remove(ppm);
}

TEST_CASE("pnm: header comments and whitespace are tolerated") {
    const auto path = temp_file("hmrf_comment.pgm");
    std::ofstream out(path, std::ios::binary);
    out << "P5\n# a comment line\n 3 # trailing\n2\n# another\n255\n";
    const char pixels[6] = {0, 1, 2, 3, 4, 5};
    out.write(pixels, 6);
    out.close();
    const RasterImage img = read_pnm(path.string());
    CHECK(img.width == 3);
    CHECK(img.height == 2);
    CHECK(img.data[5] == 5);
    fs::remove(path);
}

TEST_CASE("pnm: truncated or alien files are rejected") {
    const auto path = temp_file("hmrf_trunc.pgm");
    std::ofstream out(path, std::ios::binary);
    out << "P5\n4 4\n255\n";
    out.write("xy", 2);
    out.close();
    CHECK_THROWS_AS(read_pnm(path.string()), std::runtime_error);

    std::ofstream bad(path, std::ios::binary);
    bad << "P4\n4 4\n";
    bad.close();
    CHECK_THROWS_AS(read_pnm(path.string()), std::runtime_error);
    fs::remove(path);
    CHECK_THROWS_AS(read_pnm((fs::temp_directory_path() / "hmrf_missing.pgm").string()),
                    std::runtime_error);
}

TEST_CASE("pnm: mask serialization uses 0 and 255") {
    BinaryMask mask(5, 4);
    mask.set(1, 1, true);
    mask.set(4, 3, true);
    const auto path = temp_file("hmrf_mask.pgm");
    write_mask_pgm(path.string(), mask);
    const RasterImage raw = read_pnm(path.string());
    for (auto v : raw.data) CHECK((v == 0 || v == 255));
    const BinaryMask back = read_mask_pgm(path.string());
    CHECK(back == mask);
    fs::remove(path);
}
