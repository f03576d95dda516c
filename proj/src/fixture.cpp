#include "hmrf/fixture.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace hmrf {

namespace {

// Scene palette. Saturation/lightness pairs (0-255, bi-hexcone HSL):
//   grass (24, 106), barrel orange (223, 80), barrel light stripe (153, 230),
//   lane (191, 235), dark blob (51, 50).
constexpr std::uint8_t kGrassRgb[3] = {100, 116, 96};
constexpr std::uint8_t kOrangeRgb[3] = {150, 45, 10};
constexpr std::uint8_t kStripeRgb[3] = {245, 245, 215};
constexpr std::uint8_t kLaneRgb[3] = {250, 250, 220};
constexpr std::uint8_t kBlobRgb[3] = {60, 50, 40};

constexpr int kSceneW = 160, kSceneH = 120;
constexpr int kBarrelX0 = 62, kBarrelX1 = 97;   // inclusive
constexpr int kBarrelY0 = 30, kBarrelY1 = 79;   // five 10-row stripes
constexpr int kLaneThickness = 4;

bool in_barrel(int x, int y) {
    return x >= kBarrelX0 && x <= kBarrelX1 && y >= kBarrelY0 && y <= kBarrelY1;
}

// Light stripes are rows 40-49 and 60-69; the outer stripes stay orange so
// the occluded lane only ever touches orange rows.
bool light_stripe_row(int y) {
    const int band = (y - kBarrelY0) / 10;
    return band == 1 || band == 3;
}

void put(RasterImage& img, std::vector<std::uint8_t>& truth, int x, int y,
         const std::uint8_t rgb[3], SceneRegion region) {
    img.at(x, y, 0) = rgb[0];
    img.at(x, y, 1) = rgb[1];
    img.at(x, y, 2) = rgb[2];
    truth[static_cast<std::size_t>(y) * img.width + x] = region;
}

std::uint64_t draw_u64(std::mt19937_64& rng) { return rng(); }

int draw_int(std::mt19937_64& rng, int lo, int hi) {  // inclusive bounds
    return lo + static_cast<int>(draw_u64(rng) % static_cast<std::uint64_t>(hi - lo + 1));
}

double draw_real(std::mt19937_64& rng, double lo, double hi) {
    const double u = (draw_u64(rng) >> 11) * 0x1.0p-53;
    return lo + u * (hi - lo);
}

}  // namespace

FixtureScene make_scene(std::uint64_t seed, bool with_noise) {
    FixtureScene scene;
    scene.width = kSceneW;
    scene.height = kSceneH;
    scene.image = RasterImage(kSceneW, kSceneH, 3);
    scene.truth.assign(static_cast<std::size_t>(kSceneW) * kSceneH, kGrass);
    for (int y = 0; y < kSceneH; ++y)
        for (int x = 0; x < kSceneW; ++x)
            put(scene.image, scene.truth, x, y, kGrassRgb, kGrass);

    // Left lane: shallow diagonal, fully visible.
    for (int y = 20; y <= 115; ++y) {
        const int xc = 18 + static_cast<int>(std::lround((y - 20) * 0.22));
        for (int t = 0; t < kLaneThickness; ++t)
            put(scene.image, scene.truth, xc + t, y, kLaneRgb, kLeftLane);
    }
    // Right lane: runs behind the barrel; only drawn where not occluded.
    for (int y = 20; y <= 115; ++y) {
        const int xc = 70 + static_cast<int>(std::lround((115 - y) * 0.30));
        for (int t = 0; t < kLaneThickness; ++t) {
            const int x = xc + t;
            if (!in_barrel(x, y))
                put(scene.image, scene.truth, x, y, kLaneRgb, kRightLane);
        }
    }
    // Striped barrel over the lane.
    for (int y = kBarrelY0; y <= kBarrelY1; ++y)
        for (int x = kBarrelX0; x <= kBarrelX1; ++x)
            put(scene.image, scene.truth, x, y,
                light_stripe_row(y) ? kStripeRgb : kOrangeRgb, kBarrel);

    if (!with_noise) return scene;

    std::mt19937_64 rng(seed);

    // Larger dark blobs, one per light stripe, kept on the barrel's right
    // half (8x8, below the saturation threshold and under alpha_l).
    for (int band : {1, 3}) {
        const int bx = draw_int(rng, 84, 89);
        const int by = kBarrelY0 + band * 10 + 1;
        for (int y = by; y < by + 8; ++y)
            for (int x = bx; x < bx + 8; ++x)
                put(scene.image, scene.truth, x, y, kBlobRgb, kBlobNoise);
    }

    // Isolated grass-colored pixels on the objects (mask shot noise). On the
    // thin lane bands only the edge rows are hit, so the opened mask never
    // loses connectivity; on the barrel a margin keeps the lane contact and
    // the blobs intact.
    auto noise_site_ok = [&](int x, int y) {
        const SceneRegion r = scene.region_at(x, y);
        if (r == kLeftLane || r == kRightLane)
            return scene.region_at(x, y - 1) == kGrass ||
                   scene.region_at(x, y + 1) == kGrass;
        if (r != kBarrel) return false;
        for (int dy = -1; dy <= 1; ++dy)
            for (int dx = -1; dx <= 1; ++dx)
                if (scene.region_at(x + dx, y + dy) != kBarrel) return false;
        return true;
    };
    std::vector<Point> placed;
    auto well_separated = [&](int x, int y) {
        for (const auto& p : placed)
            if (std::abs(p.x - x) <= 2 && std::abs(p.y - y) <= 2) return false;
        return true;
    };
    int planted = 0, tries = 0;
    while (planted < 24 && tries < 4000) {
        ++tries;
        const int x = draw_int(rng, 1, kSceneW - 2);
        const int y = draw_int(rng, 1, kSceneH - 2);
        if (!noise_site_ok(x, y) || !well_separated(x, y)) continue;
        put(scene.image, scene.truth, x, y, kGrassRgb, kShotNoise);
        placed.push_back({x, y});
        ++planted;
    }
    // Isolated saturated specks on the grass (removed by the opening filter).
    planted = 0;
    tries = 0;
    while (planted < 14 && tries < 4000) {
        ++tries;
        const int x = draw_int(rng, 2, kSceneW - 3);
        const int y = draw_int(rng, 2, kSceneH - 3);
        bool clear = true;
        for (int dy = -2; dy <= 2 && clear; ++dy)
            for (int dx = -2; dx <= 2; ++dx)
                if (scene.region_at(x + dx, y + dy) != kGrass) { clear = false; break; }
        if (!clear || !well_separated(x, y)) continue;
        put(scene.image, scene.truth, x, y, kOrangeRgb, kShotNoise);
        placed.push_back({x, y});
        ++planted;
    }
    return scene;
}

CalibrationField make_noise_field(int width, int height, double fraction,
                                  std::uint64_t seed, bool isolated,
                                  double magnitude, bool paired) {
    CalibrationField field;
    field.data = DataField(width, height, 1.0);
    field.truth = LabelField(width, height, 1);
    std::mt19937_64 rng(seed);
    const int total = width * height;
    int target = static_cast<int>(std::lround(fraction * total));
    std::vector<Point> placed;
    auto far_enough = [&](int x, int y) {
        for (const auto& p : placed)
            if (std::abs(p.x - x) <= 1 && std::abs(p.y - y) <= 1) return false;
        return true;
    };
    int tries = 0;
    while (target > 0 && tries < 100 * total) {
        ++tries;
        // pairs stay off the border so every pair erodes at the same beta
        const int x = paired ? draw_int(rng, 1, width - 3) : draw_int(rng, 0, width - 1);
        const int y = paired ? draw_int(rng, 1, height - 2) : draw_int(rng, 0, height - 1);
        if (paired) {
            if (!far_enough(x, y) || !far_enough(x + 1, y)) continue;
            field.data.set(x, y, -magnitude);
            field.data.set(x + 1, y, -magnitude);
            placed.push_back({x, y});
            placed.push_back({x + 1, y});
            target -= 2;
        } else if (isolated) {
            if (!far_enough(x, y)) continue;
            field.data.set(x, y, -magnitude);
            placed.push_back({x, y});
            --target;
        } else {
            if (field.data.at(x, y) < 0.0) continue;  // already flipped
            field.data.set(x, y, -magnitude);
            --target;
        }
    }
    return field;
}

FrameDims fixture_frame_dims() { return {kSceneW, kSceneH}; }

Segment make_lane_segment(std::mt19937_64& rng, bool left) {
    const int h = draw_int(rng, 50, 82);
    const int w_target = draw_int(rng, 28, 54);
    const double slope = static_cast<double>(w_target - 3) / (h - 1);
    const double cx_frac = left ? draw_real(rng, 0.14, 0.30) : draw_real(rng, 0.67, 0.82);
    const int y0 = draw_int(rng, 0, kSceneH - h);
    int x0 = static_cast<int>(std::lround(cx_frac * kSceneW - w_target / 2.0));
    x0 = std::clamp(x0, 0, kSceneW - w_target - 1);
    std::vector<Point> pixels;
    for (int r = 0; r < h; ++r) {
        const int xc = x0 + static_cast<int>(std::lround(r * slope));
        for (int t = 0; t < 3; ++t) pixels.push_back({xc + t, y0 + r});
    }
    return make_segment(0, std::move(pixels), 1);
}

Segment make_fixture_segment(std::mt19937_64& rng) {
    const int w = draw_int(rng, 18, 30);
    const double aspect = draw_real(rng, 0.62, 0.82);
    const int h = std::min(48, static_cast<int>(std::lround(w / aspect)));
    const int x0 = draw_int(rng, 5, kSceneW - w - 5);
    const int y0 = draw_int(rng, 5, kSceneH - h - 5);
    std::vector<std::uint8_t> solid(static_cast<std::size_t>(w) * h, 1);
    const int holes = static_cast<int>(std::lround(0.04 * w * h));
    std::vector<Point> hole_at;
    int planted = 0, tries = 0;
    while (planted < holes && tries < 2000) {
        ++tries;
        const int hx = draw_int(rng, 1, w - 2);
        const int hy = draw_int(rng, 1, h - 2);
        bool ok = true;
        for (const auto& p : hole_at)
            if (std::abs(p.x - hx) <= 1 && std::abs(p.y - hy) <= 1) { ok = false; break; }
        if (!ok) continue;
        solid[static_cast<std::size_t>(hy) * w + hx] = 0;
        hole_at.push_back({hx, hy});
        ++planted;
    }
    std::vector<Point> pixels;
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            if (solid[static_cast<std::size_t>(y) * w + x])
                pixels.push_back({x0 + x, y0 + y});
    return make_segment(0, std::move(pixels), -1);
}

Segment make_ramp_segment(std::mt19937_64& rng) {
    const int w = draw_int(rng, 44, 64);
    const double aspect = draw_real(rng, 2.0, 2.5);
    const int h = static_cast<int>(std::lround(w / aspect));
    const int x0 = draw_int(rng, 5, kSceneW - w - 5);
    const int y0 = draw_int(rng, 5, kSceneH - h - 5);
    std::vector<Point> pixels;
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) pixels.push_back({x0 + x, y0 + y});
    return make_segment(0, std::move(pixels), -1);
}

Segment make_noise_segment(std::mt19937_64& rng) {
    if (draw_u64(rng) % 2 == 0) {
        // thin horizontal streak: extreme aspect
        const int w = draw_int(rng, 5, 14);
        const int x0 = draw_int(rng, 2, kSceneW - w - 2);
        const int y0 = draw_int(rng, 2, kSceneH - 3);
        std::vector<Point> pixels;
        for (int x = 0; x < w; ++x) pixels.push_back({x0 + x, y0});
        return make_segment(0, std::move(pixels), 1);
    }
    // sparse staircase near the frame center: lane-like ratio, implausible side
    const int m = draw_int(rng, 16, 22);
    const double cx_frac = draw_real(rng, 0.475, 0.495);
    int x0 = static_cast<int>(std::lround(cx_frac * kSceneW - (m + 1) / 2.0));
    const int y0 = draw_int(rng, 2, kSceneH - m - 2);
    std::vector<Point> pixels;
    for (int i = 0; i < m; ++i) {
        pixels.push_back({x0 + i, y0 + i});
        pixels.push_back({x0 + i + 1, y0 + i});
    }
    return make_segment(0, std::move(pixels), 1);
}

std::vector<LabeledSegment> make_training_set(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<LabeledSegment> out;
    for (int i = 0; i < 25; ++i)
        out.push_back({make_lane_segment(rng, true), ObjectClass::LeftLane});
    for (int i = 0; i < 25; ++i)
        out.push_back({make_lane_segment(rng, false), ObjectClass::RightLane});
    for (int i = 0; i < 30; ++i)
        out.push_back({make_fixture_segment(rng), ObjectClass::TrafficFixture});
    for (int i = 0; i < 20; ++i)
        out.push_back({make_ramp_segment(rng), ObjectClass::Ramp});
    return out;
}

std::vector<LabeledSegment> make_evaluation_set(std::uint64_t seed) {
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
    std::vector<LabeledSegment> out;
    for (int i = 0; i < 40; ++i)
        out.push_back({make_lane_segment(rng, true), ObjectClass::LeftLane});
    for (int i = 0; i < 40; ++i)
        out.push_back({make_lane_segment(rng, false), ObjectClass::RightLane});
    for (int i = 0; i < 40; ++i)
        out.push_back({make_fixture_segment(rng), ObjectClass::TrafficFixture});
    for (int i = 0; i < 40; ++i)
        out.push_back({make_ramp_segment(rng), ObjectClass::Ramp});
    for (int i = 0; i < 40; ++i)
        out.push_back({make_noise_segment(rng), ObjectClass::Error});
    return out;
}

ClassModel default_class_model() {
    return train(make_training_set(1234), fixture_frame_dims());
}

}  // namespace hmrf
