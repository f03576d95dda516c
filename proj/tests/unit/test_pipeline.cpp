#include <doctest.h>

#include <array>
#include <numeric>

#include "hmrf/fixture.hpp"
#include "hmrf/imgproc.hpp"
#include "hmrf/pipeline.hpp"

using namespace hmrf;

namespace {

PipelineConfig scene_config(const FixtureScene& scene, int method) {
    PipelineConfig cfg;
    cfg.method = method;
    cfg.alpha_s = scene.alpha_s;
    cfg.alpha_l = scene.alpha_l;
    cfg.beta_u = 0.2;  // hand-calibrated for the unstructured layer
    return cfg;
}

std::array<int, 6> region_histogram(const FixtureScene& scene, const Segment& seg) {
    std::array<int, 6> hist{};
    for (const auto& p : seg.pixels) hist[scene.region_at(p.x, p.y)]++;
    return hist;
}

int lane_pixels(const std::array<int, 6>& h) { return h[kLeftLane] + h[kRightLane]; }

bool mixes_lane_and_barrel(const std::array<int, 6>& h) {
    return h[kBarrel] >= 8 && lane_pixels(h) >= 8;
}

RasterImage solid_rgb(int w, int h, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    RasterImage img(w, h, 3);
    for (std::size_t i = 0; i < img.pixel_count(); ++i) {
        img.data[i * 3 + 0] = r;
        img.data[i * 3 + 1] = g;
        img.data[i * 3 + 2] = b;
    }
    return img;
}

void paint_rect(RasterImage& img, int x0, int y0, int x1, int y1, std::uint8_t r,
                std::uint8_t g, std::uint8_t b) {
    for (int y = y0; y <= y1; ++y)
        for (int x = x0; x <= x1; ++x) {
            img.at(x, y, 0) = r;
            img.at(x, y, 1) = g;
            img.at(x, y, 2) = b;
        }
}

}  // namespace

TEST_CASE("preprocess: bright gray frame comes out empty") {
    const RasterImage frame = solid_rgb(32, 24, 200, 200, 200);
    PipelineConfig cfg;  // auto thresholds
    CHECK(preprocess(frame, cfg).count() == 0);
}

TEST_CASE("preprocess: saturated rectangle on gray is recovered exactly") {
    RasterImage frame = solid_rgb(40, 30, 128, 128, 128);
    paint_rect(frame, 10, 8, 25, 20, 200, 70, 20);
    PipelineConfig cfg;  // auto thresholds
    const BinaryMask mask = preprocess(frame, cfg);
    for (int y = 0; y < 30; ++y)
        for (int x = 0; x < 40; ++x)
            CHECK(mask.get(x, y) == (x >= 10 && x <= 25 && y >= 8 && y <= 20));
}

TEST_CASE("preprocess: dark regions pass through the luminance clause") {
    RasterImage frame = solid_rgb(20, 20, 128, 128, 128);
    paint_rect(frame, 5, 5, 10, 10, 30, 30, 30);  // zero saturation, very dark
    PipelineConfig cfg;
    cfg.alpha_s = 128;
    cfg.alpha_l = 60;
    const BinaryMask mask = preprocess(frame, cfg);
    CHECK(mask.get(7, 7));
    CHECK(!mask.get(2, 2));
}

TEST_CASE("method 1: one clean object, one segment") {
    RasterImage frame = solid_rgb(40, 30, 100, 116, 96);
    paint_rect(frame, 10, 8, 25, 20, 200, 70, 20);
    PipelineConfig cfg;
    cfg.alpha_s = 100;
    cfg.alpha_l = 60;
    const FrameResult result = run_method1(frame, cfg);
    REQUIRE(result.segments.size() == 1);
    CHECK(result.segments[0].pixel_count == 16 * 13);
}

TEST_CASE("methods agree on a clean non-overlapping scene") {
    RasterImage frame = solid_rgb(80, 60, 100, 116, 96);
    paint_rect(frame, 10, 10, 30, 40, 30, 30, 30);    // dark object
    paint_rect(frame, 55, 5, 60, 55, 250, 250, 220);  // bright lane band
    PipelineConfig cfg;
    cfg.alpha_s = 100;
    cfg.alpha_l = 60;
    cfg.beta_u = 0.2;
    const FrameResult one = run_method1(frame, cfg, 0);
    cfg.method = 2;
    const FrameResult two = run_method2(frame, cfg, 0);
    REQUIRE(one.segments.size() == two.segments.size());
    for (std::size_t i = 0; i < one.segments.size(); ++i) {
        CHECK(one.segments[i].pixels == two.segments[i].pixels);
        CHECK(one.segments[i].label == two.segments[i].label);
    }
}

TEST_CASE("method 1: class layer only subdivides the layer-1 foreground") {
    const FixtureScene scene = make_scene(3, true);
    const FrameResult result = run_method1(scene.image, scene_config(scene, 1));
    std::size_t total = 0;
    for (const auto& seg : result.segments) {
        total += seg.pixel_count;
        for (const auto& p : seg.pixels) CHECK(result.foreground_mask.get(p.x, p.y));
    }
    CHECK(total == result.foreground_mask.count());
}

TEST_CASE("method 2: merging never crosses the foreground boundary") {
    const FixtureScene scene = make_scene(3, true);
    const FrameResult result = run_method2(scene.image, scene_config(scene, 2));
    std::size_t total = 0;
    for (const auto& seg : result.segments) {
        total += seg.pixel_count;
        for (const auto& p : seg.pixels) CHECK(result.foreground_mask.get(p.x, p.y));
    }
    CHECK(total == result.foreground_mask.count());
}

TEST_CASE("empty frames short-circuit with a valid result") {
    const RasterImage frame = solid_rgb(32, 24, 100, 116, 96);
    PipelineConfig cfg;
    cfg.alpha_s = 100;
    cfg.alpha_l = 60;
    for (int method : {1, 2}) {
        cfg.method = method;
        const FrameResult result = run_pipeline(frame, cfg);
        CHECK(result.segments.empty());
        CHECK(result.foreground_mask.count() == 0);
    }
}

TEST_CASE("stage times cover the frame time") {
    const FixtureScene scene = make_scene(5, true);
    for (int method : {1, 2}) {
        const FrameResult result =
            run_pipeline(scene.image, scene_config(scene, method));
        double sum = 0.0;
        for (const auto& [stage, ms] : result.per_stage_times) sum += ms;
        CHECK(std::abs(sum - result.total_ms) <= 1.0);
    }
}

TEST_CASE("scene: single-layer segmentation fuses barrel and occluded lane") {
    const FixtureScene scene = make_scene(7, true);
    const BinaryMask mask = preprocess(scene.image, scene_config(scene, 1));
    const auto comps = connected_components(mask);
    int mixed = 0;
    for (const auto& seg : comps)
        if (mixes_lane_and_barrel(region_histogram(scene, seg))) ++mixed;
    CHECK(mixed == 1);
}

TEST_CASE("scene: method 1 separates the overlap and keeps blob noise visible") {
    const FixtureScene scene = make_scene(7, true);
    const FrameResult result = run_method1(scene.image, scene_config(scene, 1));
    CHECK(result.segments.size() >= 3);
    int blob_components = 0;
    for (const auto& seg : result.segments) {
        const auto hist = region_histogram(scene, seg);
        CHECK(!mixes_lane_and_barrel(hist));
        if (hist[kBlobNoise] > static_cast<int>(seg.pixel_count) / 2) ++blob_components;
    }
    CHECK(blob_components >= 1);
}

TEST_CASE("scene: method 2 separates the overlap and merges the blobs away") {
    const FixtureScene scene = make_scene(7, true);
    const FrameResult result = run_method2(scene.image, scene_config(scene, 2));
    CHECK(result.segments.size() >= 3);
    for (const auto& seg : result.segments)
        CHECK(!mixes_lane_and_barrel(region_histogram(scene, seg)));
    CHECK(static_cast<int>(result.segments.size()) < result.layer1_components);
}

TEST_CASE("scene: the seed moves the noise, never the objects") {
    const FixtureScene clean1 = make_scene(1, false);
    const FixtureScene clean2 = make_scene(2, false);
    CHECK(clean1.image.data == clean2.image.data);  // clean geometry is fixed

    const FixtureScene noisy1 = make_scene(1, true);
    const FixtureScene noisy2 = make_scene(2, true);
    CHECK(noisy1.image.data != noisy2.image.data);
    // noise only overwrites object or grass pixels; it never invents objects
    for (std::size_t i = 0; i < noisy1.truth.size(); ++i) {
        const auto code = noisy1.truth[i];
        if (code == kBarrel || code == kLeftLane || code == kRightLane)
            CHECK(clean1.truth[i] == code);
    }
}

TEST_CASE("scene: three objects on grass") {
    const FixtureScene scene = make_scene(7, true);
    std::array<std::size_t, 6> counts{};
    for (auto code : scene.truth) counts[code]++;
    CHECK(counts[kBarrel] > 0);
    CHECK(counts[kLeftLane] > 0);
    CHECK(counts[kRightLane] > 0);
    CHECK(counts[kBlobNoise] > 0);
    CHECK(counts[kShotNoise] > 0);
    CHECK(counts[kGrass] > scene.truth.size() / 2);
}

TEST_CASE("label field pgm: active positives only") {
    LabelField field(3, 2, 1);
    field.set(1, 0, -1);
    field.active = {1, 1, 0, 1, 1, 1};  // (2,0) inactive though labeled +1
    const RasterImage img = label_field_to_pgm(field);
    CHECK(img.data == std::vector<std::uint8_t>{255, 0, 0, 255, 255, 255});
}

TEST_CASE("config: validation catches bad values") {
    PipelineConfig cfg;
    cfg.method = 3;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.method = 1;
    cfg.beta_layer1 = -0.5;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.beta_layer1 = 1.8;
    cfg.iterations = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}
