#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "hmrf/classify.hpp"
#include "hmrf/image.hpp"
#include "hmrf/mrf.hpp"

namespace hmrf {

/// Region codes in the scene truth map.
enum SceneRegion : std::uint8_t {
    kGrass = 0,
    kBarrel = 1,
    kLeftLane = 2,
    kRightLane = 3,
    kBlobNoise = 4,
    kShotNoise = 5,
};

/// Synthetic 160x120 course scene: a striped traffic barrel and two lanes,
/// the right lane passing behind the barrel. Noise (when enabled) adds
/// isolated discolored pixels on the objects and grass plus larger dark
/// blobs on the barrel's light stripes. Deterministic for a fixed seed;
/// the seed moves only the noise.
struct FixtureScene {
    RasterImage image;               // RGB
    std::vector<std::uint8_t> truth; // SceneRegion per pixel
    int width = 0;
    int height = 0;
    int alpha_s = 100;  // saturation threshold suited to this scene
    int alpha_l = 60;   // luminance threshold; dark blobs fall below it

    SceneRegion region_at(int x, int y) const {
        return static_cast<SceneRegion>(truth[static_cast<std::size_t>(y) * width + x]);
    }
};

FixtureScene make_scene(std::uint64_t seed, bool with_noise);

/// Uniform +1 truth with a fraction of data sites flipped to -magnitude.
/// `isolated` keeps flipped sites at Chebyshev distance >= 2 apart;
/// `paired` plants horizontal two-site runs instead of single sites.
struct CalibrationField {
    DataField data;
    LabelField truth;
};

CalibrationField make_noise_field(int width, int height, double fraction,
                                  std::uint64_t seed, bool isolated,
                                  double magnitude = 1.0, bool paired = false);

/// Parametrized segment generators for classifier training and evaluation
/// (diagonal lanes, compact fixtures, wide ramps, and degenerate noise).
/// All draw from the supplied engine; geometry fits a 160x120 frame.
FrameDims fixture_frame_dims();

Segment make_lane_segment(std::mt19937_64& rng, bool left);
Segment make_fixture_segment(std::mt19937_64& rng);
Segment make_ramp_segment(std::mt19937_64& rng);
Segment make_noise_segment(std::mt19937_64& rng);

std::vector<LabeledSegment> make_training_set(std::uint64_t seed);

/// 200 segments: 40 per trained class plus 40 noise segments labeled Error.
std::vector<LabeledSegment> make_evaluation_set(std::uint64_t seed);

/// The model shipped with the CLI: trained on make_training_set(default seed).
ClassModel default_class_model();

}  // namespace hmrf
