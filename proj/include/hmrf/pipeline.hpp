#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hmrf/image.hpp"
#include "hmrf/mrf.hpp"
#include "hmrf/segment.hpp"
#include "hmrf/segment_graph.hpp"

namespace hmrf {

struct PipelineConfig {
    int method = 1;                  // 1 fully structured, 2 partially structured
    std::optional<int> alpha_s;      // empty = auto (histogram threshold)
    std::optional<int> alpha_l;      // empty = auto
    double beta_layer1 = 1.8;
    double beta_layer2 = 1.8;
    int iterations = 2;
    int k = 3;                       // kNN degree of the unstructured layer
    double beta_u = 1.0;             // unstructured prior weight
    int open_radius = 1;

    void validate() const;  // throws std::invalid_argument on bad values
};

/// Flat key-value text (key = value, '#' comments). Unknown keys rejected.
PipelineConfig load_config(const std::string& path);

struct FrameResult {
    int frame_index = 0;
    int method = 1;
    BinaryMask foreground_mask;
    std::vector<Segment> segments;   // class label per segment; fg bit implied
    std::map<std::string, double> per_stage_times;  // stage -> milliseconds
    double total_ms = 0.0;
    double layer1_energy = 0.0;      // post-optimization structured energies
    double layer2_energy = 0.0;
    int layer1_components = 0;       // method 2: component count before merging
};

/// Saturation/luminance split, per-channel thresholds (auto = histogram
/// peak separation), hybrid foreground rule, then the opening filter.
BinaryMask preprocess(const RasterImage& frame, const PipelineConfig& cfg);

/// Fully structured model: a denoising layer on the binary mask, then a
/// grayscale class layer over the surviving foreground; components keyed
/// by the (foreground, class) label pair.
FrameResult run_method1(const RasterImage& frame, const PipelineConfig& cfg,
                        int frame_index = 0);

/// Partially structured model: one grayscale class layer over the mask
/// foreground, components per class, then the kNN graph layer denoises
/// labels and merges agreeing adjacent segments.
FrameResult run_method2(const RasterImage& frame, const PipelineConfig& cfg,
                        int frame_index = 0);

FrameResult run_pipeline(const RasterImage& frame, const PipelineConfig& cfg,
                         int frame_index = 0);

/// Serializes active +1 sites as 255, everything else 0.
RasterImage label_field_to_pgm(const LabelField& field);

}  // namespace hmrf
