#pragma once

#include <array>
#include <string>
#include <vector>

#include "hmrf/segment.hpp"

namespace hmrf {

enum class ObjectClass { LeftLane = 0, RightLane = 1, TrafficFixture = 2, Ramp = 3, Error = 4 };

constexpr int kClassCount = 4;  // trained classes; Error is the reject label

const char* class_name(ObjectClass c);
ObjectClass class_from_name(const std::string& name);

enum class Feature {
    PixelCount = 0,
    AreaRatio,
    LengthX,
    LengthY,
    Aspect,
    CentroidXFrac,
    DiagNorm,
};

constexpr int kFeatureCount = 7;

const char* feature_name(Feature f);

struct FrameDims {
    int width = 0;
    int height = 0;
};

struct FeatureVector {
    double pixel_count = 0.0;
    double area_ratio = 0.0;       // pixel count / bbox area, in (0, 1]
    double length_x = 0.0;
    double length_y = 0.0;
    double aspect = 0.0;           // length_x / length_y
    double centroid_x_frac = 0.0;  // centroid x / image width
    double diag_norm = 0.0;        // bbox diagonal / image diagonal

    double get(Feature f) const;
};

FeatureVector extract_features(const Segment& seg, const FrameDims& dims);

/// Per-class feature means and priors. Priors sum to 1 over the four
/// trained classes; every mean must be positive.
struct ClassModel {
    std::array<std::array<double, kFeatureCount>, kClassCount> means{};
    std::array<double, kClassCount> priors{};
    double error_threshold = 0.0;  // tau; winner scores below it reject to Error
    bool trained = false;

    void validate() const;  // throws on zero means / bad priors
};

/// exp(-|mean - value| / mean) for one feature: 1 at an exact match,
/// decaying with relative deviation.
double class_likelihood(const FeatureVector& fv, ObjectClass cls,
                        const ClassModel& model, Feature feature);

struct Classification {
    ObjectClass label = ObjectClass::Error;
    double score = 0.0;  // winning likelihood * prior at the deciding branch
};

/// Decision tree: root splits lane-family vs object-family on area ratio,
/// lanes split left/right at centroid_x_frac 0.5, objects split fixture vs
/// ramp on aspect likelihoods. A winner scoring below tau rejects to Error
/// at any branch.
Classification classify(const Segment& seg, const ClassModel& model,
                        const FrameDims& dims);

struct LabeledSegment {
    Segment segment;
    ObjectClass label = ObjectClass::Error;
};

/// Per-class feature means and empirical priors; tau = e^-1 * max prior.
/// Throws (naming the class) when a class has no examples.
ClassModel train(const std::vector<LabeledSegment>& labeled, const FrameDims& dims);

/// Plain-text key-value model file.
void save_model(const std::string& path, const ClassModel& model);
ClassModel load_model(const std::string& path);

}  // namespace hmrf
