#include "hmrf/classify.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace hmrf {

namespace {

constexpr const char* kClassNames[] = {"LeftLane", "RightLane", "TrafficFixture",
                                       "Ramp", "Error"};
constexpr const char* kFeatureNames[] = {"pixel_count",     "area_ratio", "length_x",
                                         "length_y",        "aspect",     "centroid_x_frac",
                                         "diag_norm"};

constexpr ObjectClass kLaneFamily[] = {ObjectClass::LeftLane, ObjectClass::RightLane};
constexpr ObjectClass kObjectFamily[] = {ObjectClass::TrafficFixture, ObjectClass::Ramp};

double family_prior(const ClassModel& model, const ObjectClass* members) {
    return model.priors[static_cast<int>(members[0])] +
           model.priors[static_cast<int>(members[1])];
}

// Prior-weighted mean of the member-class means for one feature.
double family_mean(const ClassModel& model, const ObjectClass* members, Feature f) {
    double wsum = 0.0, msum = 0.0;
    for (int i = 0; i < 2; ++i) {
        const int c = static_cast<int>(members[i]);
        wsum += model.priors[c];
        msum += model.priors[c] * model.means[c][static_cast<int>(f)];
    }
    return msum / wsum;
}

double likelihood_to_mean(double mean, double value) {
    return std::exp(-std::abs(mean - value) / mean);
}

}  // namespace

const char* class_name(ObjectClass c) { return kClassNames[static_cast<int>(c)]; }

ObjectClass class_from_name(const std::string& name) {
    for (int i = 0; i < 5; ++i)
        if (name == kClassNames[i]) return static_cast<ObjectClass>(i);
    throw std::invalid_argument("unknown class name: " + name);
}

const char* feature_name(Feature f) { return kFeatureNames[static_cast<int>(f)]; }

double FeatureVector::get(Feature f) const {
    switch (f) {
        case Feature::PixelCount: return pixel_count;
        case Feature::AreaRatio: return area_ratio;
        case Feature::LengthX: return length_x;
        case Feature::LengthY: return length_y;
        case Feature::Aspect: return aspect;
        case Feature::CentroidXFrac: return centroid_x_frac;
        case Feature::DiagNorm: return diag_norm;
    }
    return 0.0;
}

FeatureVector extract_features(const Segment& seg, const FrameDims& dims) {
    FeatureVector fv;
    fv.pixel_count = static_cast<double>(seg.pixel_count);
    const double bbox_area = static_cast<double>(seg.length_x) * seg.length_y;
    fv.area_ratio = fv.pixel_count / bbox_area;
    fv.length_x = seg.length_x;
    fv.length_y = seg.length_y;
    fv.aspect = static_cast<double>(seg.length_x) / seg.length_y;
    fv.centroid_x_frac = seg.centroid_x / dims.width;
    fv.diag_norm = std::sqrt(fv.length_x * fv.length_x + fv.length_y * fv.length_y) /
                   std::sqrt(static_cast<double>(dims.width) * dims.width +
                             static_cast<double>(dims.height) * dims.height);
    return fv;
}

void ClassModel::validate() const {
    double prior_sum = 0.0;
    for (int c = 0; c < kClassCount; ++c) {
        if (priors[c] < 0.0)
            throw std::invalid_argument(std::string("negative prior for class ") +
                                        kClassNames[c]);
        prior_sum += priors[c];
        for (int f = 0; f < kFeatureCount; ++f)
            if (!(means[c][f] > 0.0))
                throw std::invalid_argument(std::string("non-positive mean for class ") +
                                            kClassNames[c] + ", feature " + kFeatureNames[f]);
    }
    if (std::abs(prior_sum - 1.0) > 1e-9)
        throw std::invalid_argument("class priors must sum to 1");
    if (!(error_threshold > 0.0) || error_threshold >= 1.0)
        throw std::invalid_argument("error threshold must lie in (0, 1)");
}

double class_likelihood(const FeatureVector& fv, ObjectClass cls,
                        const ClassModel& model, Feature feature) {
    const double mean = model.means[static_cast<int>(cls)][static_cast<int>(feature)];
    if (!(mean > 0.0)) throw std::invalid_argument("class_likelihood: zero class mean");
    return likelihood_to_mean(mean, fv.get(feature));
}

Classification classify(const Segment& seg, const ClassModel& model,
                        const FrameDims& dims) {
    if (!model.trained) throw std::invalid_argument("classify: untrained model");
    const FeatureVector fv = extract_features(seg, dims);
    const double tau = model.error_threshold;

    // Branch 1: family split on area ratio.
    const double lane_score =
        likelihood_to_mean(family_mean(model, kLaneFamily, Feature::AreaRatio),
                           fv.area_ratio) *
        family_prior(model, kLaneFamily);
    const double object_score =
        likelihood_to_mean(family_mean(model, kObjectFamily, Feature::AreaRatio),
                           fv.area_ratio) *
        family_prior(model, kObjectFamily);
    const bool lane_branch = lane_score >= object_score;  // tie: class-order wins
    const double branch1 = lane_branch ? lane_score : object_score;
    if (branch1 < tau) return {ObjectClass::Error, branch1};

    if (lane_branch) {
        // Branch 2a: side by centroid halves; the winner's own likelihood gates.
        const ObjectClass side = fv.centroid_x_frac < 0.5 ? ObjectClass::LeftLane
                                                          : ObjectClass::RightLane;
        const double score = class_likelihood(fv, side, model, Feature::CentroidXFrac) *
                             model.priors[static_cast<int>(side)];
        if (score < tau) return {ObjectClass::Error, score};
        return {side, score};
    }

    // Branch 2b: fixture vs ramp on aspect likelihoods.
    const double fixture_score =
        class_likelihood(fv, ObjectClass::TrafficFixture, model, Feature::Aspect) *
        model.priors[static_cast<int>(ObjectClass::TrafficFixture)];
    const double ramp_score =
        class_likelihood(fv, ObjectClass::Ramp, model, Feature::Aspect) *
        model.priors[static_cast<int>(ObjectClass::Ramp)];
    const ObjectClass obj = fixture_score >= ramp_score ? ObjectClass::TrafficFixture
                                                        : ObjectClass::Ramp;
    const double score = obj == ObjectClass::TrafficFixture ? fixture_score : ramp_score;
    if (score < tau) return {ObjectClass::Error, score};
    return {obj, score};
}

ClassModel train(const std::vector<LabeledSegment>& labeled, const FrameDims& dims) {
    ClassModel model;
    std::array<int, kClassCount> counts{};
    std::array<std::array<double, kFeatureCount>, kClassCount> sums{};
    int total = 0;
    for (const auto& example : labeled) {
        if (example.label == ObjectClass::Error) continue;  // reject class is not trained
        const int c = static_cast<int>(example.label);
        const FeatureVector fv = extract_features(example.segment, dims);
        for (int f = 0; f < kFeatureCount; ++f)
            sums[c][f] += fv.get(static_cast<Feature>(f));
        ++counts[c];
        ++total;
    }
    for (int c = 0; c < kClassCount; ++c) {
        if (counts[c] == 0)
            throw std::invalid_argument(std::string("train: no examples for class ") +
                                        kClassNames[c]);
        for (int f = 0; f < kFeatureCount; ++f)
            model.means[c][f] = sums[c][f] / counts[c];
        model.priors[c] = static_cast<double>(counts[c]) / total;
    }
    double max_prior = 0.0;
    for (double p : model.priors) max_prior = std::max(max_prior, p);
    model.error_threshold = std::exp(-1.0) * max_prior;
    model.trained = true;
    model.validate();
    return model;
}

void save_model(const std::string& path, const ClassModel& model) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open model file for write: " + path);
    char buf[160];
    for (int c = 0; c < kClassCount; ++c) {
        std::snprintf(buf, sizeof(buf), "prior %s %.12f\n", kClassNames[c], model.priors[c]);
        out << buf;
        for (int f = 0; f < kFeatureCount; ++f) {
            std::snprintf(buf, sizeof(buf), "mean %s %s %.12f\n", kClassNames[c],
                          kFeatureNames[f], model.means[c][f]);
            out << buf;
        }
    }
    std::snprintf(buf, sizeof(buf), "tau %.12f\n", model.error_threshold);
    out << buf;
}

ClassModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open model file: " + path);
    ClassModel model;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream is(line);
        std::string kind;
        is >> kind;
        if (kind == "prior") {
            std::string cls;
            double v = 0.0;
            is >> cls >> v;
            model.priors[static_cast<int>(class_from_name(cls))] = v;
        } else if (kind == "mean") {
            std::string cls, feat;
            double v = 0.0;
            is >> cls >> feat >> v;
            int fi = -1;
            for (int f = 0; f < kFeatureCount; ++f)
                if (feat == kFeatureNames[f]) fi = f;
            if (fi < 0) throw std::runtime_error("unknown feature in model file: " + feat);
            model.means[static_cast<int>(class_from_name(cls))][fi] = v;
        } else if (kind == "tau") {
            is >> model.error_threshold;
        } else {
            throw std::runtime_error("unknown model file entry: " + kind);
        }
        if (!is) throw std::runtime_error("malformed model line: " + line);
    }
    model.trained = true;
    model.validate();
    return model;
}

}  // namespace hmrf
