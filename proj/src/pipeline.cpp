#include "hmrf/pipeline.hpp"

#include <chrono>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "hmrf/imgproc.hpp"

namespace hmrf {

void PipelineConfig::validate() const {
    if (method != 1 && method != 2)
        throw std::invalid_argument("config: method must be 1 or 2");
    for (const auto& alpha : {alpha_s, alpha_l})
        if (alpha && (*alpha < 0 || *alpha > 255))
            throw std::invalid_argument("config: thresholds must lie in 0..255");
    if (beta_layer1 < 0.0 || beta_layer2 < 0.0 || beta_u < 0.0)
        throw std::invalid_argument("config: beta values must be >= 0");
    if (iterations < 1) throw std::invalid_argument("config: iterations must be >= 1");
    if (k < 1) throw std::invalid_argument("config: k must be >= 1");
    if (open_radius < 1) throw std::invalid_argument("config: open_radius must be >= 1");
}

PipelineConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config: " + path);
    PipelineConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            if (line.find_first_not_of(" \t\r") != std::string::npos)
                throw std::invalid_argument("config line " + std::to_string(lineno) +
                                            ": expected key = value");
            continue;
        }
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t\r");
            if (a == std::string::npos) return std::string();
            const auto b = s.find_last_not_of(" \t\r");
            return s.substr(a, b - a + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        auto alpha_value = [&](const std::string& v) -> std::optional<int> {
            if (v == "auto") return std::nullopt;
            return std::stoi(v);
        };
        try {
            if (key == "method") cfg.method = std::stoi(value);
            else if (key == "alpha_s") cfg.alpha_s = alpha_value(value);
            else if (key == "alpha_l") cfg.alpha_l = alpha_value(value);
            else if (key == "beta_layer1") cfg.beta_layer1 = std::stod(value);
            else if (key == "beta_layer2") cfg.beta_layer2 = std::stod(value);
            else if (key == "iterations") cfg.iterations = std::stoi(value);
            else if (key == "k") cfg.k = std::stoi(value);
            else if (key == "beta_u") cfg.beta_u = std::stod(value);
            else if (key == "open_radius") cfg.open_radius = std::stoi(value);
            else throw std::invalid_argument("unknown key");
        } catch (const std::exception&) {
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": bad entry '" + key + "'");
        }
    }
    cfg.validate();
    return cfg;
}

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

struct Planes {
    RasterImage sat;
    RasterImage lum;
};

int resolve_threshold(const RasterImage& plane, std::optional<int> configured,
                      bool dark_rule) {
    if (configured) return *configured;
    const ThresholdResult t = histogram_peak_threshold(plane);
    if (!t.degenerate) return t.value;
    // Constant plane: pick the value that selects nothing, so degenerate
    // frames come out empty instead of fully foreground.
    return dark_rule ? t.value : t.value + 1;
}

BinaryMask preprocess_with(const Planes& planes, const PipelineConfig& cfg) {
    const int alpha_s = resolve_threshold(planes.sat, cfg.alpha_s, false);
    const int alpha_l = resolve_threshold(planes.lum, cfg.alpha_l, true);
    BinaryMask mask = hybrid_channel(planes.sat, planes.lum, alpha_s, alpha_l);
    return morphological_open(mask, cfg.open_radius);
}

}  // namespace

BinaryMask preprocess(const RasterImage& frame, const PipelineConfig& cfg) {
    cfg.validate();
    auto [sat, lum] = rgb_to_hsl_planes(frame);
    return preprocess_with({std::move(sat), std::move(lum)}, cfg);
}

RasterImage label_field_to_pgm(const LabelField& field) {
    RasterImage img(field.width, field.height, 1);
    for (std::size_t i = 0; i < field.labels.size(); ++i) {
        const bool act = field.active.empty() || field.active[i] != 0;
        img.data[i] = (act && field.labels[i] > 0) ? 255 : 0;
    }
    return img;
}

FrameResult run_method1(const RasterImage& frame, const PipelineConfig& cfg,
                        int frame_index) {
    cfg.validate();
    FrameResult result;
    result.frame_index = frame_index;
    result.method = 1;
    const auto t_total = Clock::now();

    auto t0 = Clock::now();
    auto [sat, lum] = rgb_to_hsl_planes(frame);
    const BinaryMask raw = preprocess_with({sat, lum}, cfg);
    result.per_stage_times["preprocess"] = ms_since(t0);

    if (raw.count() == 0) {  // degenerate frame: nothing to label
        result.foreground_mask = raw;
        result.per_stage_times["layer1"] = 0.0;
        result.per_stage_times["layer2"] = 0.0;
        result.per_stage_times["components"] = 0.0;
        result.total_ms = ms_since(t_total);
        return result;
    }

    // Layer 1: denoise the binary mask on the full lattice.
    t0 = Clock::now();
    const DataField mask_data = DataField::from_mask(raw);
    LabelField layer1 = LabelField::from_mask(raw);
    const MrfParams params1{cfg.beta_layer1, cfg.iterations};
    icm(layer1, mask_data, params1);
    result.layer1_energy = total_energy(layer1, mask_data, params1);
    result.per_stage_times["layer1"] = ms_since(t0);

    // Layer 2: class labels from grayscale over the layer-1 foreground.
    t0 = Clock::now();
    const BinaryMask foreground = layer1.to_mask();
    const DataField gray = DataField::from_gray(lum);
    LabelField layer2 = init_from_sign(gray, foreground.bits);
    const MrfParams params2{cfg.beta_layer2, cfg.iterations};
    if (foreground.count() > 0) icm(layer2, gray, params2);
    result.layer2_energy = total_energy(layer2, gray, params2);
    result.per_stage_times["layer2"] = ms_since(t0);

    t0 = Clock::now();
    result.foreground_mask = foreground;
    result.segments = connected_components(layer2);
    result.per_stage_times["components"] = ms_since(t0);

    result.total_ms = ms_since(t_total);
    return result;
}

FrameResult run_method2(const RasterImage& frame, const PipelineConfig& cfg,
                        int frame_index) {
    cfg.validate();
    FrameResult result;
    result.frame_index = frame_index;
    result.method = 2;
    const auto t_total = Clock::now();

    auto t0 = Clock::now();
    auto [sat, lum] = rgb_to_hsl_planes(frame);
    const BinaryMask mask = preprocess_with({sat, lum}, cfg);
    result.per_stage_times["preprocess"] = ms_since(t0);
    result.foreground_mask = mask;

    if (mask.count() == 0) {
        result.per_stage_times["layer1"] = 0.0;
        result.per_stage_times["components"] = 0.0;
        result.per_stage_times["graph"] = 0.0;
        result.total_ms = ms_since(t_total);
        return result;
    }

    // Layer 1: grayscale class labels over the mask foreground.
    t0 = Clock::now();
    const DataField gray = DataField::from_gray(lum);
    LabelField layer1 = init_from_sign(gray, mask.bits);
    const MrfParams params{cfg.beta_layer2, cfg.iterations};
    icm(layer1, gray, params);
    result.layer1_energy = total_energy(layer1, gray, params);
    result.per_stage_times["layer1"] = ms_since(t0);

    t0 = Clock::now();
    std::vector<Segment> segments = connected_components(layer1);
    result.layer1_components = static_cast<int>(segments.size());
    result.per_stage_times["components"] = ms_since(t0);

    // Layer 2: the unstructured graph; single-segment frames skip it.
    t0 = Clock::now();
    if (segments.size() > 1) {
        SegmentGraph graph = build_knn_graph(segments, cfg.k, gray);
        icm_graph(graph, cfg.beta_u, cfg.iterations);
        result.layer2_energy = graph_energy(graph, cfg.beta_u);
        result.segments = merge_segments(graph, segments);
    } else {
        result.segments = std::move(segments);
    }
    result.per_stage_times["graph"] = ms_since(t0);

    result.total_ms = ms_since(t_total);
    return result;
}

FrameResult run_pipeline(const RasterImage& frame, const PipelineConfig& cfg,
                         int frame_index) {
    return cfg.method == 1 ? run_method1(frame, cfg, frame_index)
                           : run_method2(frame, cfg, frame_index);
}

}  // namespace hmrf
