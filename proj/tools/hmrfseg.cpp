// hmrfseg: batch driver for the hierarchical MRF segmentation engine.
// Modes: segment, classify, estimate, bench, fixture.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hmrf/classify.hpp"
#include "hmrf/estimate.hpp"
#include "hmrf/fixture.hpp"
#include "hmrf/imgproc.hpp"
#include "hmrf/pipeline.hpp"
#include "hmrf/pnm.hpp"

namespace fs = std::filesystem;
using namespace hmrf;

namespace {

struct CommonOptions {
    std::vector<std::string> inputs;
    std::string config_path;
    std::string out_dir = "out";
    int stride = 1;
    int threads = 1;
    std::uint64_t seed = 1;
    bool dump_graph = false;

    // flag-level overrides; applied over the config file when present
    std::optional<int> method;
    std::optional<double> beta1, beta2, beta_u;
    std::optional<int> iters, k, open_radius;
    std::optional<std::string> alpha_s, alpha_l;
};

void add_common_flags(CLI::App* cmd, CommonOptions& opt, bool wants_inputs) {
    if (wants_inputs)
        cmd->add_option("inputs", opt.inputs, "frame files or directories")->required();
    cmd->add_option("--config", opt.config_path, "key = value config file");
    cmd->add_option("--out", opt.out_dir, "output directory");
    cmd->add_option("--stride", opt.stride, "process every Nth frame")->check(CLI::PositiveNumber);
    cmd->add_option("--threads", opt.threads, "frames processed concurrently")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--seed", opt.seed, "seed for randomized fixtures");
    cmd->add_option("--method", opt.method, "1 fully structured, 2 partially structured");
    cmd->add_option("--beta1", opt.beta1, "layer-1 smoothness weight");
    cmd->add_option("--beta2", opt.beta2, "layer-2 smoothness weight");
    cmd->add_option("--iters", opt.iters, "ICM sweeps per layer");
    cmd->add_option("--k", opt.k, "kNN degree of the graph layer");
    cmd->add_option("--beta-u", opt.beta_u, "graph prior weight");
    cmd->add_option("--alpha-s", opt.alpha_s, "saturation threshold 0..255 or auto");
    cmd->add_option("--alpha-l", opt.alpha_l, "luminance threshold 0..255 or auto");
    cmd->add_option("--open-radius", opt.open_radius, "opening element radius");
    cmd->add_flag("--dump-graph", opt.dump_graph, "write per-frame kNN edge lists");
}

std::optional<int> parse_alpha(const std::string& text) {
    if (text == "auto") return std::nullopt;
    const int v = std::stoi(text);
    if (v < 0 || v > 255) throw std::invalid_argument("threshold out of 0..255: " + text);
    return v;
}

PipelineConfig resolve_config(const CommonOptions& opt) {
    PipelineConfig cfg;
    if (!opt.config_path.empty()) cfg = load_config(opt.config_path);
    if (opt.method) cfg.method = *opt.method;
    if (opt.beta1) cfg.beta_layer1 = *opt.beta1;
    if (opt.beta2) cfg.beta_layer2 = *opt.beta2;
    if (opt.iters) cfg.iterations = *opt.iters;
    if (opt.k) cfg.k = *opt.k;
    if (opt.beta_u) cfg.beta_u = *opt.beta_u;
    if (opt.open_radius) cfg.open_radius = *opt.open_radius;
    if (opt.alpha_s) cfg.alpha_s = parse_alpha(*opt.alpha_s);
    if (opt.alpha_l) cfg.alpha_l = parse_alpha(*opt.alpha_l);
    cfg.validate();
    return cfg;
}

bool is_frame_file(const fs::path& p) {
    const std::string ext = p.extension().string();
    return ext == ".pgm" || ext == ".ppm";
}

std::vector<fs::path> collect_frames(const CommonOptions& opt) {
    std::vector<fs::path> frames;
    for (const auto& input : opt.inputs) {
        const fs::path p(input);
        if (fs::is_directory(p)) {
            for (const auto& entry : fs::directory_iterator(p))
                if (entry.is_regular_file() && is_frame_file(entry.path()))
                    frames.push_back(entry.path());
        } else if (fs::is_regular_file(p)) {
            frames.push_back(p);
        } else {
            throw std::runtime_error("input path not found: " + input);
        }
    }
    std::sort(frames.begin(), frames.end(),
              [](const fs::path& a, const fs::path& b) {
                  return a.filename().string() != b.filename().string()
                             ? a.filename().string() < b.filename().string()
                             : a.string() < b.string();
              });
    if (opt.stride > 1) {
        std::vector<fs::path> strided;
        for (std::size_t i = 0; i < frames.size(); i += opt.stride)
            strided.push_back(frames[i]);
        frames = std::move(strided);
    }
    if (frames.empty()) throw std::runtime_error("no input frames found");
    return frames;
}

RasterImage load_frame_rgb(const fs::path& path) {
    RasterImage img = read_pnm(path.string());
    if (img.channels == 3) return img;
    RasterImage rgb(img.width, img.height, 3);
    for (std::size_t i = 0; i < img.data.size(); ++i) {
        rgb.data[i * 3 + 0] = img.data[i];
        rgb.data[i * 3 + 1] = img.data[i];
        rgb.data[i * 3 + 2] = img.data[i];
    }
    return rgb;
}

std::string record_lines(const FrameResult& result, const ClassModel* model,
                         const FrameDims& dims) {
    std::string out;
    char buf[256];
    for (const auto& seg : result.segments) {
        std::string cls = "-";
        double score = 0.0;
        if (model) {
            const Classification c = classify(seg, *model, dims);
            cls = class_name(c.label);
            score = c.score;
        }
        std::snprintf(buf, sizeof(buf), "%d %d %zu %d %d %d %d %.6f %.6f 1 %d %s %.6f\n",
                      result.frame_index, seg.id, seg.pixel_count, seg.x_min, seg.y_min,
                      seg.x_max, seg.y_max, seg.centroid_x, seg.centroid_y,
                      seg.label > 0 ? 1 : 0, cls.c_str(), score);
        out += buf;
    }
    return out;
}

std::string graph_dump_for(const RasterImage& frame, const PipelineConfig& cfg) {
    auto [sat, lum] = rgb_to_hsl_planes(frame);
    (void)sat;
    const BinaryMask mask = preprocess(frame, cfg);
    if (mask.count() == 0) return {};
    const DataField gray = DataField::from_gray(lum);
    LabelField layer1 = init_from_sign(gray, mask.bits);
    icm(layer1, gray, MrfParams{cfg.beta_layer2, cfg.iterations});
    const std::vector<Segment> segments = connected_components(layer1);
    if (segments.size() < 2) return {};
    return dump_edges(build_knn_graph(segments, cfg.k, gray));
}

struct FrameOutput {
    int index = 0;
    bool ok = false;
    std::string error;
    FrameResult result;
    std::string records;
    std::string graph_dump;
    std::string stem;
};

int run_frames(const CommonOptions& opt, const PipelineConfig& cfg,
               const ClassModel* model) {
    const std::vector<fs::path> frames = collect_frames(opt);
    fs::create_directories(opt.out_dir);
    std::ofstream records(fs::path(opt.out_dir) / "segments.txt");
    if (!records) throw std::runtime_error("cannot write records in " + opt.out_dir);

    auto process = [&](int index) {
        FrameOutput out;
        out.index = index;
        out.stem = frames[index].stem().string();
        try {
            const RasterImage frame = load_frame_rgb(frames[index]);
            out.result = run_pipeline(frame, cfg, index);
            out.records = record_lines(out.result, model, {frame.width, frame.height});
            if (opt.dump_graph && cfg.method == 2)
                out.graph_dump = graph_dump_for(frame, cfg);
            out.ok = true;
        } catch (const std::exception& e) {
            out.error = e.what();
        }
        return out;
    };

    int processed = 0, skipped = 0;
    std::deque<std::future<FrameOutput>> window;
    std::size_t next = 0;
    auto drain_one = [&]() {
        FrameOutput out = window.front().get();
        window.pop_front();
        if (!out.ok) {
            std::cerr << "frame " << out.index << " (" << out.stem
                      << "): " << out.error << "\n";
            ++skipped;
            return;
        }
        write_mask_pgm((fs::path(opt.out_dir) / (out.stem + "_mask.pgm")).string(),
                       out.result.foreground_mask);
        records << out.records;
        if (!out.graph_dump.empty()) {
            std::ofstream g(fs::path(opt.out_dir) / (out.stem + "_graph.txt"));
            g << out.graph_dump;
        }
        std::printf("frame %d: segments=%zu layer1_energy=%.6f layer2_energy=%.6f "
                    "time=%.2fms\n",
                    out.index, out.result.segments.size(), out.result.layer1_energy,
                    out.result.layer2_energy, out.result.total_ms);
        ++processed;
    };
    for (; next < frames.size(); ++next) {
        if (static_cast<int>(window.size()) >= opt.threads) drain_one();
        window.push_back(std::async(std::launch::async, process, static_cast<int>(next)));
    }
    while (!window.empty()) drain_one();

    std::printf("processed %d frames, skipped %d\n", processed, skipped);
    if (processed == 0 && skipped > 0) return 2;
    return 0;
}

ClassModel resolve_model(const std::string& model_path, const std::string& manifest_path,
                         const std::string& save_path, const PipelineConfig& cfg) {
    ClassModel model;
    if (!model_path.empty()) {
        model = load_model(model_path);
    } else if (!manifest_path.empty()) {
        // manifest rows: image path, segment id, class label
        std::ifstream in(manifest_path);
        if (!in) throw std::runtime_error("cannot open manifest: " + manifest_path);
        std::vector<LabeledSegment> labeled;
        FrameDims dims = fixture_frame_dims();
        std::string line;
        std::map<std::string, FrameResult> cache;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#') continue;
            std::istringstream is(line);
            std::string path, id_text, label_text;
            if (!std::getline(is, path, ',') || !std::getline(is, id_text, ',') ||
                !std::getline(is, label_text))
                throw std::runtime_error("malformed manifest line: " + line);
            if (!cache.count(path)) {
                const RasterImage frame = load_frame_rgb(path);
                if (!cache.empty() && (frame.width != dims.width || frame.height != dims.height))
                    throw std::runtime_error("manifest images must share dimensions: " + path);
                dims = {frame.width, frame.height};
                cache[path] = run_pipeline(frame, cfg);
            }
            const int want = std::stoi(id_text);
            const auto& segs = cache[path].segments;
            const auto it = std::find_if(segs.begin(), segs.end(),
                                         [&](const Segment& s) { return s.id == want; });
            if (it == segs.end())
                throw std::runtime_error("segment id not found for manifest line: " + line);
            labeled.push_back({*it, class_from_name(label_text)});
        }
        model = train(labeled, dims);
    } else {
        model = default_class_model();
    }
    if (!save_path.empty()) save_model(save_path, model);
    return model;
}

struct StageStats {
    std::vector<double> samples;
    void add(double v) { samples.push_back(v); }
    double mean() const {
        double s = 0.0;
        for (double v : samples) s += v;
        return samples.empty() ? 0.0 : s / samples.size();
    }
    double quantile(double q) const {
        if (samples.empty()) return 0.0;
        std::vector<double> sorted = samples;
        std::sort(sorted.begin(), sorted.end());
        const double pos = q * (sorted.size() - 1);
        const std::size_t lo = static_cast<std::size_t>(pos);
        const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
        return sorted[lo] + (pos - lo) * (sorted[hi] - sorted[lo]);
    }
};

int run_bench(const CommonOptions& opt, const PipelineConfig& cfg, int reps) {
    const std::vector<fs::path> paths = collect_frames(opt);
    std::vector<RasterImage> frames;
    for (const auto& p : paths) frames.push_back(load_frame_rgb(p));

    run_pipeline(frames.front(), cfg);  // warm-up, excluded from stats

    std::map<std::string, StageStats> stages;
    StageStats totals;
    for (int r = 0; r < reps; ++r) {
        for (std::size_t i = 0; i < frames.size(); ++i) {
            const FrameResult result = run_pipeline(frames[i], cfg, static_cast<int>(i));
            for (const auto& [stage, ms] : result.per_stage_times) stages[stage].add(ms);
            totals.add(result.total_ms);
        }
    }
    std::printf("bench: method %d, %zu frames x %d reps, %dx%d\n", cfg.method,
                frames.size(), reps, frames.front().width, frames.front().height);
    std::printf("%-12s %10s %10s %10s\n", "stage", "mean ms", "median ms", "p95 ms");
    for (const auto& [stage, stats] : stages)
        std::printf("%-12s %10.3f %10.3f %10.3f\n", stage.c_str(), stats.mean(),
                    stats.quantile(0.5), stats.quantile(0.95));
    std::printf("%-12s %10.3f %10.3f %10.3f\n", "total", totals.mean(),
                totals.quantile(0.5), totals.quantile(0.95));
    std::printf("throughput: %.1f fps\n", 1000.0 / totals.mean());

    fs::create_directories(opt.out_dir);
    std::ofstream csv(fs::path(opt.out_dir) / "bench.csv");
    csv << "stage,mean_ms,median_ms,p95_ms\n";
    char buf[160];
    for (const auto& [stage, stats] : stages) {
        std::snprintf(buf, sizeof(buf), "%s,%.3f,%.3f,%.3f\n", stage.c_str(), stats.mean(),
                      stats.quantile(0.5), stats.quantile(0.95));
        csv << buf;
    }
    std::snprintf(buf, sizeof(buf), "total,%.3f,%.3f,%.3f\n", totals.mean(),
                  totals.quantile(0.5), totals.quantile(0.95));
    csv << buf;
    return 0;
}

int run_estimate(const CommonOptions& opt, double beta_min, double beta_max,
                 double beta_step, int iterations, const std::string& iter_grid_text) {
    const std::vector<fs::path> frames = collect_frames(opt);
    std::vector<EstimationPair> pairs;
    for (const auto& path : frames) {
        if (path.string().find(".truth.") != std::string::npos) continue;
        fs::path truth_path = path;
        truth_path.replace_extension();
        truth_path += ".truth.pgm";
        if (!fs::exists(truth_path))
            throw std::runtime_error("missing ground truth for " + path.string() +
                                     " (expected " + truth_path.string() + ")");
        const RasterImage data_img = read_pnm(path.string());
        if (data_img.channels != 1)
            throw std::runtime_error("estimate expects grayscale frames: " + path.string());
        EstimationPair pair;
        pair.data = DataField::from_gray(data_img);
        pair.truth = LabelField::from_mask(read_mask_pgm(truth_path.string()));
        pairs.push_back(std::move(pair));
    }
    if (pairs.empty()) throw std::runtime_error("no (frame, truth) pairs found");

    // multiples, not accumulation: grid points stay exact where the step allows
    std::vector<double> grid;
    const int steps = static_cast<int>(std::lround((beta_max - beta_min) / beta_step));
    for (int i = 0; i <= steps; ++i) grid.push_back(beta_min + i * beta_step);

    EstimationReport report;
    if (!iter_grid_text.empty()) {
        std::vector<int> iter_grid;
        std::istringstream is(iter_grid_text);
        std::string tok;
        while (std::getline(is, tok, ',')) iter_grid.push_back(std::stoi(tok));
        report = sweep_report(pairs, grid, iter_grid);
    } else {
        report = estimate_beta(pairs, grid, iterations);
    }

    fs::create_directories(opt.out_dir);
    const fs::path csv_path = fs::path(opt.out_dir) / "estimate.csv";
    std::ofstream csv(csv_path);
    csv << report_csv(report);
    for (std::size_t i = 0; i < report.per_image_best_beta.size(); ++i)
        std::printf("image %zu: best beta %.1f, stationary at sweep %d\n", i,
                    report.per_image_best_beta[i], report.stationary_sweep[i]);
    std::printf("beta_star = %.6f\n", report.beta_star);
    std::printf("report: %s\n", csv_path.string().c_str());
    return 0;
}

int run_fixture(const CommonOptions& opt, bool clean) {
    fs::create_directories(opt.out_dir);
    const fs::path dir(opt.out_dir);
    std::vector<std::string> written;

    const FixtureScene scene = make_scene(opt.seed, !clean);
    write_ppm((dir / "fig5.ppm").string(), scene.image);
    written.push_back("fig5.ppm");
    RasterImage truth(scene.width, scene.height, 1);
    for (std::size_t i = 0; i < scene.truth.size(); ++i) truth.data[i] = scene.truth[i];
    write_pgm((dir / "fig5_truth.pgm").string(), truth);
    written.push_back("fig5_truth.pgm");

    auto encode = [](const DataField& data) {
        RasterImage img(data.width, data.height, 1);
        for (std::size_t i = 0; i < data.values.size(); ++i)
            img.data[i] = static_cast<std::uint8_t>(
                std::lround(255.0 * (data.values[i] + 1.0) / 2.0));
        return img;
    };
    auto write_field = [&](const std::string& name, const CalibrationField& field) {
        write_pgm((dir / name).string(), encode(field.data));
        written.push_back(name);
    };
    // calibration fields for the beta studies (64x64 on uniform truth)
    write_field("calib_noise01.pgm", make_noise_field(64, 64, 0.01, opt.seed, true));
    write_field("calib_noise10.pgm", make_noise_field(64, 64, 0.10, opt.seed, false));
    // frame A: full-contrast pairs; B: shallow isolated; C: mid-contrast pairs
    write_field("frame_a.pgm",
                make_noise_field(64, 64, 0.02, opt.seed + 1, false, 1.0, true));
    write_field("frame_b.pgm",
                make_noise_field(64, 64, 0.02, opt.seed + 2, true, 1.0 - 26.0 / 255.0));
    write_field("frame_c.pgm",
                make_noise_field(64, 64, 0.02, opt.seed + 3, false, 1.0 - 66.0 / 255.0, true));
    RasterImage uniform(64, 64, 1, 255);
    for (const char* stem : {"calib_noise01", "calib_noise10", "frame_a", "frame_b", "frame_c"}) {
        const std::string name = std::string(stem) + ".truth.pgm";
        write_pgm((dir / name).string(), uniform);
        written.push_back(name);
    }
    for (const auto& name : written) std::printf("%s\n", (dir / name).string().c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hierarchical MRF segmentation and classification"};
    app.require_subcommand(1);

    CommonOptions opt;
    std::string model_path, manifest_path, save_model_path;
    double beta_min = 0.0, beta_max = 4.0, beta_step = 0.1;
    std::string iter_grid;
    int reps = 5;
    bool clean_fixture = false;

    CLI::App* seg = app.add_subcommand("segment", "segment frames, write masks + records");
    add_common_flags(seg, opt, true);
    CLI::App* cls = app.add_subcommand("classify", "segment + per-segment class labels");
    add_common_flags(cls, opt, true);
    cls->add_option("--model", model_path, "class model file");
    cls->add_option("--train-manifest", manifest_path,
                    "CSV of image path, segment id, label");
    cls->add_option("--save-model", save_model_path, "write the model used");
    CLI::App* est = app.add_subcommand("estimate", "beta estimation against ground truth");
    add_common_flags(est, opt, true);
    est->add_option("--beta-min", beta_min);
    est->add_option("--beta-max", beta_max);
    est->add_option("--beta-step", beta_step);
    est->add_option("--iter-grid", iter_grid, "comma list for a full sweep report");
    CLI::App* bench = app.add_subcommand("bench", "timing summary, I/O excluded");
    add_common_flags(bench, opt, true);
    bench->add_option("--reps", reps, "passes over the frame set")->check(CLI::PositiveNumber);
    CLI::App* fix = app.add_subcommand("fixture", "write the synthetic test image suite");
    add_common_flags(fix, opt, false);
    fix->add_flag("--clean", clean_fixture, "zero-noise variant");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (fix->parsed()) return run_fixture(opt, clean_fixture);
        const PipelineConfig cfg = resolve_config(opt);
        if (seg->parsed()) return run_frames(opt, cfg, nullptr);
        if (cls->parsed()) {
            const ClassModel model =
                resolve_model(model_path, manifest_path, save_model_path, cfg);
            return run_frames(opt, cfg, &model);
        }
        if (est->parsed())
            return run_estimate(opt, beta_min, beta_max, beta_step,
                                opt.iters.value_or(2), iter_grid);
        if (bench->parsed()) return run_bench(opt, cfg, reps);
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
