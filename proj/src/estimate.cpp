#include "hmrf/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace hmrf {

double neg_log_likelihood(const LabelField& result, const LabelField& truth) {
    if (result.width != truth.width || result.height != truth.height)
        throw std::invalid_argument("neg_log_likelihood: dimensions differ");
    double sum = 0.0;
    std::size_t active = 0;
    for (int y = 0; y < result.height; ++y) {
        for (int x = 0; x < result.width; ++x) {
            if (!result.is_active(x, y)) continue;
            const double d = (result.at(x, y) - truth.at(x, y)) / 2.0;
            sum += d * d;
            ++active;
        }
    }
    return active > 0 ? sum / static_cast<double>(active) : 0.0;
}

std::vector<double> default_beta_grid() {
    std::vector<double> grid;
    for (int i = 0; i <= 40; ++i) grid.push_back(i * 0.1);
    return grid;
}

namespace {

double run_and_score(const EstimationPair& pair, double beta, int iterations) {
    LabelField field = init_from_sign(pair.data);
    MrfParams params{beta, iterations};
    icm(field, pair.data, params);
    return neg_log_likelihood(field, pair.truth);
}

int stationarity_sweep(const EstimationPair& pair, double beta) {
    LabelField field = init_from_sign(pair.data);
    MrfParams params{beta, 64};  // generous cap; early stop decides
    const std::vector<int> flips = icm(field, pair.data, params);
    return static_cast<int>(flips.size());  // last executed sweep had zero flips
}

void per_image_bests(EstimationReport& report, std::size_t image_count,
                     int score_iterations) {
    report.per_image_best_beta.assign(image_count, 0.0);
    for (std::size_t img = 0; img < image_count; ++img) {
        double best_score = 0.0, best_beta = 0.0;
        bool have = false;
        for (const auto& entry : report.scores) {
            if (entry.image != static_cast<int>(img)) continue;
            if (entry.iterations != score_iterations) continue;
            if (!have || entry.score < best_score) {  // strict keeps the smaller beta
                best_score = entry.score;
                best_beta = entry.beta;
                have = true;
            }
        }
        report.per_image_best_beta[img] = best_beta;
    }
    double mean = 0.0;
    for (double b : report.per_image_best_beta) mean += b;
    mean /= static_cast<double>(image_count);
    // snap to the nearest grid point, ties toward the smaller one
    double best_gap = 0.0;
    bool have = false;
    for (double g : report.beta_grid) {
        const double gap = std::abs(g - mean);
        if (!have || gap < best_gap) {
            best_gap = gap;
            report.beta_star = g;
            have = true;
        }
    }
    report.image_count = static_cast<int>(image_count);
}

}  // namespace

EstimationReport estimate_beta(const std::vector<EstimationPair>& pairs,
                               const std::vector<double>& beta_grid, int iterations) {
    if (pairs.empty()) throw std::invalid_argument("estimate_beta: no image pairs");
    if (beta_grid.empty()) throw std::invalid_argument("estimate_beta: empty beta grid");
    EstimationReport report;
    report.beta_grid = beta_grid;
    std::sort(report.beta_grid.begin(), report.beta_grid.end());
    for (std::size_t img = 0; img < pairs.size(); ++img) {
        for (double beta : report.beta_grid) {
            report.scores.push_back({static_cast<int>(img), beta, iterations,
                                     run_and_score(pairs[img], beta, iterations)});
        }
        report.stationary_sweep.push_back(stationarity_sweep(pairs[img], MrfParams{}.beta));
    }
    per_image_bests(report, pairs.size(), iterations);
    return report;
}

EstimationReport sweep_report(const std::vector<EstimationPair>& pairs,
                              const std::vector<double>& beta_grid,
                              const std::vector<int>& iteration_grid) {
    if (pairs.empty()) throw std::invalid_argument("sweep_report: no image pairs");
    if (beta_grid.empty() || iteration_grid.empty())
        throw std::invalid_argument("sweep_report: empty grid");
    EstimationReport report;
    report.beta_grid = beta_grid;
    std::sort(report.beta_grid.begin(), report.beta_grid.end());
    std::vector<int> iters = iteration_grid;
    std::sort(iters.begin(), iters.end());
    for (std::size_t img = 0; img < pairs.size(); ++img) {
        for (double beta : report.beta_grid)
            for (int it : iters)
                report.scores.push_back({static_cast<int>(img), beta, it,
                                         run_and_score(pairs[img], beta, it)});
        report.stationary_sweep.push_back(stationarity_sweep(pairs[img], MrfParams{}.beta));
    }
    per_image_bests(report, pairs.size(), iters.back());
    return report;
}

std::string report_csv(const EstimationReport& report) {
    std::string out = "image_id,beta,iterations,score,flips_at_stationarity\n";
    char line[128];
    for (const auto& entry : report.scores) {
        std::snprintf(line, sizeof(line), "%d,%.1f,%d,%.6f,%d\n", entry.image, entry.beta,
                      entry.iterations, entry.score, report.stationary_sweep[entry.image]);
        out += line;
    }
    return out;
}

}  // namespace hmrf
