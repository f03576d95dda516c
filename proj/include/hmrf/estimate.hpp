#pragma once

#include <string>
#include <vector>

#include "hmrf/mrf.hpp"

namespace hmrf {

/// Mean disagreement with a ground-truth labeling over the active sites:
/// each disagreeing site contributes exactly 1. Lies in [0, 1].
double neg_log_likelihood(const LabelField& result, const LabelField& truth);

struct ScoreEntry {
    int image = 0;
    double beta = 0.0;
    int iterations = 0;
    double score = 0.0;
};

struct EstimationReport {
    std::vector<double> beta_grid;
    std::vector<ScoreEntry> scores;           // one row per (image, beta, iterations)
    std::vector<double> per_image_best_beta;  // argmin score, ties toward smaller beta
    std::vector<int> stationary_sweep;        // first zero-flip sweep at the default beta
    double beta_star = 0.0;                   // mean of per-image bests, snapped to the grid
    int image_count = 0;                      // count behind the outer mean
};

struct EstimationPair {
    DataField data;
    LabelField truth;
};

/// Default grid 0.0 .. 4.0 step 0.1.
std::vector<double> default_beta_grid();

/// Runs ICM from the standard initialization for every (image, beta) cell,
/// scores against ground truth, picks per-image best betas and their mean.
EstimationReport estimate_beta(const std::vector<EstimationPair>& pairs,
                               const std::vector<double>& beta_grid, int iterations);

/// Full (image, beta, iterations) score matrix plus the stationarity check:
/// the sweep at which flips reach zero under the default beta, per image.
EstimationReport sweep_report(const std::vector<EstimationPair>& pairs,
                              const std::vector<double>& beta_grid,
                              const std::vector<int>& iteration_grid);

/// CSV rows: image_id,beta,iterations,score,flips_at_stationarity
std::string report_csv(const EstimationReport& report);

}  // namespace hmrf
