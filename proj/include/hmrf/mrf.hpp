#pragma once

#include <cstdint>
#include <vector>

#include "hmrf/image.hpp"

namespace hmrf {

using Label = std::int8_t;  // -1 background, +1 foreground

/// Hidden layer of a structured lattice MRF. An optional active mask
/// restricts which sites participate; inactive sites are never read or
/// written by the optimizer.
struct LabelField {
    int width = 0;
    int height = 0;
    std::vector<Label> labels;
    std::vector<std::uint8_t> active;  // empty = all sites active

    LabelField() = default;
    LabelField(int w, int h, Label fill = -1)
        : width(w), height(h), labels(static_cast<std::size_t>(w) * h, fill) {}

    std::size_t idx(int x, int y) const {
        return static_cast<std::size_t>(y) * width + x;
    }
    Label at(int x, int y) const { return labels[idx(x, y)]; }
    void set(int x, int y, Label v) { labels[idx(x, y)] = v; }
    bool is_active(int x, int y) const {
        return active.empty() || active[idx(x, y)] != 0;
    }

    static LabelField from_mask(const BinaryMask& mask);
    /// Foreground = active sites labeled +1.
    BinaryMask to_mask() const;
};

/// Per-site observations in [-1, +1].
struct DataField {
    int width = 0;
    int height = 0;
    std::vector<double> values;

    DataField() = default;
    DataField(int w, int h, double fill = 0.0)
        : width(w), height(h), values(static_cast<std::size_t>(w) * h, fill) {}

    double at(int x, int y) const {
        return values[static_cast<std::size_t>(y) * width + x];
    }
    void set(int x, int y, double v) {
        values[static_cast<std::size_t>(y) * width + x] = v;
    }

    static DataField from_mask(const BinaryMask& mask);
    /// 0-255 grayscale mapped to 2*(v/255) - 1.
    static DataField from_gray(const RasterImage& gray);
};

struct MrfParams {
    double beta = 1.8;   // smoothness weight; Potts prior normalized by |N|
    int iterations = 2;  // sweeps; stops early on a zero-flip sweep
};

/// Field initialization used throughout: sign of the observation, with
/// d = 0 mapping to +1. Inactive sites are set to -1.
LabelField init_from_sign(const DataField& data,
                          const std::vector<std::uint8_t>& active = {});

/// Conditional energy of one candidate label at a site:
///   ((lambda-d)/2)^2 + (beta/|N|) * sum over in-bounds active neighbors of
///   ((lambda - f_n)/2)^2
/// A site with no active neighbor contributes its likelihood term only.
double site_energy(int x, int y, Label candidate, const DataField& data,
                   const LabelField& field, const MrfParams& params);

/// One raster-order pass installing each site's conditional minimizer
/// immediately (asynchronous update). Exact energy ties keep the incumbent
/// label. Returns the number of flipped sites.
int icm_sweep(LabelField& field, const DataField& data, const MrfParams& params);

/// Runs up to params.iterations sweeps with early stop on a zero-flip sweep.
/// Returns the flip count of every executed sweep.
std::vector<int> icm(LabelField& field, const DataField& data, const MrfParams& params);

/// Sum of site_energy over active sites at their current labels. Pair
/// potentials are counted once per directed site visit, matching the
/// per-site accounting above. Comparison-only; never normalized.
double total_energy(const LabelField& field, const DataField& data,
                    const MrfParams& params);

struct BruteForceResult {
    LabelField field;
    double energy = 0.0;
};

/// Exhaustive global minimizer for lattices of at most 16 sites. Ties break
/// toward the lowest binary encoding of the labeling (-1 -> 0, raster order).
BruteForceResult brute_force_minimum(const DataField& data, const MrfParams& params);

}  // namespace hmrf
