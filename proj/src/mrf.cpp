#include "hmrf/mrf.hpp"

#include <stdexcept>

namespace hmrf {

LabelField LabelField::from_mask(const BinaryMask& mask) {
    LabelField field(mask.width, mask.height);
    for (std::size_t i = 0; i < mask.bits.size(); ++i)
        field.labels[i] = mask.bits[i] ? Label{1} : Label{-1};
    return field;
}

BinaryMask LabelField::to_mask() const {
    BinaryMask mask(width, height);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const bool act = active.empty() || active[i] != 0;
        mask.bits[i] = (act && labels[i] > 0) ? 1 : 0;
    }
    return mask;
}

DataField DataField::from_mask(const BinaryMask& mask) {
    DataField d(mask.width, mask.height);
    for (std::size_t i = 0; i < mask.bits.size(); ++i)
        d.values[i] = mask.bits[i] ? 1.0 : -1.0;
    return d;
}

DataField DataField::from_gray(const RasterImage& gray) {
    if (gray.channels != 1)
        throw std::invalid_argument("DataField::from_gray: single-channel image required");
    DataField d(gray.width, gray.height);
    for (std::size_t i = 0; i < gray.data.size(); ++i)
        d.values[i] = 2.0 * (gray.data[i] / 255.0) - 1.0;
    return d;
}

LabelField init_from_sign(const DataField& data, const std::vector<std::uint8_t>& active) {
    LabelField field(data.width, data.height);
    field.active = active;
    for (std::size_t i = 0; i < data.values.size(); ++i) {
        const bool act = active.empty() || active[i] != 0;
        field.labels[i] = (act && data.values[i] >= 0.0) ? Label{1} : Label{-1};
        if (!act) field.labels[i] = -1;
    }
    return field;
}

namespace {

inline void check_dims(const LabelField& field, const DataField& data) {
    if (field.width != data.width || field.height != data.height)
        throw std::invalid_argument("mrf: field and data dimensions differ");
}

constexpr int kDx[4] = {-1, 1, 0, 0};
constexpr int kDy[4] = {0, 0, -1, 1};

}  // namespace

double site_energy(int x, int y, Label candidate, const DataField& data,
                   const LabelField& field, const MrfParams& params) {
    const double diff = (candidate - data.at(x, y)) / 2.0;
    double energy = diff * diff;
    double prior = 0.0;
    int n = 0;
    for (int k = 0; k < 4; ++k) {
        const int nx = x + kDx[k], ny = y + kDy[k];
        if (nx < 0 || nx >= field.width || ny < 0 || ny >= field.height) continue;
        if (!field.is_active(nx, ny)) continue;
        const double d = (candidate - field.at(nx, ny)) / 2.0;
        prior += d * d;
        ++n;
    }
    if (n > 0) energy += params.beta / n * prior;
    return energy;
}

int icm_sweep(LabelField& field, const DataField& data, const MrfParams& params) {
    check_dims(field, data);
    int flips = 0;
    for (int y = 0; y < field.height; ++y) {
        for (int x = 0; x < field.width; ++x) {
            if (!field.is_active(x, y)) continue;
            const Label cur = field.at(x, y);
            const Label opp = static_cast<Label>(-cur);
            const double e_cur = site_energy(x, y, cur, data, field, params);
            const double e_opp = site_energy(x, y, opp, data, field, params);
            if (e_opp < e_cur) {  // strict: ties keep the incumbent
                field.set(x, y, opp);
                ++flips;
            }
        }
    }
    return flips;
}

std::vector<int> icm(LabelField& field, const DataField& data, const MrfParams& params) {
    if (params.iterations < 1)
        throw std::invalid_argument("icm: iterations must be >= 1");
    if (params.beta < 0.0)
        throw std::invalid_argument("icm: beta must be >= 0");
    std::vector<int> flips_per_sweep;
    for (int it = 0; it < params.iterations; ++it) {
        const int flips = icm_sweep(field, data, params);
        flips_per_sweep.push_back(flips);
        if (flips == 0) break;
    }
    return flips_per_sweep;
}

double total_energy(const LabelField& field, const DataField& data,
                    const MrfParams& params) {
    check_dims(field, data);
    double total = 0.0;
    for (int y = 0; y < field.height; ++y)
        for (int x = 0; x < field.width; ++x)
            if (field.is_active(x, y))
                total += site_energy(x, y, field.at(x, y), data, field, params);
    return total;
}

BruteForceResult brute_force_minimum(const DataField& data, const MrfParams& params) {
    const int n = data.width * data.height;
    if (n > 16)
        throw std::invalid_argument("brute_force_minimum: lattice too large (> 16 sites)");
    BruteForceResult best;
    best.field = LabelField(data.width, data.height);
    bool have = false;
    LabelField candidate(data.width, data.height);
    for (std::uint32_t code = 0; code < (1u << n); ++code) {
        for (int i = 0; i < n; ++i)
            candidate.labels[i] = (code >> i) & 1u ? Label{1} : Label{-1};
        const double e = total_energy(candidate, data, params);
        if (!have || e < best.energy) {  // strict keeps the lowest encoding on ties
            best.energy = e;
            best.field = candidate;
            have = true;
        }
    }
    return best;
}

}  // namespace hmrf
