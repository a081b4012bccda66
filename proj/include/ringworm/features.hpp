#pragma once

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "ringworm/image.hpp"
#include "ringworm/lbp.hpp"

namespace ringworm {

// Class labels used throughout: 1 = ringworm-positive, 0 = negative.
constexpr int kPositive = 1;
constexpr int kNegative = 0;
constexpr int kUnlabeled = -1;

struct FeatureVector {
    std::vector<double> values;
    int label = kUnlabeled;
};

using Histogram = std::vector<double>;

struct RegionGrid {
    int rows = 4;
    int cols = 4;
};

// Splits the full source-image area into a rows x cols grid, row-major
// (region 0 top-left). Remainder pixels go to the last region per axis.
inline std::vector<Rect> decompose_regions(int width, int height, const RegionGrid& grid) {
    if (grid.rows < 1 || grid.cols < 1)
        throw std::invalid_argument("decompose_regions: grid must be at least 1x1");
    if (width < grid.cols || height < grid.rows)
        throw std::invalid_argument("decompose_regions: grid larger than image");
    const int rw = width / grid.cols;
    const int rh = height / grid.rows;
    std::vector<Rect> regions;
    regions.reserve(static_cast<std::size_t>(grid.rows) * grid.cols);
    for (int r = 0; r < grid.rows; ++r) {
        for (int c = 0; c < grid.cols; ++c) {
            Rect rect;
            rect.x = c * rw;
            rect.y = r * rh;
            rect.w = (c == grid.cols - 1) ? width - rect.x : rw;
            rect.h = (r == grid.rows - 1) ? height - rect.y : rh;
            regions.push_back(rect);
        }
    }
    return regions;
}

// Normalized code histogram of the map cells whose source pixel falls inside
// the region. Regions that contain no valid interior pixel come back all zero.
inline Histogram region_histogram(const LbpMap& map, const Rect& region) {
    if (map.params.variant == LbpVariant::rotation_invariant)
        throw std::invalid_argument("region_histogram: rotation_invariant maps are not binned");
    if (region.x < 0 || region.y < 0 || region.w < 1 || region.h < 1 ||
        region.x + region.w > map.width || region.y + region.h > map.height)
        throw std::out_of_range("region_histogram: region outside image bounds");

    Histogram bins(static_cast<std::size_t>(map.params.bin_count()), 0.0);
    const int m = map.margin;
    // intersect the region with the valid interior, in source coordinates
    const int y0 = std::max(region.y, m);
    const int y1 = std::min(region.y + region.h, map.height - m);
    const int x0 = std::max(region.x, m);
    const int x1 = std::min(region.x + region.w, map.width - m);
    long count = 0;
    for (int y = y0; y < y1; ++y)
        for (int x = x0; x < x1; ++x) {
            ++bins[static_cast<std::size_t>(map.code_at(y - m, x - m))];
            ++count;
        }
    if (count > 0)
        for (double& b : bins) b /= static_cast<double>(count);
    return bins;
}

// The full pipeline for one image: riu2 code map, 16-zone decomposition,
// concatenated per-region histograms (P+2 bins each, so 160 values in the
// default 4x4 / P=8 configuration). Every region carries equal weight.
inline FeatureVector extract_features(const GrayImage& img, LbpParams params,
                                      const RegionGrid& grid = {}) {
    params.variant = LbpVariant::riu2;
    const LbpMap map = compute_lbp_map(img, params);
    const auto regions = decompose_regions(img.width, img.height, grid);
    FeatureVector fv;
    fv.values.reserve(regions.size() * static_cast<std::size_t>(params.bin_count()));
    for (const Rect& region : regions) {
        const Histogram h = region_histogram(map, region);
        fv.values.insert(fv.values.end(), h.begin(), h.end());
    }
    return fv;
}

enum class ScaleTarget { unit, symmetric }; // [0,1] or [-1,1]

struct MinMaxScaler {
    std::vector<double> mins;
    std::vector<double> maxs;
    ScaleTarget target = ScaleTarget::unit;

    double lo() const { return target == ScaleTarget::unit ? 0.0 : -1.0; }
    double hi() const { return 1.0; }
};

// Per-feature extrema over the training vectors only.
inline MinMaxScaler scaler_fit(const std::vector<FeatureVector>& train,
                               ScaleTarget target = ScaleTarget::unit) {
    if (train.empty()) throw std::invalid_argument("scaler_fit: no training vectors");
    const std::size_t dim = train.front().values.size();
    MinMaxScaler s;
    s.target = target;
    s.mins = train.front().values;
    s.maxs = train.front().values;
    for (const auto& fv : train) {
        if (fv.values.size() != dim)
            throw std::invalid_argument("scaler_fit: inconsistent feature dimensions");
        for (std::size_t i = 0; i < dim; ++i) {
            s.mins[i] = std::min(s.mins[i], fv.values[i]);
            s.maxs[i] = std::max(s.maxs[i], fv.values[i]);
        }
    }
    return s;
}

// Affine map of [min,max] onto the target interval, clamped so unseen test
// values stay inside it. Constant features map to the lower bound.
inline FeatureVector scaler_apply(const MinMaxScaler& s, const FeatureVector& v) {
    if (v.values.size() != s.mins.size())
        throw std::invalid_argument("scaler_apply: dimension mismatch");
    FeatureVector out;
    out.label = v.label;
    out.values.resize(v.values.size());
    for (std::size_t i = 0; i < v.values.size(); ++i) {
        const double span = s.maxs[i] - s.mins[i];
        double t = span > 0.0 ? (v.values[i] - s.mins[i]) / span : 0.0;
        t = std::clamp(t, 0.0, 1.0);
        out.values[i] = s.lo() + t * (s.hi() - s.lo());
    }
    return out;
}

inline std::vector<FeatureVector> scaler_apply_all(const MinMaxScaler& s,
                                                   const std::vector<FeatureVector>& vs) {
    std::vector<FeatureVector> out;
    out.reserve(vs.size());
    for (const auto& v : vs) out.push_back(scaler_apply(s, v));
    return out;
}

} // namespace ringworm
