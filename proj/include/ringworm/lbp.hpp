#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "ringworm/image.hpp"

namespace ringworm {

enum class LbpSampling { grid_snap, bilinear };
enum class LbpVariant { basic, rotation_invariant, riu2 };

struct LbpParams {
    int P = 8;        // angular resolution: samples on the circle
    double R = 1.0;   // spatial resolution: circle radius in pixels
    LbpSampling sampling = LbpSampling::grid_snap;
    LbpVariant variant = LbpVariant::riu2;

    void validate() const {
        if (P < 2 || P > 24) throw std::invalid_argument("LbpParams: P must be in [2,24]");
        if (!(R > 0.0)) throw std::invalid_argument("LbpParams: R must be > 0");
    }

    int margin() const { return static_cast<int>(std::ceil(R)); }
    int bin_count() const {
        return variant == LbpVariant::riu2 ? P + 2 : (1 << P);
    }
};

// Per-pixel codes over the valid interior of the source image. Pixels within
// margin = ceil(R) of a border carry no code.
struct LbpMap {
    LbpParams params;
    int width = 0;   // source image dimensions
    int height = 0;
    int margin = 0;
    std::vector<int> codes; // row-major over the interior

    int interior_width() const { return width - 2 * margin; }
    int interior_height() const { return height - 2 * margin; }
    // (row, col) in interior coordinates; source pixel is (row+margin, col+margin)
    int code_at(int row, int col) const {
        return codes[static_cast<std::size_t>(row) * interior_width() + col];
    }
};

// The comparison convention: strictly greater neighbors produce a 1 bit,
// equal or smaller produce 0.
inline int sign_bit(double x) { return x > 0.0 ? 1 : 0; }

struct NeighborOffset {
    double dcol;
    double drow;
};

// Sample i sits at (-R sin(2*pi*i/P), R cos(2*pi*i/P)) relative to the
// center, with rows increasing downward. Sample 0 is at (0, R).
inline std::vector<NeighborOffset> neighbor_offsets(const LbpParams& params) {
    params.validate();
    std::vector<NeighborOffset> offsets(params.P);
    for (int i = 0; i < params.P; ++i) {
        const double angle = 2.0 * std::numbers::pi * i / params.P;
        offsets[i] = {-params.R * std::sin(angle), params.R * std::cos(angle)};
    }
    return offsets;
}

namespace detail {

struct SamplePoint {
    int ix, iy;     // floor of the offset
    double dx, dy;  // fractional parts, constant per offset
    int rx, ry;     // offset rounded to the nearest pixel
};

// trig residue (sin(pi) != 0 exactly) would otherwise make a nominally
// integer offset interpolate between two pixels
inline double snap_near_integer(double v) {
    const double r = std::round(v);
    return std::abs(v - r) < 1e-9 ? r : v;
}

inline std::vector<SamplePoint> sample_points(const LbpParams& params) {
    std::vector<SamplePoint> pts;
    for (const auto& off : neighbor_offsets(params)) {
        const double dcol = snap_near_integer(off.dcol);
        const double drow = snap_near_integer(off.drow);
        SamplePoint p{};
        p.ix = static_cast<int>(std::floor(dcol));
        p.iy = static_cast<int>(std::floor(drow));
        p.dx = dcol - p.ix;
        p.dy = drow - p.iy;
        p.rx = static_cast<int>(std::lround(dcol));
        p.ry = static_cast<int>(std::lround(drow));
        pts.push_back(p);
    }
    return pts;
}

inline double bilerp(double v00, double v10, double v01, double v11, double dx, double dy) {
    const double top = v00 + dx * (v10 - v00);
    const double bot = v01 + dx * (v11 - v01);
    return top + dy * (bot - top);
}

} // namespace detail

// Gray values of the P circle neighbors of (col, row), in offset order.
// grid_snap rounds each offset to the nearest pixel; bilinear interpolates
// between the four surrounding pixels.
inline std::vector<double> sample_neighbors(const GrayImage& img, int col, int row,
                                            const LbpParams& params) {
    params.validate();
    const int m = params.margin();
    if (col < m || row < m || col >= img.width - m || row >= img.height - m)
        throw std::out_of_range("sample_neighbors: center closer than ceil(R) to a border");

    std::vector<double> values;
    values.reserve(params.P);
    for (const auto& p : detail::sample_points(params)) {
        if (params.sampling == LbpSampling::grid_snap) {
            values.push_back(img.at(row + p.ry, col + p.rx));
        } else {
            const int x0 = col + p.ix, y0 = row + p.iy;
            const int x1 = std::min(x0 + 1, img.width - 1);
            const int y1 = std::min(y0 + 1, img.height - 1);
            values.push_back(detail::bilerp(img.at(y0, x0), img.at(y0, x1),
                                            img.at(y1, x0), img.at(y1, x1), p.dx, p.dy));
        }
    }
    return values;
}

// code = sum over i of sign(n_i - n_c) * 2^i; neighbor 0 is the LSB.
inline int lbp_code(double center, const std::vector<double>& neighbors) {
    const std::size_t P = neighbors.size();
    if (P < 2 || P > 24) throw std::invalid_argument("lbp_code: neighbor count must be in [2,24]");
    int code = 0;
    for (std::size_t i = 0; i < P; ++i)
        code |= sign_bit(neighbors[i] - center) << i;
    return code;
}

inline void check_code_range(int code, int P, const char* who) {
    if (P < 1 || P > 24) throw std::invalid_argument(std::string(who) + ": P must be in [1,24]");
    if (code < 0 || code >= (1 << P))
        throw std::invalid_argument(std::string(who) + ": code out of range for P-bit word");
}

// Circular right rotation of a P-bit word.
inline int ror(int code, int shift, int P) {
    check_code_range(code, P, "ror");
    const int s = ((shift % P) + P) % P;
    if (s == 0) return code;
    return ((code >> s) | (code << (P - s))) & ((1 << P) - 1);
}

// Minimum over all P rotations; constant on rotation orbits.
inline int rotation_invariant_code(int code, int P) {
    check_code_range(code, P, "rotation_invariant_code");
    int best = code;
    for (int i = 1; i < P; ++i)
        best = std::min(best, ror(code, i, P));
    return best;
}

// Number of circular 0/1 transitions in the bit string, wraparound included.
inline int uniformity(int code, int P) {
    check_code_range(code, P, "uniformity");
    int u = 0;
    for (int i = 0; i < P; ++i) {
        const int a = (code >> i) & 1;
        const int b = (code >> ((i + 1) % P)) & 1;
        u += a ^ b;
    }
    return u;
}

// Popcount for uniform patterns (U <= 2), the miscellaneous label P+1 otherwise.
inline int riu2_code(int code, int P) {
    check_code_range(code, P, "riu2_code");
    if (uniformity(code, P) <= 2) return std::popcount(static_cast<unsigned>(code));
    return P + 1;
}

inline int apply_variant(int code, const LbpParams& params) {
    switch (params.variant) {
        case LbpVariant::basic: return code;
        case LbpVariant::rotation_invariant: return rotation_invariant_code(code, params.P);
        case LbpVariant::riu2: return riu2_code(code, params.P);
    }
    return code;
}

// Computes the per-pixel code map over the valid interior.
//
// In bilinear mode the neighbor comparison interpolates the integer
// differences (pixel - center) rather than absolute gray values: the two are
// algebraically identical, but the difference form keeps gray-shift
// invariance exact in floating point (a constant region interpolates to
// exactly zero).
inline LbpMap compute_lbp_map(const GrayImage& img, const LbpParams& params) {
    params.validate();
    const int m = params.margin();
    if (img.width <= 2 * m || img.height <= 2 * m)
        throw std::invalid_argument("compute_lbp_map: image not larger than 2*ceil(R) per side");

    LbpMap map;
    map.params = params;
    map.width = img.width;
    map.height = img.height;
    map.margin = m;
    map.codes.reserve(static_cast<std::size_t>(map.interior_width()) * map.interior_height());

    const auto pts = detail::sample_points(params);
    for (int row = m; row < img.height - m; ++row) {
        for (int col = m; col < img.width - m; ++col) {
            const int center = img.at(row, col);
            int code = 0;
            for (int i = 0; i < params.P; ++i) {
                const auto& p = pts[i];
                int bit;
                if (params.sampling == LbpSampling::grid_snap) {
                    bit = sign_bit(img.at(row + p.ry, col + p.rx) - center);
                } else {
                    const int x0 = col + p.ix, y0 = row + p.iy;
                    const int x1 = std::min(x0 + 1, img.width - 1);
                    const int y1 = std::min(y0 + 1, img.height - 1);
                    const double d = detail::bilerp(img.at(y0, x0) - center, img.at(y0, x1) - center,
                                                    img.at(y1, x0) - center, img.at(y1, x1) - center,
                                                    p.dx, p.dy);
                    bit = sign_bit(d);
                }
                code |= bit << i;
            }
            map.codes.push_back(apply_variant(code, params));
        }
    }
    return map;
}

} // namespace ringworm
