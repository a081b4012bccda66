#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "ringworm/features.hpp"
#include "ringworm/image.hpp"
#include "ringworm/rng.hpp"

namespace ringworm {

// Stand-in corpus generator. The positive class carries annular
// high-contrast bands with rough in-band speckle; the negative class is
// low-contrast smoothed noise over the same skin-like base.
struct SynthConfig {
    int per_class = 70;
    int size = 144;
    int min_rings = 1;
    int max_rings = 3;
    double min_radius = 16.0;
    double max_radius = 48.0;
    double contrast = 45.0; // ring band intensity offset
    double noise = 2.0;     // base speckle sigma
    std::uint64_t seed = 42;

    void validate() const {
        if (per_class < 1) throw std::invalid_argument("SynthConfig: per_class must be >= 1");
        if (size < 8) throw std::invalid_argument("SynthConfig: size must be >= 8");
        if (min_rings < 1 || max_rings < min_rings)
            throw std::invalid_argument("SynthConfig: ring count range invalid");
        if (!(min_radius > 0.0) || max_radius < min_radius)
            throw std::invalid_argument("SynthConfig: radius range invalid");
        if (contrast < 0.0 || noise < 0.0)
            throw std::invalid_argument("SynthConfig: contrast/noise must be >= 0");
    }
};

namespace detail {

// 3x3 box blur with edge clamping, on the raw double field.
inline void box_blur(std::vector<double>& v, int size) {
    std::vector<double> out(v.size());
    for (int y = 0; y < size; ++y)
        for (int x = 0; x < size; ++x) {
            double sum = 0.0;
            for (int dy = -1; dy <= 1; ++dy)
                for (int dx = -1; dx <= 1; ++dx) {
                    const int yy = std::clamp(y + dy, 0, size - 1);
                    const int xx = std::clamp(x + dx, 0, size - 1);
                    sum += v[static_cast<std::size_t>(yy) * size + xx];
                }
            out[static_cast<std::size_t>(y) * size + x] = sum / 9.0;
        }
    v = std::move(out);
}

} // namespace detail

// Deterministic per image: the stream depends only on (seed, label, index),
// so corpora can be produced in any order or in parallel.
inline GrayImage synth_image(const SynthConfig& cfg, int label, int index) {
    cfg.validate();
    if (label != kNegative && label != kPositive)
        throw std::invalid_argument("synth_image: label must be 0 or 1");
    if (index < 0) throw std::invalid_argument("synth_image: index must be >= 0");

    const std::uint64_t stream = static_cast<std::uint64_t>(index) * 2 + static_cast<std::uint64_t>(label) + 1;
    RngEngine rng(cfg.seed + 0x9E3779B97F4A7C15ull * stream);

    const int n = cfg.size;
    std::vector<double> field(static_cast<std::size_t>(n) * n, 0.0);

    // skin-like base: flat tone, gentle ramp, one broad blob
    const double base = uniform_real(rng, 110.0, 170.0);
    const double gx = uniform_real(rng, -18.0, 18.0);
    const double gy = uniform_real(rng, -18.0, 18.0);
    const double blob_amp = uniform_real(rng, -12.0, 12.0);
    const double blob_cx = uniform_real(rng, 0.2, 0.8) * n;
    const double blob_cy = uniform_real(rng, 0.2, 0.8) * n;
    const double blob_sigma = uniform_real(rng, n / 4.0, n / 2.0);
    for (int y = 0; y < n; ++y)
        for (int x = 0; x < n; ++x) {
            const double u = n > 1 ? static_cast<double>(x) / (n - 1) - 0.5 : 0.0;
            const double v = n > 1 ? static_cast<double>(y) / (n - 1) - 0.5 : 0.0;
            const double r2 = (x - blob_cx) * (x - blob_cx) + (y - blob_cy) * (y - blob_cy);
            field[static_cast<std::size_t>(y) * n + x] =
                base + gx * u + gy * v + blob_amp * std::exp(-r2 / (2.0 * blob_sigma * blob_sigma));
        }

    // smoothed speckle shared by both classes
    std::vector<double> speckle(field.size());
    for (double& s : speckle) s = gaussian(rng) * cfg.noise;
    detail::box_blur(speckle, n);
    detail::box_blur(speckle, n);
    for (std::size_t i = 0; i < field.size(); ++i) field[i] += speckle[i];

    if (label == kPositive) {
        const int rings = static_cast<int>(uniform_int(rng, cfg.min_rings, cfg.max_rings));
        for (int r = 0; r < rings; ++r) {
            const double cx = uniform_real(rng, 0.25, 0.75) * n;
            const double cy = uniform_real(rng, 0.25, 0.75) * n;
            const double outer = uniform_real(rng, cfg.min_radius, cfg.max_radius);
            const double band = uniform_real(rng, 3.0, 8.0);
            const double amp = (uniform_int(rng, 0, 1) ? 1.0 : -1.0) * cfg.contrast *
                               uniform_real(rng, 0.8, 1.2);
            for (int y = 0; y < n; ++y)
                for (int x = 0; x < n; ++x) {
                    const double d = std::hypot(x - cx, y - cy);
                    if (d >= outer - band && d <= outer) {
                        // sharp-edged band, rough inside
                        field[static_cast<std::size_t>(y) * n + x] +=
                            amp + gaussian(rng) * cfg.noise * 2.5;
                    }
                }
        }
    }

    GrayImage img(n, n);
    for (std::size_t i = 0; i < field.size(); ++i) {
        const double v = std::floor(field[i] + 0.5);
        img.pixels[i] = static_cast<std::uint8_t>(std::clamp(v, 0.0, 255.0));
    }
    return img;
}

} // namespace ringworm
