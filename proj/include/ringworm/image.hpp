#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace ringworm {

// 8-bit single-channel raster, row-major.
struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;

    GrayImage() = default;
    GrayImage(int w, int h, std::uint8_t fill = 0)
        : width(w), height(h), pixels(static_cast<std::size_t>(w) * h, fill) {
        if (w < 1 || h < 1) throw std::invalid_argument("GrayImage: dimensions must be >= 1");
    }

    std::uint8_t at(int row, int col) const {
        return pixels[static_cast<std::size_t>(row) * width + col];
    }
    std::uint8_t& at(int row, int col) {
        return pixels[static_cast<std::size_t>(row) * width + col];
    }

    bool operator==(const GrayImage& o) const = default;
};

struct Rect {
    int x = 0; // left column
    int y = 0; // top row
    int w = 0;
    int h = 0;

    bool operator==(const Rect& o) const = default;
};

inline GrayImage crop(const GrayImage& img, const Rect& r) {
    if (r.x < 0 || r.y < 0 || r.w < 1 || r.h < 1 ||
        r.x + r.w > img.width || r.y + r.h > img.height)
        throw std::out_of_range("crop: region outside image bounds");
    GrayImage out(r.w, r.h);
    for (int row = 0; row < r.h; ++row)
        for (int col = 0; col < r.w; ++col)
            out.at(row, col) = img.at(r.y + row, r.x + col);
    return out;
}

// Bilinear resample with edge clamping, center-aligned sample grid.
// Resizing to the source dimensions reproduces the image exactly.
inline GrayImage resize(const GrayImage& img, int out_w, int out_h) {
    if (out_w < 1 || out_h < 1) throw std::invalid_argument("resize: target dimensions must be >= 1");
    GrayImage out(out_w, out_h);
    const double sx = static_cast<double>(img.width) / out_w;
    const double sy = static_cast<double>(img.height) / out_h;
    for (int y = 0; y < out_h; ++y) {
        double fy = (y + 0.5) * sy - 0.5;
        fy = std::clamp(fy, 0.0, static_cast<double>(img.height - 1));
        const int y0 = static_cast<int>(std::floor(fy));
        const int y1 = std::min(y0 + 1, img.height - 1);
        const double dy = fy - y0;
        for (int x = 0; x < out_w; ++x) {
            double fx = (x + 0.5) * sx - 0.5;
            fx = std::clamp(fx, 0.0, static_cast<double>(img.width - 1));
            const int x0 = static_cast<int>(std::floor(fx));
            const int x1 = std::min(x0 + 1, img.width - 1);
            const double dx = fx - x0;
            const double a = img.at(y0, x0), b = img.at(y0, x1);
            const double c = img.at(y1, x0), d = img.at(y1, x1);
            const double top = a + dx * (b - a);
            const double bot = c + dx * (d - c);
            const double v = top + dy * (bot - top);
            const double rounded = std::floor(v + 0.5); // round half up
            out.at(y, x) = static_cast<std::uint8_t>(std::clamp(rounded, 0.0, 255.0));
        }
    }
    return out;
}

inline GrayImage rotate90ccw(const GrayImage& img) {
    GrayImage out(img.height, img.width);
    for (int row = 0; row < out.height; ++row)
        for (int col = 0; col < out.width; ++col)
            out.at(row, col) = img.at(col, img.width - 1 - row);
    return out;
}

} // namespace ringworm
