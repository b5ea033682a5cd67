#pragma once

#include "naive.hpp"

#include "vai/raster.hpp"

#include <cstdint>
#include <cmath>
#include <functional>
#include <random>

namespace fixtures {

inline vai::GrayBuffer make_gray(int w, int h, const std::function<double(int, int)>& f) {
    vai::GrayBuffer g(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) g.at(x, y) = f(x, y);
    return g;
}

inline vai::GrayBuffer constant_gray(int w, int h, double v) { return vai::GrayBuffer(w, h, v); }

/// Samples on the 8-bit grid k/255, like decoded images.
inline vai::GrayBuffer random_gray(int w, int h, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> d(0, 255);
    return make_gray(w, h, [&](int, int) { return d(rng) / 255.0; });
}

/// Samples on the dyadic grid k/256, where 1 - x is exact.
inline vai::GrayBuffer random_dyadic_gray(int w, int h, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> d(0, 256);
    return make_gray(w, h, [&](int, int) { return d(rng) / 256.0; });
}

inline vai::PixelBuffer random_rgb(int w, int h, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> d(0, 255);
    vai::PixelBuffer p(w, h, 3);
    for (auto& s : p.samples()) s = static_cast<std::uint8_t>(d(rng));
    return p;
}

inline vai::PixelBuffer solid_rgb(int w, int h, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    vai::PixelBuffer p(w, h, 3);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            p.at(x, y, 0) = r;
            p.at(x, y, 1) = g;
            p.at(x, y, 2) = b;
        }
    return p;
}

/// Left half 0, right half 1.
inline vai::GrayBuffer vertical_step(int w, int h) {
    return make_gray(w, h, [w](int x, int) { return x < w / 2 ? 0.0 : 1.0; });
}

inline vai::GrayBuffer invert(const vai::GrayBuffer& g) {
    vai::GrayBuffer out = g;
    for (double& v : out.samples()) v = 1.0 - v;
    return out;
}

inline oracle::Plane to_plane(const vai::GrayBuffer& g) {
    return {g.width(), g.height(), std::vector<double>(g.samples().begin(), g.samples().end())};
}

inline oracle::Rgb to_rgb(const vai::PixelBuffer& p) {
    return {p.width(), p.height(), std::vector<std::uint8_t>(p.samples().begin(), p.samples().end())};
}

/// Closed-form std of a delta histogram over `bins` cells.
inline double delta_histogram_std(double bins) {
    return std::sqrt(((1.0 - 1.0 / bins) * (1.0 - 1.0 / bins) + (bins - 1.0) / (bins * bins)) / bins);
}

}  // namespace fixtures
