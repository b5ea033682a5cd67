#include "vai/raster.hpp"

#include "vai/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace vai {

namespace {

void require_dims(int width, int height) {
    if (width < 1 || height < 1) {
        throw DimensionError("raster dimensions must be positive, got " + std::to_string(width) + "x" +
                             std::to_string(height));
    }
}

void require_rgb(const PixelBuffer& img, const char* op) {
    if (img.channels() != 3) {
        throw ArgumentError(std::string(op) + ": expected 3 channels, got " + std::to_string(img.channels()));
    }
}

}  // namespace

PixelBuffer::PixelBuffer(int width, int height, int channels)
    : PixelBuffer(width, height, channels,
                  std::vector<std::uint8_t>(static_cast<std::size_t>(std::max(width, 0)) *
                                            std::max(height, 0) * std::max(channels, 0))) {}

PixelBuffer::PixelBuffer(int width, int height, int channels, std::vector<std::uint8_t> samples)
    : width_(width), height_(height), channels_(channels), samples_(std::move(samples)) {
    require_dims(width, height);
    if (channels != 1 && channels != 3) {
        throw ArgumentError("PixelBuffer supports 1 or 3 channels, got " + std::to_string(channels));
    }
    if (samples_.size() != static_cast<std::size_t>(width) * height * channels) {
        throw DimensionError("PixelBuffer sample count does not match width*height*channels");
    }
}

GrayBuffer::GrayBuffer(int width, int height, double fill)
    : width_(width), height_(height) {
    require_dims(width, height);
    samples_.assign(static_cast<std::size_t>(width) * height, fill);
}

GrayBuffer::GrayBuffer(int width, int height, std::vector<double> samples)
    : width_(width), height_(height), samples_(std::move(samples)) {
    require_dims(width, height);
    if (samples_.size() != static_cast<std::size_t>(width) * height) {
        throw DimensionError("GrayBuffer sample count does not match width*height");
    }
}

HsvBuffer::HsvBuffer(int width, int height, std::vector<Hsv> samples)
    : width_(width), height_(height), samples_(std::move(samples)) {
    require_dims(width, height);
    if (samples_.size() != static_cast<std::size_t>(width) * height) {
        throw DimensionError("HsvBuffer sample count does not match width*height");
    }
}

double luma(std::uint8_t r, std::uint8_t g, std::uint8_t b) noexcept {
    // Integer numerator keeps the weights exact: white maps to exactly 1.0.
    const int num = 299 * r + 587 * g + 114 * b;
    return num / 255000.0;
}

Hsv rgb_to_hsv(std::uint8_t r, std::uint8_t g, std::uint8_t b) noexcept {
    const int hi = std::max({r, g, b});
    const int lo = std::min({r, g, b});
    const int delta = hi - lo;

    Hsv out;
    out.v = hi / 255.0;
    if (delta == 0) {
        return out;  // achromatic: h = s = 0
    }
    out.s = static_cast<double>(delta) / hi;

    double h;
    if (hi == r) {
        h = 60.0 * static_cast<double>(g - b) / delta;
    } else if (hi == g) {
        h = 60.0 * (static_cast<double>(b - r) / delta + 2.0);
    } else {
        h = 60.0 * (static_cast<double>(r - g) / delta + 4.0);
    }
    if (h < 0.0) h += 360.0;
    if (h >= 360.0) h -= 360.0;
    out.h = h;
    return out;
}

GrayBuffer to_grayscale(const PixelBuffer& img) {
    require_rgb(img, "to_grayscale");
    std::vector<double> out(static_cast<std::size_t>(img.width()) * img.height());
    const auto src = img.samples();
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = luma(src[3 * i], src[3 * i + 1], src[3 * i + 2]);
    }
    return GrayBuffer(img.width(), img.height(), std::move(out));
}

HsvBuffer to_hsv(const PixelBuffer& img) {
    require_rgb(img, "to_hsv");
    std::vector<Hsv> out(static_cast<std::size_t>(img.width()) * img.height());
    const auto src = img.samples();
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = rgb_to_hsv(src[3 * i], src[3 * i + 1], src[3 * i + 2]);
    }
    return HsvBuffer(img.width(), img.height(), std::move(out));
}

PixelBuffer resize_bilinear(const PixelBuffer& img, int width, int height) {
    if (width < 1 || height < 1) {
        throw ArgumentError("resize target must be at least 1x1, got " + std::to_string(width) + "x" +
                            std::to_string(height));
    }
    if (img.empty()) {
        throw EmptyInputError("resize_bilinear: empty source");
    }
    if (width == img.width() && height == img.height()) {
        return img;
    }

    const int sw = img.width();
    const int sh = img.height();
    const int ch = img.channels();
    const double scale_x = static_cast<double>(sw) / width;
    const double scale_y = static_cast<double>(sh) / height;

    struct Tap {
        int i0, i1;
        double f;
    };
    auto taps = [](int dst, int src, double scale) {
        std::vector<Tap> t(dst);
        for (int i = 0; i < dst; ++i) {
            double s = (i + 0.5) * scale - 0.5;
            s = std::clamp(s, 0.0, static_cast<double>(src - 1));
            const int i0 = static_cast<int>(std::floor(s));
            const int i1 = std::min(i0 + 1, src - 1);
            t[i] = {i0, i1, s - i0};
        }
        return t;
    };
    const auto tx = taps(width, sw, scale_x);
    const auto ty = taps(height, sh, scale_y);

    PixelBuffer out(width, height, ch);
    for (int y = 0; y < height; ++y) {
        const Tap& vy = ty[y];
        for (int x = 0; x < width; ++x) {
            const Tap& vx = tx[x];
            for (int c = 0; c < ch; ++c) {
                const double p00 = img.at(vx.i0, vy.i0, c);
                const double p10 = img.at(vx.i1, vy.i0, c);
                const double p01 = img.at(vx.i0, vy.i1, c);
                const double p11 = img.at(vx.i1, vy.i1, c);
                // a + f*(b - a) keeps constant regions exact
                const double top = p00 + vx.f * (p10 - p00);
                const double bottom = p01 + vx.f * (p11 - p01);
                const double v = top + vy.f * (bottom - top);
                out.at(x, y, c) = static_cast<std::uint8_t>(std::clamp(std::floor(v + 0.5), 0.0, 255.0));
            }
        }
    }
    return out;
}

PixelBuffer resize_longest_side(const PixelBuffer& img, int longest_side) {
    if (longest_side < 0) {
        throw ArgumentError("resize target must be >= 0");
    }
    if (longest_side == 0) {
        return img;
    }
    const int longest = std::max(img.width(), img.height());
    if (longest == longest_side) {
        return img;
    }
    const double scale = static_cast<double>(longest_side) / longest;
    const int w = std::max(1, static_cast<int>(std::lround(img.width() * scale)));
    const int h = std::max(1, static_cast<int>(std::lround(img.height() * scale)));
    return resize_bilinear(img, w, h);
}

PixelBuffer transpose(const PixelBuffer& img) {
    PixelBuffer out(img.height(), img.width(), img.channels());
    for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < img.width(); ++x)
            for (int c = 0; c < img.channels(); ++c) out.at(y, x, c) = img.at(x, y, c);
    return out;
}

PixelBuffer flip_horizontal(const PixelBuffer& img) {
    PixelBuffer out(img.width(), img.height(), img.channels());
    for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < img.width(); ++x)
            for (int c = 0; c < img.channels(); ++c) out.at(img.width() - 1 - x, y, c) = img.at(x, y, c);
    return out;
}

GrayBuffer transpose(const GrayBuffer& img) {
    GrayBuffer out(img.height(), img.width());
    for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < img.width(); ++x) out.at(y, x) = img.at(x, y);
    return out;
}

GrayBuffer flip_horizontal(const GrayBuffer& img) {
    GrayBuffer out(img.width(), img.height());
    for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < img.width(); ++x) out.at(img.width() - 1 - x, y) = img.at(x, y);
    return out;
}

}  // namespace vai
