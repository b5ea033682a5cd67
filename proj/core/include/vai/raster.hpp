#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace vai {

/// Row-major 8-bit raster. Decoded images are always RGB (3 channels);
/// single-channel buffers are produced only for grayscale renderings.
class PixelBuffer {
public:
    PixelBuffer() = default;
    PixelBuffer(int width, int height, int channels);
    PixelBuffer(int width, int height, int channels, std::vector<std::uint8_t> samples);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    int channels() const noexcept { return channels_; }
    bool empty() const noexcept { return samples_.empty(); }

    std::span<const std::uint8_t> samples() const noexcept { return samples_; }
    std::span<std::uint8_t> samples() noexcept { return samples_; }

    std::uint8_t at(int x, int y, int c) const noexcept {
        return samples_[(static_cast<std::size_t>(y) * width_ + x) * channels_ + c];
    }
    std::uint8_t& at(int x, int y, int c) noexcept {
        return samples_[(static_cast<std::size_t>(y) * width_ + x) * channels_ + c];
    }

    friend bool operator==(const PixelBuffer&, const PixelBuffer&) = default;

private:
    int width_ = 0;
    int height_ = 0;
    int channels_ = 0;
    std::vector<std::uint8_t> samples_;
};

/// Row-major double-precision intensity plane. Grayscale conversions land in
/// [0,1]; filter responses (Laplacian, differences) reuse the same carrier
/// and may leave that range.
class GrayBuffer {
public:
    GrayBuffer() = default;
    GrayBuffer(int width, int height, double fill = 0.0);
    GrayBuffer(int width, int height, std::vector<double> samples);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    std::size_t size() const noexcept { return samples_.size(); }
    bool empty() const noexcept { return samples_.empty(); }

    std::span<const double> samples() const noexcept { return samples_; }
    std::span<double> samples() noexcept { return samples_; }

    double at(int x, int y) const noexcept {
        return samples_[static_cast<std::size_t>(y) * width_ + x];
    }
    double& at(int x, int y) noexcept {
        return samples_[static_cast<std::size_t>(y) * width_ + x];
    }

    std::span<const double> row(int y) const noexcept {
        return std::span<const double>(samples_).subspan(static_cast<std::size_t>(y) * width_, width_);
    }

    friend bool operator==(const GrayBuffer&, const GrayBuffer&) = default;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<double> samples_;
};

struct Hsv {
    double h = 0.0;  ///< degrees, [0,360)
    double s = 0.0;  ///< [0,1]
    double v = 0.0;  ///< [0,1]

    friend bool operator==(const Hsv&, const Hsv&) = default;
};

class HsvBuffer {
public:
    HsvBuffer() = default;
    HsvBuffer(int width, int height, std::vector<Hsv> samples);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    std::size_t size() const noexcept { return samples_.size(); }
    bool empty() const noexcept { return samples_.empty(); }

    std::span<const Hsv> samples() const noexcept { return samples_; }
    const Hsv& at(int x, int y) const noexcept {
        return samples_[static_cast<std::size_t>(y) * width_ + x];
    }

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<Hsv> samples_;
};

/// BT.601 luma weights.
inline constexpr double kLumaR = 0.299;
inline constexpr double kLumaG = 0.587;
inline constexpr double kLumaB = 0.114;

double luma(std::uint8_t r, std::uint8_t g, std::uint8_t b) noexcept;
Hsv rgb_to_hsv(std::uint8_t r, std::uint8_t g, std::uint8_t b) noexcept;

GrayBuffer to_grayscale(const PixelBuffer& img);
HsvBuffer to_hsv(const PixelBuffer& img);

/// Pixel-centre aligned bilinear resampling with round-half-up to 8 bits.
/// Resizing to the source dimensions returns an identical buffer.
PixelBuffer resize_bilinear(const PixelBuffer& img, int width, int height);

/// Scales so the longest side equals `longest_side`, preserving aspect ratio.
/// `longest_side == 0` returns the input unchanged.
PixelBuffer resize_longest_side(const PixelBuffer& img, int longest_side);

/// Transposes rows and columns; used by invariance tests and tooling.
PixelBuffer transpose(const PixelBuffer& img);
PixelBuffer flip_horizontal(const PixelBuffer& img);
GrayBuffer transpose(const GrayBuffer& img);
GrayBuffer flip_horizontal(const GrayBuffer& img);

}  // namespace vai
