#pragma once

#include "vai/raster.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace vai {

/// Square correlation kernel of odd size.
class Kernel {
public:
    Kernel(int size, std::vector<double> weights);

    int size() const noexcept { return size_; }
    int radius() const noexcept { return size_ / 2; }
    std::span<const double> weights() const noexcept { return weights_; }
    /// (dx, dy) measured from the centre, each in [-radius, radius].
    double at(int dx, int dy) const noexcept {
        return weights_[static_cast<std::size_t>(dy + radius()) * size_ + (dx + radius())];
    }

    static Kernel identity() { return Kernel(1, {1.0}); }

    /// 1D factor f with weights(dx, dy) == f(dx) * f(dy), when known.
    std::span<const double> factor() const noexcept { return factor_; }
    Kernel with_factor(std::vector<double> f) &&;

private:
    int size_;
    std::vector<double> weights_;
    std::vector<double> factor_;
};

/// Horizontal and vertical Sobel responses over the valid interior:
/// gx(i,j) belongs to source pixel (i+1, j+1).
struct GradientField {
    int width = 0;
    int height = 0;
    std::vector<double> gx;
    std::vector<double> gy;

    std::vector<double> magnitude() const;
};

/// Binary edge map at source dimensions; 1 marks an edge pixel.
struct EdgeMap {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> marks;

    std::size_t count() const noexcept;
    std::uint8_t at(int x, int y) const noexcept { return marks[static_cast<std::size_t>(y) * width + x]; }
};

struct CannyParams {
    double sigma = 1.4;
    double low = 0.1;   ///< fraction of the maximum gradient magnitude
    double high = 0.3;  ///< fraction of the maximum gradient magnitude
};

/// 2*ceil(3*sigma)+1.
int gaussian_size_for(double sigma);

/// Sampled, unit-sum 2D Gaussian with its 1D factor attached. `size == 0`
/// picks gaussian_size_for(sigma).
Kernel gaussian_kernel(double sigma, int size = 0);

/// Correlation without padding; output is (w - k + 1) x (h - k + 1).
GrayBuffer convolve_valid(const GrayBuffer& img, const Kernel& k);

/// Correlation with edge-replicated borders; output keeps the input size.
GrayBuffer convolve_replicate(const GrayBuffer& img, const Kernel& k);

/// Replicate-padded Gaussian smoothing. Numerically this is convolve_replicate
/// with a Gaussian kernel, evaluated as centre + sum(w * (neighbour - centre))
/// with mirror-paired taps: constants pass through exactly and the result is
/// bit-identical under horizontal or vertical flips of the input.
GrayBuffer gaussian_blur(const GrayBuffer& img, const Kernel& gaussian);

/// Per-pixel `img - gaussian_blur(img)`, computed directly from neighbour
/// differences so the result is odd under intensity inversion.
GrayBuffer high_pass(const GrayBuffer& img, const Kernel& gaussian);

/// 3x3 Sobel over the valid interior (needs at least 3x3).
GradientField sobel_gradients(const GrayBuffer& img);

/// 4-neighbour Laplacian with replicate padding (needs at least 3x3).
GrayBuffer laplacian(const GrayBuffer& img);

/// Gaussian smoothing, Sobel, 4-direction non-maximum suppression, relative
/// double threshold and 8-connected hysteresis. Border pixels are never marked.
EdgeMap canny(const GrayBuffer& img, const CannyParams& params = {});

}  // namespace vai
