#include "vai/filters.hpp"

#include "vai/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace vai {

namespace {

// tan(22.5 deg): boundary between axis-aligned and diagonal gradient sectors.
constexpr double kTan22_5 = 0.41421356237309503;

// Magnitudes closer than this fraction of the maximum count as equal during
// non-maximum suppression, so sub-ulp noise cannot decide which side of a
// symmetric ridge survives.
constexpr double kTieTolerance = 1e-9;

void require_at_least(const GrayBuffer& img, int n, const char* op) {
    if (img.width() < n || img.height() < n) {
        throw DimensionError(std::string(op) + ": image must be at least " + std::to_string(n) + "x" +
                             std::to_string(n) + ", got " + std::to_string(img.width()) + "x" +
                             std::to_string(img.height()));
    }
}

// Copy of `img` with `r` replicated pixels on every side.
struct Padded {
    int stride;
    int r;
    std::vector<double> data;

    Padded(const GrayBuffer& img, int radius) : stride(img.width() + 2 * radius), r(radius) {
        const int w = img.width();
        const int h = img.height();
        data.resize(static_cast<std::size_t>(stride) * (h + 2 * r));
        for (int py = 0; py < h + 2 * r; ++py) {
            const int sy = std::clamp(py - r, 0, h - 1);
            const auto src = img.row(sy);
            double* dst = data.data() + static_cast<std::size_t>(py) * stride;
            for (int px = 0; px < stride; ++px) {
                dst[px] = src[std::clamp(px - r, 0, w - 1)];
            }
        }
    }

    // (x, y) in source coordinates, may extend r pixels outside.
    const double* ptr(int x, int y) const noexcept {
        return data.data() + static_cast<std::size_t>(y + r) * stride + (x + r);
    }
};

// sum over the kernel of w * (neighbour - centre), paired so that mirrored
// taps are added before weighting. Rows are processed a line at a time so the
// inner loops vectorize; the per-pixel operation order is fixed.
GrayBuffer neighbour_deviation_2d(const GrayBuffer& img, const Kernel& k) {
    const int r = k.radius();
    const int w = img.width();
    const int h = img.height();
    const Padded pad(img, r);
    GrayBuffer out(w, h);

    std::vector<double> pos(static_cast<std::size_t>(w));
    std::vector<double> neg(static_cast<std::size_t>(w));

    auto row_sum = [&](int y, int dy, double* dst) {
        const double* c = pad.ptr(0, y);
        const double* p = pad.ptr(0, y + dy);
        const double k0 = k.at(0, dy);
        for (int x = 0; x < w; ++x) dst[x] = k0 * (p[x] - c[x]);
        for (int dx = 1; dx <= r; ++dx) {
            const double kd = k.at(dx, dy);
            for (int x = 0; x < w; ++x) dst[x] += kd * ((p[x + dx] - c[x]) + (p[x - dx] - c[x]));
        }
    };

    for (int y = 0; y < h; ++y) {
        double* acc = &out.at(0, y);
        row_sum(y, 0, acc);
        for (int dy = 1; dy <= r; ++dy) {
            row_sum(y, dy, pos.data());
            row_sum(y, -dy, neg.data());
            for (int x = 0; x < w; ++x) acc[x] += pos[x] + neg[x];
        }
    }
    return out;
}

// Same quantity for a kernel f(dx) f(dy). With H the horizontal deviation of
// each row, the 2D deviation is sum_dy f(dy) * (H[y+dy] + (img[y+dy] - img[y])),
// again with mirrored rows paired. Every term is a difference of samples, so
// inversion and flips stay exact.
GrayBuffer neighbour_deviation_separable(const GrayBuffer& img, std::span<const double> f) {
    const int r = static_cast<int>(f.size()) / 2;
    const int w = img.width();
    const int h = img.height();
    const Padded pad(img, r);
    const double* fc = f.data() + r;

    const int rows = h + 2 * r;
    std::vector<double> hdev(static_cast<std::size_t>(rows) * w, 0.0);
    for (int py = 0; py < rows; ++py) {
        const double* p = pad.ptr(0, py - r);
        double* dst = hdev.data() + static_cast<std::size_t>(py) * w;
        for (int dx = 1; dx <= r; ++dx) {
            const double kd = fc[dx];
            for (int x = 0; x < w; ++x) dst[x] += kd * ((p[x + dx] - p[x]) + (p[x - dx] - p[x]));
        }
    }
    auto hrow = [&](int y) { return hdev.data() + static_cast<std::size_t>(y + r) * w; };

    GrayBuffer out(w, h);
    for (int y = 0; y < h; ++y) {
        double* acc = &out.at(0, y);
        const double* c = pad.ptr(0, y);
        const double* h0 = hrow(y);
        for (int x = 0; x < w; ++x) acc[x] = fc[0] * h0[x];
        for (int dy = 1; dy <= r; ++dy) {
            const double kd = fc[dy];
            const double* up = pad.ptr(0, y - dy);
            const double* dn = pad.ptr(0, y + dy);
            const double* hu = hrow(y - dy);
            const double* hd = hrow(y + dy);
            for (int x = 0; x < w; ++x) acc[x] += kd * ((hd[x] + (dn[x] - c[x])) + (hu[x] + (up[x] - c[x])));
        }
    }
    return out;
}

GrayBuffer neighbour_deviation(const GrayBuffer& img, const Kernel& k) {
    if (!k.factor().empty()) return neighbour_deviation_separable(img, k.factor());
    return neighbour_deviation_2d(img, k);
}

}  // namespace

Kernel::Kernel(int size, std::vector<double> weights) : size_(size), weights_(std::move(weights)) {
    if (size < 1 || size % 2 == 0) {
        throw ArgumentError("kernel size must be odd and >= 1, got " + std::to_string(size));
    }
    if (weights_.size() != static_cast<std::size_t>(size) * size) {
        throw ArgumentError("kernel weight count must be size*size");
    }
}

Kernel Kernel::with_factor(std::vector<double> f) && {
    if (f.size() != static_cast<std::size_t>(size_)) {
        throw ArgumentError("kernel factor length must equal kernel size");
    }
    factor_ = std::move(f);
    return std::move(*this);
}

std::vector<double> GradientField::magnitude() const {
    std::vector<double> m(gx.size());
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = std::sqrt(gx[i] * gx[i] + gy[i] * gy[i]);
    return m;
}

std::size_t EdgeMap::count() const noexcept {
    return static_cast<std::size_t>(std::count(marks.begin(), marks.end(), std::uint8_t{1}));
}

int gaussian_size_for(double sigma) { return 2 * static_cast<int>(std::ceil(3.0 * sigma)) + 1; }

Kernel gaussian_kernel(double sigma, int size) {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
        throw ArgumentError("gaussian sigma must be > 0");
    }
    if (size == 0) size = gaussian_size_for(sigma);
    if (size < 1 || size % 2 == 0) {
        throw ArgumentError("gaussian size must be odd and >= 1, got " + std::to_string(size));
    }
    const int r = size / 2;
    const double denom = 2.0 * sigma * sigma;
    std::vector<double> w(static_cast<std::size_t>(size) * size);
    for (int dy = -r; dy <= r; ++dy) {
        for (int dx = -r; dx <= r; ++dx) {
            w[static_cast<std::size_t>(dy + r) * size + (dx + r)] = std::exp(-(dx * dx + dy * dy) / denom);
        }
    }
    const double total = std::accumulate(w.begin(), w.end(), 0.0);
    for (double& v : w) v /= total;

    std::vector<double> f(static_cast<std::size_t>(size));
    for (int d = -r; d <= r; ++d) f[static_cast<std::size_t>(d + r)] = std::exp(-(d * d) / denom);
    const double ftotal = std::accumulate(f.begin(), f.end(), 0.0);
    for (double& v : f) v /= ftotal;
    return Kernel(size, std::move(w)).with_factor(std::move(f));
}

GrayBuffer convolve_valid(const GrayBuffer& img, const Kernel& k) {
    const int s = k.size();
    if (img.width() < s || img.height() < s) {
        throw DimensionError("convolve_valid: image smaller than kernel");
    }
    const int ow = img.width() - s + 1;
    const int oh = img.height() - s + 1;
    const auto kw = k.weights();
    GrayBuffer out(ow, oh);
    for (int y = 0; y < oh; ++y) {
        for (int x = 0; x < ow; ++x) {
            double acc = 0.0;
            for (int ky = 0; ky < s; ++ky) {
                const auto row = img.row(y + ky);
                for (int kx = 0; kx < s; ++kx) acc += kw[static_cast<std::size_t>(ky) * s + kx] * row[x + kx];
            }
            out.at(x, y) = acc;
        }
    }
    return out;
}

GrayBuffer convolve_replicate(const GrayBuffer& img, const Kernel& k) {
    const int r = k.radius();
    const int s = k.size();
    const Padded pad(img, r);
    const auto kw = k.weights();
    GrayBuffer out(img.width(), img.height());
    for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) {
            double acc = 0.0;
            for (int ky = 0; ky < s; ++ky) {
                const double* p = pad.ptr(x - r, y - r + ky);
                for (int kx = 0; kx < s; ++kx) acc += kw[static_cast<std::size_t>(ky) * s + kx] * p[kx];
            }
            out.at(x, y) = acc;
        }
    }
    return out;
}

GrayBuffer gaussian_blur(const GrayBuffer& img, const Kernel& gaussian) {
    GrayBuffer out = neighbour_deviation(img, gaussian);
    auto dst = out.samples();
    const auto src = img.samples();
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = src[i] + dst[i];
    return out;
}

GrayBuffer high_pass(const GrayBuffer& img, const Kernel& gaussian) {
    GrayBuffer out = neighbour_deviation(img, gaussian);
    for (double& v : out.samples()) v = -v;
    return out;
}

GradientField sobel_gradients(const GrayBuffer& img) {
    require_at_least(img, 3, "sobel_gradients");
    GradientField g;
    g.width = img.width() - 2;
    g.height = img.height() - 2;
    g.gx.resize(static_cast<std::size_t>(g.width) * g.height);
    g.gy.resize(g.gx.size());

    for (int j = 0; j < g.height; ++j) {
        const auto up = img.row(j);
        const auto mid = img.row(j + 1);
        const auto down = img.row(j + 2);
        for (int i = 0; i < g.width; ++i) {
            // Differences first: each negates exactly under a mirror of the input.
            const double d_top = up[i + 2] - up[i];
            const double d_mid = mid[i + 2] - mid[i];
            const double d_bot = down[i + 2] - down[i];
            const double e_left = down[i] - up[i];
            const double e_centre = down[i + 1] - up[i + 1];
            const double e_right = down[i + 2] - up[i + 2];
            const std::size_t o = static_cast<std::size_t>(j) * g.width + i;
            g.gx[o] = (d_top + d_bot) + 2.0 * d_mid;
            g.gy[o] = (e_left + e_right) + 2.0 * e_centre;
        }
    }
    return g;
}

GrayBuffer laplacian(const GrayBuffer& img) {
    require_at_least(img, 3, "laplacian");
    const int w = img.width();
    const int h = img.height();
    GrayBuffer out(w, h);
    for (int y = 0; y < h; ++y) {
        const auto up = img.row(std::max(y - 1, 0));
        const auto mid = img.row(y);
        const auto down = img.row(std::min(y + 1, h - 1));
        for (int x = 0; x < w; ++x) {
            const double left = mid[std::max(x - 1, 0)];
            const double right = mid[std::min(x + 1, w - 1)];
            out.at(x, y) = ((up[x] + down[x]) + (left + right)) - 4.0 * mid[x];
        }
    }
    return out;
}

EdgeMap canny(const GrayBuffer& img, const CannyParams& params) {
    if (!(params.low >= 0.0) || !(params.high >= 0.0)) {
        throw ArgumentError("canny thresholds must be >= 0");
    }
    if (params.low > params.high) {
        throw ArgumentError("canny low threshold exceeds high threshold");
    }
    require_at_least(img, 5, "canny");

    const GrayBuffer smoothed = gaussian_blur(img, gaussian_kernel(params.sigma));
    const GradientField g = sobel_gradients(smoothed);
    const std::vector<double> mag = g.magnitude();

    EdgeMap edges;
    edges.width = img.width();
    edges.height = img.height();
    edges.marks.assign(static_cast<std::size_t>(edges.width) * edges.height, 0);

    const double max_mag = *std::max_element(mag.begin(), mag.end());
    if (!(max_mag > 0.0)) {
        return edges;
    }
    const double tie = kTieTolerance * max_mag;
    const double low = params.low * max_mag;
    const double high = params.high * max_mag;

    const int gw = g.width;
    const int gh = g.height;
    auto idx = [gw](int i, int j) { return static_cast<std::size_t>(j) * gw + i; };

    // 0 = not a candidate, 1 = weak, 2 = strong
    std::vector<std::uint8_t> cls(mag.size(), 0);
    for (int j = 1; j < gh - 1; ++j) {
        for (int i = 1; i < gw - 1; ++i) {
            const std::size_t o = idx(i, j);
            const double m = mag[o];
            if (!(m > 0.0) || m < low) continue;

            const double ax = std::fabs(g.gx[o]);
            const double ay = std::fabs(g.gy[o]);
            int di;
            int dj;  // forward step along the quantized gradient direction
            if (ay <= kTan22_5 * ax) {
                di = 1;
                dj = 0;
            } else if (ax <= kTan22_5 * ay) {
                di = 0;
                dj = 1;
            } else if ((g.gx[o] > 0.0) == (g.gy[o] > 0.0)) {
                di = 1;
                dj = 1;
            } else {
                di = 1;
                dj = -1;
            }
            const double back = mag[idx(i - di, j - dj)];
            const double fwd = mag[idx(i + di, j + dj)];
            // Of two equal neighbours along the direction, the backward one yields.
            if (back > m + tie || fwd >= m - tie) continue;

            cls[o] = m >= high ? 2 : 1;
        }
    }

    std::vector<std::size_t> stack;
    std::vector<std::uint8_t> kept(mag.size(), 0);
    for (std::size_t o = 0; o < cls.size(); ++o) {
        if (cls[o] == 2) {
            kept[o] = 1;
            stack.push_back(o);
        }
    }
    while (!stack.empty()) {
        const std::size_t o = stack.back();
        stack.pop_back();
        const int i = static_cast<int>(o % gw);
        const int j = static_cast<int>(o / gw);
        for (int dj = -1; dj <= 1; ++dj) {
            for (int di = -1; di <= 1; ++di) {
                const int ni = i + di;
                const int nj = j + dj;
                if (ni < 0 || nj < 0 || ni >= gw || nj >= gh) continue;
                const std::size_t n = idx(ni, nj);
                if (cls[n] != 0 && !kept[n]) {
                    kept[n] = 1;
                    stack.push_back(n);
                }
            }
        }
    }

    for (int j = 0; j < gh; ++j) {
        for (int i = 0; i < gw; ++i) {
            if (kept[idx(i, j)]) {
                edges.marks[static_cast<std::size_t>(j + 1) * edges.width + (i + 1)] = 1;
            }
        }
    }
    return edges;
}

}  // namespace vai
