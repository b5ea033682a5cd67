#include "vai/metrics.hpp"

#include "vai/error.hpp"
#include "vai/exact_sum.hpp"
#include "vai/texture.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace vai {

namespace {

constexpr std::string_view kAbbrev[kMetricCount] = {"TC", "CDC", "OC", "CR", "IS", "ISH", "IC"};
constexpr std::string_view kKeys[kMetricCount] = {
    "texture_complexity", "color_distribution", "object_coherence", "contextual_relevance",
    "smoothness",         "sharpness",          "contrast",
};

}  // namespace

std::string_view metric_abbrev(Metric m) noexcept { return kAbbrev[static_cast<int>(m)]; }
std::string_view metric_key(Metric m) noexcept { return kKeys[static_cast<int>(m)]; }

double MetricVector::operator[](Metric m) const noexcept { return as_array()[static_cast<int>(m)]; }

double& MetricVector::operator[](Metric m) noexcept {
    switch (m) {
        case Metric::TextureComplexity: return texture_complexity;
        case Metric::ColorDistribution: return color_distribution;
        case Metric::ObjectCoherence: return object_coherence;
        case Metric::ContextualRelevance: return contextual_relevance;
        case Metric::Smoothness: return smoothness;
        case Metric::Sharpness: return sharpness;
        case Metric::Contrast: break;
    }
    return contrast;
}

std::array<double, kMetricCount> MetricVector::as_array() const noexcept {
    return {texture_complexity, color_distribution, object_coherence, contextual_relevance,
            smoothness,         sharpness,          contrast};
}

MetricVector MetricVector::from_array(const std::array<double, kMetricCount>& a) noexcept {
    return {a[0], a[1], a[2], a[3], a[4], a[5], a[6]};
}

void MetricConfig::validate() const {
    if (resize_longest < 0) throw ArgumentError("resize must be >= 0 (0 keeps native resolution)");
    if (hsv_bins < 1 || hsv_bins > 64) throw ArgumentError("hsv bins per axis must be in [1,64]");
    if (lbp_bins != kLbpBins) throw ArgumentError("lbp bins must be 256 (8 neighbours, radius 1)");
    if (!(canny_sigma > 0.0)) throw ArgumentError("canny sigma must be > 0");
    if (!(blur_sigma > 0.0)) throw ArgumentError("blur sigma must be > 0");
    if (!(canny_low >= 0.0) || !(canny_high <= 1.0) || canny_low > canny_high) {
        throw ArgumentError("canny thresholds must satisfy 0 <= low <= high <= 1");
    }
}

double texture_complexity(const GrayBuffer& img) { return entropy(normalized_histogram(lbp_code_map(img))); }

double color_distribution(const HsvBuffer& img, int bins_per_axis) {
    if (img.empty()) throw EmptyInputError("color_distribution: empty image");
    if (bins_per_axis < 1) throw ArgumentError("color_distribution: bins per axis must be >= 1");

    const int n = bins_per_axis;
    const double hue_step = 360.0 / n;
    std::vector<std::size_t> counts(static_cast<std::size_t>(n) * n * n, 0);
    for (const Hsv& p : img.samples()) {
        const int hb = std::min(static_cast<int>(p.h / hue_step), n - 1);
        const int sb = std::min(static_cast<int>(p.s * n), n - 1);
        const int vb = std::min(static_cast<int>(p.v * n), n - 1);
        ++counts[(static_cast<std::size_t>(hb) * n + sb) * n + vb];
    }
    std::vector<double> hist(counts.size());
    const double total = static_cast<double>(img.size());
    for (std::size_t i = 0; i < hist.size(); ++i) hist[i] = static_cast<double>(counts[i]) / total;
    return std::sqrt(population_variance(hist));
}

double edge_fraction(const EdgeMap& edges) {
    if (edges.marks.empty()) throw EmptyInputError("edge_fraction: empty edge map");
    return static_cast<double>(edges.count()) / static_cast<double>(edges.marks.size());
}

double object_coherence(const GrayBuffer& img, const CannyParams& params) { return edge_fraction(canny(img, params)); }

double contextual_relevance(const GrayBuffer& img) {
    const GradientField g = sobel_gradients(img);
    return population_variance(g.magnitude());
}

double image_smoothness(const GrayBuffer& img) {
    const GrayBuffer lap = laplacian(img);
    std::vector<double> interior;
    interior.reserve(static_cast<std::size_t>(img.width() - 2) * (img.height() - 2));
    for (int y = 1; y < img.height() - 1; ++y) {
        const auto row = lap.row(y);
        interior.insert(interior.end(), row.begin() + 1, row.end() - 1);
    }
    return 1.0 / (1.0 + population_variance(interior));
}

double image_sharpness(const GrayBuffer& img, double blur_sigma) {
    if (img.empty()) throw EmptyInputError("image_sharpness: empty image");
    const GrayBuffer diff = high_pass(img, gaussian_kernel(blur_sigma));
    double best = 0.0;
    for (double v : diff.samples()) best = std::max(best, std::fabs(v));
    return best;
}

double image_contrast(const GrayBuffer& img) {
    if (img.empty()) throw EmptyInputError("image_contrast: empty image");
    // Centring on 0.5 makes I -> 1 - I a pure sign flip of every sample.
    std::vector<double> centred(img.samples().begin(), img.samples().end());
    for (double& v : centred) v -= 0.5;
    return std::sqrt(population_variance(centred));
}

MetricVector compute_all(const GrayBuffer& gray, const HsvBuffer& hsv, const MetricConfig& cfg) {
    cfg.validate();
    if (gray.width() != hsv.width() || gray.height() != hsv.height()) {
        throw DimensionError("compute_all: gray and HSV planes differ in size");
    }
    MetricVector v;
    v.texture_complexity = texture_complexity(gray);
    v.color_distribution = color_distribution(hsv, cfg.hsv_bins);
    v.object_coherence = object_coherence(gray, {cfg.canny_sigma, cfg.canny_low, cfg.canny_high});
    v.contextual_relevance = contextual_relevance(gray);
    v.smoothness = image_smoothness(gray);
    v.sharpness = image_sharpness(gray, cfg.blur_sigma);
    v.contrast = image_contrast(gray);
    return v;
}

MetricVector compute_all(const PixelBuffer& img, const MetricConfig& cfg) {
    cfg.validate();
    const PixelBuffer analysed = resize_longest_side(img, cfg.resize_longest);
    return compute_all(to_grayscale(analysed), to_hsv(analysed), cfg);
}

}  // namespace vai
