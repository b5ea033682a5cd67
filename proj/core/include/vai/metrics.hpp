#pragma once

#include "vai/filters.hpp"
#include "vai/raster.hpp"

#include <array>
#include <string_view>

namespace vai {

/// Index of each metric inside a MetricVector, in reporting order.
enum class Metric : int {
    TextureComplexity = 0,
    ColorDistribution,
    ObjectCoherence,
    ContextualRelevance,
    Smoothness,
    Sharpness,
    Contrast,
};

inline constexpr int kMetricCount = 7;

/// Short labels used in reports and figures: TC, CDC, OC, CR, IS, ISH, IC.
std::string_view metric_abbrev(Metric m) noexcept;
/// snake_case field names used in JSON/CSV.
std::string_view metric_key(Metric m) noexcept;

struct MetricVector {
    double texture_complexity = 0.0;    ///< LBP entropy, bits
    double color_distribution = 0.0;    ///< std of the normalized HSV histogram
    double object_coherence = 0.0;      ///< Canny edge fraction, [0,1]
    double contextual_relevance = 0.0;  ///< variance of Sobel magnitude
    double smoothness = 0.0;            ///< 1 / (1 + var(Laplacian)), (0,1]
    double sharpness = 0.0;             ///< max |I - blur(I)|, [0,1]
    double contrast = 0.0;              ///< std of gray levels, [0,0.5]

    double operator[](Metric m) const noexcept;
    double& operator[](Metric m) noexcept;
    std::array<double, kMetricCount> as_array() const noexcept;
    static MetricVector from_array(const std::array<double, kMetricCount>& a) noexcept;

    friend bool operator==(const MetricVector&, const MetricVector&) = default;
};

struct MetricConfig {
    int resize_longest = 512;  ///< 0 keeps native resolution
    int hsv_bins = 8;          ///< per axis; the histogram has hsv_bins^3 cells
    int lbp_bins = 256;
    double canny_sigma = 1.4;
    double canny_low = 0.1;
    double canny_high = 0.3;
    double blur_sigma = 1.0;

    void validate() const;
    friend bool operator==(const MetricConfig&, const MetricConfig&) = default;
};

double texture_complexity(const GrayBuffer& img);

/// Population std over every cell of the normalized (bins^3) HSV histogram.
double color_distribution(const HsvBuffer& img, int bins_per_axis = 8);

double object_coherence(const GrayBuffer& img, const CannyParams& params = {});
/// Edge-pixel fraction of an already computed edge map.
double edge_fraction(const EdgeMap& edges);

double contextual_relevance(const GrayBuffer& img);

/// Uses the Laplacian variance over interior pixels, where the 3x3 stencil
/// needs no padding.
double image_smoothness(const GrayBuffer& img);

double image_sharpness(const GrayBuffer& img, double blur_sigma = 1.0);

double image_contrast(const GrayBuffer& img);

/// Resize, convert to gray and HSV, evaluate all seven metrics.
MetricVector compute_all(const PixelBuffer& img, const MetricConfig& cfg = {});

/// All seven metrics on an image already at analysis resolution.
MetricVector compute_all(const GrayBuffer& gray, const HsvBuffer& hsv, const MetricConfig& cfg = {});

}  // namespace vai
