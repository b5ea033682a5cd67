#pragma once

#include "vai/index.hpp"
#include "vai/metrics.hpp"
#include "vai/raster.hpp"

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace vai {

std::string_view tool_version() noexcept;

/// Parameters that determine every emitted value. Worker count and output
/// location are deliberately absent: they cannot change results.
struct ReportConfig {
    MetricConfig metrics;
    MetricWeights weights = kUnitWeights;

    friend bool operator==(const ReportConfig&, const ReportConfig&) = default;
};

struct ImageRow {
    std::string image_id;
    std::string cohort;
    std::string label;  ///< "real", "fake" or empty
    MetricVector metrics;
    double vai_raw = 0.0;

    friend bool operator==(const ImageRow&, const ImageRow&) = default;
};

struct CohortRow {
    std::string cohort;
    std::size_t images = 0;
    double raw = 0.0;
    std::optional<double> scaled;  ///< empty when scaling is degenerate
    int rank = 0;
    bool tied = false;

    friend bool operator==(const CohortRow&, const CohortRow&) = default;
};

struct SkippedRow {
    std::string path;
    std::string cohort;
    std::string reason;

    friend bool operator==(const SkippedRow&, const SkippedRow&) = default;
};

struct ScoreReport {
    std::string tool = "vai";
    std::string version{tool_version()};
    std::string timestamp;  ///< ISO-8601 UTC
    ReportConfig config;
    std::vector<ImageRow> images;  ///< manifest order
    std::optional<CohortStats> pool;
    std::vector<CohortRow> cohorts;  ///< display order
    std::vector<std::string> warnings;
    std::vector<SkippedRow> skipped;
};

/// Pretty-printed JSON with sorted keys and shortest round-trip numbers,
/// newline-terminated.
std::string emit_json(const ScoreReport& report);
ScoreReport parse_json(std::string_view json);

/// Cohort table: cohort,images,raw,scaled,rank,tied
std::string emit_csv(const ScoreReport& report);
/// Per-image table: image_id,cohort,label,<seven metric keys>,vai_raw
std::string emit_metrics_csv(const ScoreReport& report);

struct ScatterMatrixSpec {
    /// One 7-vector per image, in MetricVector order (TC, CDC, OC, CR, IS, ISH, IC).
    std::vector<std::array<double, kMetricCount>> points;
};

struct AxisRange {
    double lo = 0.0;
    double hi = 0.0;
};

/// Per-metric data min/max widened by 5% of the span on both sides; a zero
/// span is widened by 5% of max(|value|, 1).
std::array<AxisRange, kMetricCount> scatter_axis_ranges(const ScatterMatrixSpec& spec);

/// 7x7 SVG panel grid: histograms on the diagonal, scatter plots elsewhere,
/// points coloured by object-coherence quantile.
std::string scatter_matrix_svg(const ScatterMatrixSpec& spec);

/// LBP codes rendered as a single-channel 8-bit image ((w-2) x (h-2)).
PixelBuffer lbp_visualization(const GrayBuffer& img);

}  // namespace vai
