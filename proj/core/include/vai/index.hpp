#pragma once

#include "vai/metrics.hpp"

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace vai {

struct CohortMember {
    std::string image_id;
    MetricVector metrics;
};

struct Cohort {
    std::string name;
    std::vector<CohortMember> members;
};

struct MetricPoolStats {
    double raw_min = 0.0;   ///< before min-max normalization (texture already divided by log2 bins)
    double raw_max = 0.0;
    double pool_min = 0.0;  ///< lower bound L_j of the normalized metric
    double pool_max = 0.0;
    double pool_mean = 0.0; ///< mean mu_j of the normalized metric
};

struct CohortStats {
    std::array<MetricPoolStats, kMetricCount> metrics{};
    std::size_t image_count = 0;

    const MetricPoolStats& operator[](Metric m) const noexcept { return metrics[static_cast<int>(m)]; }
};

struct NormalizedPool {
    std::vector<Cohort> cohorts;  ///< same shape as the input, metrics in [0,1]
    CohortStats stats;
};

using MetricWeights = std::array<double, kMetricCount>;
inline constexpr MetricWeights kUnitWeights = {1, 1, 1, 1, 1, 1, 1};

/// Min-max normalizes every metric over the union of all cohorts. Texture
/// entropy is first divided by log2(lbp_bins). A metric that is constant over
/// the pool maps to 0.5. Throws EmptyInputError on an empty pool and
/// ArgumentError on empty cohorts or duplicate image ids within a cohort.
NormalizedPool pool_normalize(const std::vector<Cohort>& cohorts, int lbp_bins = 256);

/// 100 * sum_j w_j (x_j - L_j) / (1 - mu_j) on normalized metrics.
/// Throws DegeneratePoolError when some mu_j >= 1 - 1e-9.
double vai_raw(const MetricVector& normalized, const CohortStats& stats, const MetricWeights& weights = kUnitWeights);

/// Mean of member raw scores, reduced in image-id order.
double cohort_raw(const Cohort& normalized, const CohortStats& stats, const MetricWeights& weights = kUnitWeights);

struct VaiScore {
    std::string cohort;
    double raw = 0.0;
    double scaled = 0.0;  ///< [0,100]
    int rank = 0;         ///< 1-based; tied cohorts share the best rank
    bool tied = false;

    friend bool operator==(const VaiScore&, const VaiScore&) = default;
};

/// Min-max scales raw cohort scores to [0,100] and ranks them descending.
/// Result is in display order: rank, then cohort name. Throws
/// DegenerateScalingError when fewer than two distinct raw values exist.
std::vector<VaiScore> scale_scores(const std::map<std::string, double>& raws);

/// Rank order without scaling, for degenerate runs: raw descending, name
/// ascending, ties flagged. `scaled` is left at 0.
std::vector<VaiScore> rank_unscaled(const std::map<std::string, double>& raws);

}  // namespace vai
