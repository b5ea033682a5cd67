#include "vai/index.hpp"

#include "vai/error.hpp"
#include "vai/exact_sum.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace vai {

namespace {

constexpr double kDegenerateMean = 1.0 - 1e-9;

std::vector<VaiScore> assign_ranks(std::vector<VaiScore> scores) {
    std::sort(scores.begin(), scores.end(), [](const VaiScore& a, const VaiScore& b) {
        if (a.raw != b.raw) return a.raw > b.raw;
        return a.cohort < b.cohort;
    });
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (i > 0 && scores[i].raw == scores[i - 1].raw) {
            scores[i].rank = scores[i - 1].rank;
            scores[i].tied = scores[i - 1].tied = true;
        } else {
            scores[i].rank = static_cast<int>(i) + 1;
        }
    }
    return scores;
}

}  // namespace

NormalizedPool pool_normalize(const std::vector<Cohort>& cohorts, int lbp_bins) {
    if (lbp_bins < 2) throw ArgumentError("pool_normalize: lbp bins must be >= 2");

    std::size_t total = 0;
    for (const Cohort& c : cohorts) {
        if (c.members.empty()) throw ArgumentError("cohort '" + c.name + "' has no images");
        std::set<std::string> ids;
        for (const CohortMember& m : c.members) {
            if (!ids.insert(m.image_id).second) {
                throw ArgumentError("duplicate image id '" + m.image_id + "' in cohort '" + c.name + "'");
            }
        }
        total += c.members.size();
    }
    if (total == 0) throw EmptyInputError("pool_normalize: no images in pool");

    const double texture_scale = std::log2(static_cast<double>(lbp_bins));
    auto prepared = [&](const MetricVector& v) {
        auto a = v.as_array();
        a[static_cast<int>(Metric::TextureComplexity)] /= texture_scale;
        return a;
    };

    NormalizedPool out;
    out.stats.image_count = total;
    std::array<double, kMetricCount> lo;
    std::array<double, kMetricCount> hi;
    lo.fill(INFINITY);
    hi.fill(-INFINITY);
    for (const Cohort& c : cohorts) {
        for (const CohortMember& m : c.members) {
            const auto a = prepared(m.metrics);
            for (int j = 0; j < kMetricCount; ++j) {
                lo[j] = std::min(lo[j], a[j]);
                hi[j] = std::max(hi[j], a[j]);
            }
        }
    }

    std::array<ExactSum, kMetricCount> sums;
    out.cohorts.reserve(cohorts.size());
    for (const Cohort& c : cohorts) {
        Cohort nc{c.name, {}};
        nc.members.reserve(c.members.size());
        for (const CohortMember& m : c.members) {
            auto a = prepared(m.metrics);
            for (int j = 0; j < kMetricCount; ++j) {
                a[j] = hi[j] > lo[j] ? (a[j] - lo[j]) / (hi[j] - lo[j]) : 0.5;
                sums[j].add(a[j]);
            }
            nc.members.push_back({m.image_id, MetricVector::from_array(a)});
        }
        out.cohorts.push_back(std::move(nc));
    }

    for (int j = 0; j < kMetricCount; ++j) {
        MetricPoolStats& s = out.stats.metrics[j];
        s.raw_min = lo[j];
        s.raw_max = hi[j];
        const bool constant = !(hi[j] > lo[j]);
        s.pool_min = constant ? 0.5 : 0.0;
        s.pool_max = constant ? 0.5 : 1.0;
        s.pool_mean = sums[j].value() / static_cast<double>(total);
    }
    return out;
}

double vai_raw(const MetricVector& normalized, const CohortStats& stats, const MetricWeights& weights) {
    const auto x = normalized.as_array();
    double sum = 0.0;
    for (int j = 0; j < kMetricCount; ++j) {
        const MetricPoolStats& s = stats.metrics[j];
        if (!(s.pool_mean < kDegenerateMean)) {
            throw DegeneratePoolError("pool mean of " + std::string(metric_key(static_cast<Metric>(j))) +
                                          " is >= 1; the index denominator vanishes",
                                      std::string(metric_key(static_cast<Metric>(j))));
        }
        sum += weights[j] * (x[j] - s.pool_min) / (1.0 - s.pool_mean);
    }
    return 100.0 * sum;
}

double cohort_raw(const Cohort& normalized, const CohortStats& stats, const MetricWeights& weights) {
    if (normalized.members.empty()) throw EmptyInputError("cohort '" + normalized.name + "' has no images");
    std::vector<const CohortMember*> order;
    order.reserve(normalized.members.size());
    for (const CohortMember& m : normalized.members) order.push_back(&m);
    std::sort(order.begin(), order.end(),
              [](const CohortMember* a, const CohortMember* b) { return a->image_id < b->image_id; });
    double sum = 0.0;
    for (const CohortMember* m : order) sum += vai_raw(m->metrics, stats, weights);
    return sum / static_cast<double>(order.size());
}

std::vector<VaiScore> scale_scores(const std::map<std::string, double>& raws) {
    if (raws.empty()) throw EmptyInputError("scale_scores: no cohorts");
    double lo = INFINITY;
    double hi = -INFINITY;
    for (const auto& [name, raw] : raws) {
        if (!std::isfinite(raw)) throw ArgumentError("scale_scores: non-finite raw score for '" + name + "'");
        lo = std::min(lo, raw);
        hi = std::max(hi, raw);
    }
    if (!(hi > lo)) {
        throw DegenerateScalingError(raws.size() < 2 ? "scaling needs at least two cohorts"
                                                     : "all cohorts have the same raw score");
    }
    std::vector<VaiScore> scores;
    scores.reserve(raws.size());
    for (const auto& [name, raw] : raws) {
        VaiScore s;
        s.cohort = name;
        s.raw = raw;
        s.scaled = 100.0 * ((raw - lo) / (hi - lo));
        scores.push_back(std::move(s));
    }
    return assign_ranks(std::move(scores));
}

std::vector<VaiScore> rank_unscaled(const std::map<std::string, double>& raws) {
    std::vector<VaiScore> scores;
    for (const auto& [name, raw] : raws) scores.push_back({name, raw, 0.0, 0, false});
    return assign_ranks(std::move(scores));
}

}  // namespace vai
