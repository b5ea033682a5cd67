#include "vai/report.hpp"

#include "vai/csv.hpp"
#include "vai/error.hpp"
#include "vai/texture.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#ifndef VAI_VERSION_STRING
#define VAI_VERSION_STRING "0.0.0"
#endif

namespace vai {

using nlohmann::json;

namespace {

double clean(double v) {
    if (!std::isfinite(v)) throw ArgumentError("report values must be finite");
    return v == 0.0 ? 0.0 : v;
}

json metrics_to_json(const MetricVector& v) {
    json j = json::object();
    for (int m = 0; m < kMetricCount; ++m) {
        j[std::string(metric_key(static_cast<Metric>(m)))] = clean(v[static_cast<Metric>(m)]);
    }
    return j;
}

MetricVector metrics_from_json(const json& j) {
    MetricVector v;
    for (int m = 0; m < kMetricCount; ++m) {
        v[static_cast<Metric>(m)] = j.at(std::string(metric_key(static_cast<Metric>(m)))).get<double>();
    }
    return v;
}

json config_to_json(const ReportConfig& c) {
    json metrics = {
        {"resize_longest", c.metrics.resize_longest}, {"hsv_bins", c.metrics.hsv_bins},
        {"lbp_bins", c.metrics.lbp_bins},             {"canny_sigma", clean(c.metrics.canny_sigma)},
        {"canny_low", clean(c.metrics.canny_low)},    {"canny_high", clean(c.metrics.canny_high)},
        {"blur_sigma", clean(c.metrics.blur_sigma)},
    };
    json weights = json::object();
    for (int m = 0; m < kMetricCount; ++m) {
        weights[std::string(metric_key(static_cast<Metric>(m)))] = clean(c.weights[m]);
    }
    json conventions = {
        {"variance", "population"},
        {"grayscale", "bt601"},
        {"lbp", "p8-r1-raw-256"},
        {"canny_thresholds", "relative-to-max-magnitude"},
        {"normalization", "pool-min-max"},
        {"cohort_score", "mean-of-image-scores"},
    };
    return {{"metrics", metrics}, {"weights", weights}, {"conventions", conventions}};
}

ReportConfig config_from_json(const json& j) {
    ReportConfig c;
    const json& m = j.at("metrics");
    c.metrics.resize_longest = m.at("resize_longest").get<int>();
    c.metrics.hsv_bins = m.at("hsv_bins").get<int>();
    c.metrics.lbp_bins = m.at("lbp_bins").get<int>();
    c.metrics.canny_sigma = m.at("canny_sigma").get<double>();
    c.metrics.canny_low = m.at("canny_low").get<double>();
    c.metrics.canny_high = m.at("canny_high").get<double>();
    c.metrics.blur_sigma = m.at("blur_sigma").get<double>();
    const json& w = j.at("weights");
    for (int k = 0; k < kMetricCount; ++k) c.weights[k] = w.at(std::string(metric_key(static_cast<Metric>(k)))).get<double>();
    return c;
}

std::string fixed(double v, int decimals = 2) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, v == 0.0 ? 0.0 : v);
    return buf;
}

// Five-stop approximation of the viridis ramp.
std::string ramp_colour(double t) {
    static constexpr double stops[5][3] = {
        {68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37},
    };
    t = std::clamp(t, 0.0, 1.0) * 4.0;
    const int i = std::min(static_cast<int>(t), 3);
    const double f = t - i;
    char buf[8];
    const auto ch = [&](int c) {
        return static_cast<int>(std::lround(stops[i][c] + f * (stops[i + 1][c] - stops[i][c])));
    };
    std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", ch(0), ch(1), ch(2));
    return buf;
}

}  // namespace

std::string_view tool_version() noexcept { return VAI_VERSION_STRING; }

std::string emit_json(const ScoreReport& report) {
    json images = json::array();
    for (const ImageRow& r : report.images) {
        images.push_back({{"image_id", r.image_id},
                          {"cohort", r.cohort},
                          {"label", r.label},
                          {"metrics", metrics_to_json(r.metrics)},
                          {"vai_raw", clean(r.vai_raw)}});
    }
    json cohorts = json::array();
    for (const CohortRow& c : report.cohorts) {
        cohorts.push_back({{"cohort", c.cohort},
                           {"images", c.images},
                           {"raw", clean(c.raw)},
                           {"scaled", c.scaled ? json(clean(*c.scaled)) : json(nullptr)},
                           {"rank", c.rank},
                           {"tied", c.tied}});
    }
    json pool = nullptr;
    if (report.pool) {
        json per_metric = json::object();
        for (int m = 0; m < kMetricCount; ++m) {
            const MetricPoolStats& s = report.pool->metrics[m];
            per_metric[std::string(metric_key(static_cast<Metric>(m)))] = {
                {"raw_min", clean(s.raw_min)},   {"raw_max", clean(s.raw_max)},     {"pool_min", clean(s.pool_min)},
                {"pool_max", clean(s.pool_max)}, {"pool_mean", clean(s.pool_mean)},
            };
        }
        pool = {{"image_count", report.pool->image_count}, {"metrics", per_metric}};
    }
    json skipped = json::array();
    for (const SkippedRow& s : report.skipped) {
        skipped.push_back({{"path", s.path}, {"cohort", s.cohort}, {"reason", s.reason}});
    }

    const json doc = {
        {"tool", report.tool},       {"version", report.version}, {"timestamp", report.timestamp},
        {"config", config_to_json(report.config)},
        {"images", images},          {"pool", pool},              {"cohorts", cohorts},
        {"warnings", report.warnings}, {"skipped", skipped},
    };
    return doc.dump(2) + "\n";
}

ScoreReport parse_json(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw FormatError(std::string("invalid report JSON: ") + e.what());
    }
    try {
        ScoreReport r;
        r.tool = doc.at("tool").get<std::string>();
        r.version = doc.at("version").get<std::string>();
        r.timestamp = doc.at("timestamp").get<std::string>();
        r.config = config_from_json(doc.at("config"));
        for (const json& i : doc.at("images")) {
            r.images.push_back({i.at("image_id").get<std::string>(), i.at("cohort").get<std::string>(),
                                i.at("label").get<std::string>(), metrics_from_json(i.at("metrics")),
                                i.at("vai_raw").get<double>()});
        }
        if (!doc.at("pool").is_null()) {
            CohortStats stats;
            stats.image_count = doc["pool"].at("image_count").get<std::size_t>();
            for (int m = 0; m < kMetricCount; ++m) {
                const json& s = doc["pool"].at("metrics").at(std::string(metric_key(static_cast<Metric>(m))));
                stats.metrics[m] = {s.at("raw_min").get<double>(), s.at("raw_max").get<double>(),
                                    s.at("pool_min").get<double>(), s.at("pool_max").get<double>(),
                                    s.at("pool_mean").get<double>()};
            }
            r.pool = stats;
        }
        for (const json& c : doc.at("cohorts")) {
            CohortRow row;
            row.cohort = c.at("cohort").get<std::string>();
            row.images = c.at("images").get<std::size_t>();
            row.raw = c.at("raw").get<double>();
            if (!c.at("scaled").is_null()) row.scaled = c["scaled"].get<double>();
            row.rank = c.at("rank").get<int>();
            row.tied = c.at("tied").get<bool>();
            r.cohorts.push_back(std::move(row));
        }
        r.warnings = doc.at("warnings").get<std::vector<std::string>>();
        for (const json& s : doc.at("skipped")) {
            r.skipped.push_back(
                {s.at("path").get<std::string>(), s.at("cohort").get<std::string>(), s.at("reason").get<std::string>()});
        }
        return r;
    } catch (const json::exception& e) {
        throw FormatError(std::string("report JSON does not match the schema: ") + e.what());
    }
}

std::string emit_csv(const ScoreReport& report) {
    std::string out = "cohort,images,raw,scaled,rank,tied\n";
    for (const CohortRow& c : report.cohorts) {
        out += csv::join({c.cohort, std::to_string(c.images), csv::format_double(c.raw),
                          c.scaled ? csv::format_double(*c.scaled) : "n/a", std::to_string(c.rank),
                          c.tied ? "true" : "false"});
        out += "\n";
    }
    return out;
}

std::string emit_metrics_csv(const ScoreReport& report) {
    std::vector<std::string> header = {"image_id", "cohort", "label"};
    for (int m = 0; m < kMetricCount; ++m) header.emplace_back(metric_key(static_cast<Metric>(m)));
    header.emplace_back("vai_raw");
    std::string out = csv::join(header) + "\n";
    for (const ImageRow& r : report.images) {
        std::vector<std::string> f = {r.image_id, r.cohort, r.label};
        for (int m = 0; m < kMetricCount; ++m) f.push_back(csv::format_double(r.metrics[static_cast<Metric>(m)]));
        f.push_back(csv::format_double(r.vai_raw));
        out += csv::join(f) + "\n";
    }
    return out;
}

std::array<AxisRange, kMetricCount> scatter_axis_ranges(const ScatterMatrixSpec& spec) {
    if (spec.points.empty()) throw EmptyInputError("scatter matrix needs at least one point");
    std::array<AxisRange, kMetricCount> ranges;
    for (int m = 0; m < kMetricCount; ++m) {
        double lo = spec.points[0][m];
        double hi = lo;
        for (const auto& p : spec.points) {
            lo = std::min(lo, p[m]);
            hi = std::max(hi, p[m]);
        }
        const double span = hi - lo;
        const double pad = span > 0.0 ? 0.05 * span : 0.05 * std::max(std::fabs(lo), 1.0);
        ranges[m] = {lo - pad, hi + pad};
    }
    return ranges;
}

std::string scatter_matrix_svg(const ScatterMatrixSpec& spec) {
    const auto ranges = scatter_axis_ranges(spec);
    const std::size_t n = spec.points.size();

    constexpr double panel = 110.0;
    constexpr double gap = 8.0;
    constexpr double left = 48.0;
    constexpr double top = 16.0;
    constexpr double bottom = 36.0;
    constexpr int hist_bins = 10;
    const double size = kMetricCount * panel + (kMetricCount - 1) * gap;
    const double width = left + size + 16.0;
    const double height = top + size + bottom;

    // Object-coherence quantile per point: mid-rank / (n - 1), 0.5 for a single point.
    constexpr int oc = static_cast<int>(Metric::ObjectCoherence);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return spec.points[a][oc] < spec.points[b][oc]; });
    std::vector<double> quantile(n, 0.5);
    if (n > 1) {
        for (std::size_t i = 0; i < n;) {
            std::size_t j = i;
            while (j + 1 < n && spec.points[order[j + 1]][oc] == spec.points[order[i]][oc]) ++j;
            const double mid = 0.5 * static_cast<double>(i + j) / static_cast<double>(n - 1);
            for (std::size_t k = i; k <= j; ++k) quantile[order[k]] = mid;
            i = j + 1;
        }
    }

    auto to_unit = [&](int m, double v) { return (v - ranges[m].lo) / (ranges[m].hi - ranges[m].lo); };

    std::string s;
    s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fixed(width) + "\" height=\"" + fixed(height) +
         "\" viewBox=\"0 0 " + fixed(width) + " " + fixed(height) + "\" font-family=\"sans-serif\" font-size=\"11\">\n";
    s += "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";

    for (int row = 0; row < kMetricCount; ++row) {
        for (int col = 0; col < kMetricCount; ++col) {
            const double x0 = left + col * (panel + gap);
            const double y0 = top + row * (panel + gap);
            const bool diag = row == col;
            s += "<g class=\"panel " + std::string(diag ? "hist" : "scatter") + "\" data-row=\"" +
                 std::string(metric_abbrev(static_cast<Metric>(row))) + "\" data-col=\"" +
                 std::string(metric_abbrev(static_cast<Metric>(col))) + "\"";
            if (diag) {
                s += " data-lo=\"" + csv::format_double(ranges[col].lo) + "\" data-hi=\"" +
                     csv::format_double(ranges[col].hi) + "\"";
            }
            s += " transform=\"translate(" + fixed(x0) + "," + fixed(y0) + ")\">\n";
            s += "<rect class=\"frame\" width=\"" + fixed(panel) + "\" height=\"" + fixed(panel) +
                 "\" fill=\"#f7f7f7\" stroke=\"#999999\" stroke-width=\"0.5\"/>\n";

            if (diag) {
                std::array<std::size_t, hist_bins> counts{};
                for (const auto& p : spec.points) {
                    const int b = std::clamp(static_cast<int>(to_unit(col, p[col]) * hist_bins), 0, hist_bins - 1);
                    ++counts[b];
                }
                const double peak = static_cast<double>(*std::max_element(counts.begin(), counts.end()));
                const double bar_w = panel / hist_bins;
                for (int b = 0; b < hist_bins; ++b) {
                    if (counts[b] == 0) continue;
                    const double h = (panel - 4.0) * static_cast<double>(counts[b]) / peak;
                    s += "<rect class=\"bar\" x=\"" + fixed(b * bar_w + 0.5) + "\" y=\"" + fixed(panel - h) +
                         "\" width=\"" + fixed(bar_w - 1.0) + "\" height=\"" + fixed(h) +
                         "\" fill=\"#3b528b\" data-count=\"" + std::to_string(counts[b]) + "\"/>\n";
                }
            } else {
                for (std::size_t i = 0; i < n; ++i) {
                    const double cx = 3.0 + (panel - 6.0) * to_unit(col, spec.points[i][col]);
                    const double cy = panel - 3.0 - (panel - 6.0) * to_unit(row, spec.points[i][row]);
                    s += "<circle cx=\"" + fixed(cx) + "\" cy=\"" + fixed(cy) + "\" r=\"2\" fill=\"" +
                         ramp_colour(quantile[i]) + "\" fill-opacity=\"0.8\"/>\n";
                }
            }
            s += "</g>\n";
        }
    }

    for (int m = 0; m < kMetricCount; ++m) {
        const std::string label(metric_abbrev(static_cast<Metric>(m)));
        const double centre = m * (panel + gap) + panel / 2.0;
        s += "<text class=\"axis-label\" x=\"" + fixed(left + centre) + "\" y=\"" + fixed(top + size + 22.0) +
             "\" text-anchor=\"middle\">" + label + "</text>\n";
        s += "<text class=\"axis-label\" x=\"" + fixed(left - 8.0) + "\" y=\"" + fixed(top + centre + 4.0) +
             "\" text-anchor=\"end\">" + label + "</text>\n";
    }
    s += "</svg>\n";
    return s;
}

PixelBuffer lbp_visualization(const GrayBuffer& img) {
    const LbpCodeMap codes = lbp_code_map(img);
    return PixelBuffer(codes.width, codes.height, 1, codes.codes);
}

}  // namespace vai
