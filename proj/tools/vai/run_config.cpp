#include "vai/run_config.hpp"

#include "vai/error.hpp"
#include "vai/image_io.hpp"
#include "vai/parallel.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <set>
#include <sstream>

namespace vai::cli {

using nlohmann::json;

void RunConfig::validate() const {
    metrics.validate();
    for (double w : weights) {
        if (!std::isfinite(w) || w < 0.0) throw ArgumentError("weights must be finite and >= 0");
    }
    if (workers < 1 || workers > 1024) throw ArgumentError("workers must be in [1,1024]");
    if (!(threshold >= 0.0 && threshold <= 1.0)) throw ArgumentError("threshold must be in [0,1]");
}

RunConfig default_run_config() {
    RunConfig cfg;
    cfg.workers = default_worker_count();
    if (const char* env = std::getenv("VAI_WORKERS"); env != nullptr && *env != '\0') {
        unsigned n = 0;
        const char* end = env + std::char_traits<char>::length(env);
        const auto [ptr, ec] = std::from_chars(env, end, n);
        if (ec != std::errc{} || ptr != end || n == 0) {
            throw ArgumentError(std::string("VAI_WORKERS must be a positive integer, got '") + env + "'");
        }
        cfg.workers = n;
    }
    return cfg;
}

MetricWeights parse_weights(const std::string& text) {
    MetricWeights w{};
    std::istringstream in(text);
    std::string item;
    int i = 0;
    while (std::getline(in, item, ',')) {
        if (i >= kMetricCount) throw ArgumentError("weights: expected 7 comma-separated values");
        std::size_t used = 0;
        try {
            w[i] = std::stod(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != item.size()) throw ArgumentError("weights: '" + item + "' is not a number");
        ++i;
    }
    if (i != kMetricCount) throw ArgumentError("weights: expected 7 comma-separated values");
    return w;
}

void apply_config_file(RunConfig& cfg, const std::filesystem::path& path) {
    json doc;
    try {
        const auto bytes = read_file(path);
        doc = json::parse(bytes.begin(), bytes.end());
    } catch (const json::exception& e) {
        throw FormatError("config " + path.string() + ": " + e.what());
    }
    if (!doc.is_object()) throw FormatError("config " + path.string() + ": top level must be an object");

    static const std::set<std::string> known = {"resize",     "hsv_bins",   "lbp_bins", "canny_sigma",
                                                "canny_low",  "canny_high", "blur_sigma", "weights",
                                                "workers",    "out",        "threshold"};
    for (const auto& [key, _] : doc.items()) {
        if (!known.contains(key)) throw FormatError("config " + path.string() + ": unknown key '" + key + "'");
    }

    try {
        if (doc.contains("resize")) cfg.metrics.resize_longest = doc["resize"].get<int>();
        if (doc.contains("hsv_bins")) cfg.metrics.hsv_bins = doc["hsv_bins"].get<int>();
        if (doc.contains("lbp_bins")) cfg.metrics.lbp_bins = doc["lbp_bins"].get<int>();
        if (doc.contains("canny_sigma")) cfg.metrics.canny_sigma = doc["canny_sigma"].get<double>();
        if (doc.contains("canny_low")) cfg.metrics.canny_low = doc["canny_low"].get<double>();
        if (doc.contains("canny_high")) cfg.metrics.canny_high = doc["canny_high"].get<double>();
        if (doc.contains("blur_sigma")) cfg.metrics.blur_sigma = doc["blur_sigma"].get<double>();
        if (doc.contains("workers")) cfg.workers = doc["workers"].get<unsigned>();
        if (doc.contains("out")) cfg.out_dir = doc["out"].get<std::string>();
        if (doc.contains("threshold")) cfg.threshold = doc["threshold"].get<double>();
        if (doc.contains("weights")) {
            const json& w = doc["weights"];
            if (w.is_array()) {
                if (w.size() != kMetricCount) throw FormatError("config weights: expected 7 values");
                for (int i = 0; i < kMetricCount; ++i) cfg.weights[i] = w[i].get<double>();
            } else if (w.is_object()) {
                for (const auto& [key, value] : w.items()) {
                    int idx = -1;
                    for (int i = 0; i < kMetricCount; ++i) {
                        const auto m = static_cast<Metric>(i);
                        if (key == metric_key(m) || key == metric_abbrev(m)) idx = i;
                    }
                    if (idx < 0) throw FormatError("config weights: unknown metric '" + key + "'");
                    cfg.weights[idx] = value.get<double>();
                }
            } else {
                throw FormatError("config weights: expected an array or object");
            }
        }
    } catch (const json::exception& e) {
        throw FormatError("config " + path.string() + ": " + e.what());
    }
}

}  // namespace vai::cli
