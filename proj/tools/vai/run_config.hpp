#pragma once

#include "vai/index.hpp"
#include "vai/metrics.hpp"
#include "vai/report.hpp"

#include <filesystem>
#include <string>

namespace vai::cli {

struct RunConfig {
    MetricConfig metrics;
    MetricWeights weights = kUnitWeights;
    unsigned workers = 1;
    std::filesystem::path out_dir = "vai-out";
    double threshold = 0.5;

    void validate() const;
    ReportConfig report_config() const { return {metrics, weights}; }
};

/// Built-in defaults; workers come from VAI_WORKERS, else the core count.
RunConfig default_run_config();

/// Overlays keys from a JSON config file. Recognised keys: resize, hsv_bins,
/// lbp_bins, canny_sigma, canny_low, canny_high, blur_sigma, weights (object
/// keyed by metric or 7-element array), workers, out, threshold.
void apply_config_file(RunConfig& cfg, const std::filesystem::path& path);

/// Parses "w1,w2,...,w7".
MetricWeights parse_weights(const std::string& text);

}  // namespace vai::cli
