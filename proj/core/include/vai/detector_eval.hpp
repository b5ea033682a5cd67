#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace vai {

/// Ground truth / prediction class. The positive class is Fake (AI-generated).
enum class Truth { Real, Fake };

std::string_view to_string(Truth t) noexcept;
std::optional<Truth> parse_truth(std::string_view s) noexcept;

struct PredictionRecord {
    std::string image_id;
    Truth truth = Truth::Real;
    std::optional<double> score;       ///< probability of Fake, [0,1]
    std::optional<Truth> hard_label;   ///< used when the detector emits labels only
    std::string detector;
    std::string cohort;                ///< generator name, or the shared real cohort
    std::size_t line = 0;              ///< source line, 0 when built in memory
};

struct ConfusionMatrix {
    std::uint64_t tp = 0;
    std::uint64_t fp = 0;
    std::uint64_t tn = 0;
    std::uint64_t fn = 0;

    std::uint64_t total() const noexcept { return tp + fp + tn + fn; }
    friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

/// Percentages. Recall/precision are empty when their denominator is zero.
struct EvalMetrics {
    double acc = 0.0;
    std::optional<double> recall;
    std::optional<double> precision;
};

/// Predicted Fake iff score >= threshold; hard labels pass through.
ConfusionMatrix confusion(std::span<const PredictionRecord> records, double threshold = 0.5);

EvalMetrics metrics(const ConfusionMatrix& cm);

/// Two decimals, rounded half up; "n/a" for an empty optional.
std::string format_percent(double pct);
std::string format_percent(const std::optional<double>& pct);

/// Parses a prediction manifest with header image_id,truth,score,detector,cohort
/// (any column order, extra columns ignored).
std::vector<PredictionRecord> parse_predictions(std::string_view csv_text);

struct EvalOptions {
    double default_threshold = 0.5;
    std::map<std::string, double> thresholds;  ///< per-detector override
    /// Real records whose cohort is this name (or empty) join every cell of
    /// their detector.
    std::string shared_real_cohort = "real";
    /// Keep cells without fake records as `missing` instead of failing.
    bool allow_gaps = false;

    double threshold_for(const std::string& detector) const;
};

struct EvalCell {
    std::string detector;
    std::string cohort;
    double threshold = 0.5;
    std::uint64_t n_real = 0;
    std::uint64_t n_fake = 0;
    ConfusionMatrix cm;
    bool missing = false;

    EvalMetrics metrics() const { return vai::metrics(cm); }
};

struct EvalTable {
    std::vector<std::string> detectors;
    std::vector<std::string> cohorts;
    std::vector<EvalCell> cells;  ///< detector-major

    const EvalCell& cell(std::size_t d, std::size_t c) const { return cells.at(d * cohorts.size() + c); }
};

/// Evaluates every (detector, cohort) cell. Empty `detectors`/`cohorts` are
/// taken from the records in first-appearance order. Throws CoverageError for
/// names absent from the records and for cells without fake records (unless
/// allow_gaps), ManifestError for duplicate (detector, cohort, image_id) keys
/// or records lacking both score and label.
EvalTable eval_table(std::span<const PredictionRecord> records, std::vector<std::string> detectors,
                     std::vector<std::string> cohorts, const EvalOptions& options = {});

/// detector,cohort,threshold,n_real,n_fake,tp,fp,tn,fn,acc,recall,precision
std::string emit_eval_csv(const EvalTable& table);
EvalTable parse_eval_csv(std::string_view text);

/// Accuracy matrix: one row per detector, one column per cohort.
std::string emit_accuracy_heatmap_csv(const EvalTable& table);

}  // namespace vai
