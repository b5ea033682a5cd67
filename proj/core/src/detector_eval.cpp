#include "vai/detector_eval.hpp"

#include "vai/csv.hpp"
#include "vai/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>
#include <tuple>

namespace vai {

namespace {

const char* const kPredictionColumns[] = {"image_id", "truth", "score", "detector", "cohort"};

const std::vector<std::string> kEvalColumns = {"detector", "cohort", "threshold", "n_real", "n_fake", "tp",
                                               "fp",       "tn",     "fn",        "acc",    "recall", "precision"};

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t");
    return std::string(s.substr(b, e - b + 1));
}

std::optional<double> parse_number(std::string_view s) {
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

std::uint64_t parse_count(const std::string& s, std::size_t line) {
    std::uint64_t v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
        throw ManifestError("invalid count '" + s + "'", line);
    }
    return v;
}

bool predicts_fake(const PredictionRecord& r, double threshold) {
    if (r.hard_label) return *r.hard_label == Truth::Fake;
    if (r.score) return *r.score >= threshold;
    throw ManifestError("record '" + r.image_id + "' has neither a score nor a label", r.line);
}

void check_threshold(double t) {
    if (!(t >= 0.0 && t <= 1.0)) throw ArgumentError("threshold must be in [0,1]");
}

}  // namespace

std::string_view to_string(Truth t) noexcept { return t == Truth::Fake ? "fake" : "real"; }

std::optional<Truth> parse_truth(std::string_view s) noexcept {
    if (s == "fake" || s == "FAKE" || s == "Fake") return Truth::Fake;
    if (s == "real" || s == "REAL" || s == "Real") return Truth::Real;
    return std::nullopt;
}

ConfusionMatrix confusion(std::span<const PredictionRecord> records, double threshold) {
    check_threshold(threshold);
    ConfusionMatrix cm;
    for (const PredictionRecord& r : records) {
        const bool fake = predicts_fake(r, threshold);
        if (r.truth == Truth::Fake) {
            fake ? ++cm.tp : ++cm.fn;
        } else {
            fake ? ++cm.fp : ++cm.tn;
        }
    }
    return cm;
}

EvalMetrics metrics(const ConfusionMatrix& cm) {
    if (cm.total() == 0) throw EmptyInputError("metrics: empty confusion matrix");
    EvalMetrics m;
    m.acc = 100.0 * static_cast<double>(cm.tp + cm.tn) / static_cast<double>(cm.total());
    if (cm.tp + cm.fn > 0) m.recall = 100.0 * static_cast<double>(cm.tp) / static_cast<double>(cm.tp + cm.fn);
    if (cm.tp + cm.fp > 0) m.precision = 100.0 * static_cast<double>(cm.tp) / static_cast<double>(cm.tp + cm.fp);
    return m;
}

std::string format_percent(double pct) {
    if (!std::isfinite(pct)) throw ArgumentError("format_percent: non-finite value");
    const auto hundredths = static_cast<long long>(std::floor(pct * 100.0 + 0.5));
    const long long whole = hundredths / 100;
    const long long frac = std::llabs(hundredths % 100);
    std::string out = (hundredths < 0 && whole == 0) ? "-0" : std::to_string(whole);
    out.push_back('.');
    if (frac < 10) out.push_back('0');
    out += std::to_string(frac);
    return out;
}

std::string format_percent(const std::optional<double>& pct) { return pct ? format_percent(*pct) : "n/a"; }

std::vector<PredictionRecord> parse_predictions(std::string_view csv_text) {
    const auto rows = csv::parse(csv_text);
    if (rows.empty()) throw ManifestError("prediction manifest is empty", 1);

    std::map<std::string, std::size_t> column;
    for (std::size_t i = 0; i < rows[0].fields.size(); ++i) column[trim(rows[0].fields[i])] = i;
    std::vector<std::string> missing;
    for (const char* name : kPredictionColumns) {
        if (!column.count(name)) missing.emplace_back(name);
    }
    if (!missing.empty()) {
        std::string list;
        for (const auto& m : missing) list += (list.empty() ? "" : ", ") + m;
        throw ManifestError("prediction manifest header is missing column(s): " + list, rows[0].line);
    }

    std::vector<PredictionRecord> out;
    out.reserve(rows.size() - 1);
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        auto field = [&](const char* name) -> std::string {
            const std::size_t i = column.at(name);
            if (i >= row.fields.size()) throw ManifestError(std::string("missing field '") + name + "'", row.line);
            return trim(row.fields[i]);
        };
        PredictionRecord rec;
        rec.line = row.line;
        rec.image_id = field("image_id");
        if (rec.image_id.empty()) throw ManifestError("empty image_id", row.line);
        const auto truth = parse_truth(field("truth"));
        if (!truth) throw ManifestError("truth must be 'real' or 'fake'", row.line);
        rec.truth = *truth;

        const std::string score = field("score");
        if (score.empty()) {
            throw ManifestError("record '" + rec.image_id + "' has neither a score nor a label", row.line);
        }
        if (auto label = parse_truth(score)) {
            rec.hard_label = label;
        } else if (auto v = parse_number(score)) {
            if (!(*v >= 0.0 && *v <= 1.0)) throw ManifestError("score '" + score + "' outside [0,1]", row.line);
            rec.score = v;
        } else {
            throw ManifestError("score '" + score + "' is neither a number nor real/fake", row.line);
        }
        rec.detector = field("detector");
        if (rec.detector.empty()) throw ManifestError("empty detector", row.line);
        rec.cohort = field("cohort");
        out.push_back(std::move(rec));
    }
    return out;
}

double EvalOptions::threshold_for(const std::string& detector) const {
    const auto it = thresholds.find(detector);
    return it != thresholds.end() ? it->second : default_threshold;
}

EvalTable eval_table(std::span<const PredictionRecord> records, std::vector<std::string> detectors,
                     std::vector<std::string> cohorts, const EvalOptions& options) {
    check_threshold(options.default_threshold);
    for (const auto& [name, t] : options.thresholds) check_threshold(t);

    auto is_shared_real = [&](const PredictionRecord& r) {
        return r.truth == Truth::Real && (r.cohort.empty() || r.cohort == options.shared_real_cohort);
    };

    std::set<std::tuple<std::string, std::string, std::string>> keys;
    std::vector<std::string> seen_detectors;
    std::vector<std::string> seen_cohorts;
    for (const PredictionRecord& r : records) {
        if (!r.score && !r.hard_label) {
            throw ManifestError("record '" + r.image_id + "' has neither a score nor a label", r.line);
        }
        if (!keys.emplace(r.detector, r.cohort, r.image_id).second) {
            throw ManifestError("duplicate record for detector '" + r.detector + "', cohort '" + r.cohort +
                                    "', image '" + r.image_id + "'",
                                r.line);
        }
        if (std::find(seen_detectors.begin(), seen_detectors.end(), r.detector) == seen_detectors.end()) {
            seen_detectors.push_back(r.detector);
        }
        if (!is_shared_real(r) &&
            std::find(seen_cohorts.begin(), seen_cohorts.end(), r.cohort) == seen_cohorts.end()) {
            seen_cohorts.push_back(r.cohort);
        }
    }

    if (detectors.empty()) detectors = seen_detectors;
    if (cohorts.empty()) cohorts = seen_cohorts;
    if (detectors.empty() || cohorts.empty()) throw CoverageError("no detector/cohort cells to evaluate");

    std::vector<std::string> gaps;
    for (const auto& d : detectors) {
        if (std::find(seen_detectors.begin(), seen_detectors.end(), d) == seen_detectors.end()) {
            gaps.push_back("detector '" + d + "' has no records");
        }
    }
    for (const auto& c : cohorts) {
        if (std::find(seen_cohorts.begin(), seen_cohorts.end(), c) == seen_cohorts.end()) {
            gaps.push_back("cohort '" + c + "' has no records");
        }
    }
    if (!gaps.empty()) {
        std::string msg = "coverage gaps:";
        for (const auto& g : gaps) msg += "\n  " + g;
        throw CoverageError(msg);
    }

    EvalTable table;
    table.detectors = detectors;
    table.cohorts = cohorts;
    table.cells.reserve(detectors.size() * cohorts.size());

    for (const auto& d : detectors) {
        const double threshold = options.threshold_for(d);
        for (const auto& c : cohorts) {
            EvalCell cell;
            cell.detector = d;
            cell.cohort = c;
            cell.threshold = threshold;
            std::vector<PredictionRecord> members;
            for (const PredictionRecord& r : records) {
                if (r.detector != d) continue;
                if (r.cohort == c || is_shared_real(r)) {
                    members.push_back(r);
                    (r.truth == Truth::Fake ? cell.n_fake : cell.n_real) += 1;
                }
            }
            if (cell.n_fake == 0) {
                gaps.push_back("detector '" + d + "' x cohort '" + c + "' has no fake records");
                cell.missing = true;
            } else {
                cell.cm = confusion(members, threshold);
            }
            table.cells.push_back(std::move(cell));
        }
    }
    if (!gaps.empty() && !options.allow_gaps) {
        std::string msg = "coverage gaps:";
        for (const auto& g : gaps) msg += "\n  " + g;
        throw CoverageError(msg);
    }
    return table;
}

std::string emit_eval_csv(const EvalTable& table) {
    std::string out = csv::join(kEvalColumns) + "\n";
    for (const EvalCell& cell : table.cells) {
        std::vector<std::string> f = {cell.detector, cell.cohort, csv::format_double(cell.threshold),
                                      std::to_string(cell.n_real), std::to_string(cell.n_fake)};
        if (cell.missing) {
            for (int i = 0; i < 7; ++i) f.emplace_back("missing");
        } else {
            const EvalMetrics m = cell.metrics();
            f.push_back(std::to_string(cell.cm.tp));
            f.push_back(std::to_string(cell.cm.fp));
            f.push_back(std::to_string(cell.cm.tn));
            f.push_back(std::to_string(cell.cm.fn));
            f.push_back(format_percent(m.acc));
            f.push_back(format_percent(m.recall));
            f.push_back(format_percent(m.precision));
        }
        out += csv::join(f) + "\n";
    }
    return out;
}

EvalTable parse_eval_csv(std::string_view text) {
    const auto rows = csv::parse(text);
    if (rows.empty() || rows[0].fields != kEvalColumns) {
        throw ManifestError("eval table header does not match the expected columns", rows.empty() ? 1 : rows[0].line);
    }
    EvalTable table;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& f = rows[r].fields;
        const std::size_t line = rows[r].line;
        if (f.size() != kEvalColumns.size()) throw ManifestError("wrong number of fields", line);
        EvalCell cell;
        cell.detector = f[0];
        cell.cohort = f[1];
        const auto t = parse_number(f[2]);
        if (!t) throw ManifestError("invalid threshold '" + f[2] + "'", line);
        cell.threshold = *t;
        cell.n_real = parse_count(f[3], line);
        cell.n_fake = parse_count(f[4], line);
        if (f[5] == "missing") {
            cell.missing = true;
        } else {
            cell.cm = {parse_count(f[5], line), parse_count(f[6], line), parse_count(f[7], line),
                       parse_count(f[8], line)};
            const EvalMetrics m = cell.metrics();
            if (format_percent(m.acc) != f[9] || format_percent(m.recall) != f[10] ||
                format_percent(m.precision) != f[11]) {
                throw ManifestError("percent columns disagree with the confusion counts", line);
            }
        }
        if (std::find(table.detectors.begin(), table.detectors.end(), cell.detector) == table.detectors.end()) {
            table.detectors.push_back(cell.detector);
        }
        if (std::find(table.cohorts.begin(), table.cohorts.end(), cell.cohort) == table.cohorts.end()) {
            table.cohorts.push_back(cell.cohort);
        }
        table.cells.push_back(std::move(cell));
    }
    if (table.cells.size() != table.detectors.size() * table.cohorts.size()) {
        throw ManifestError("eval table is not a full detector x cohort grid", 0);
    }
    return table;
}

std::string emit_accuracy_heatmap_csv(const EvalTable& table) {
    std::vector<std::string> header = {"detector"};
    header.insert(header.end(), table.cohorts.begin(), table.cohorts.end());
    std::string out = csv::join(header) + "\n";
    for (std::size_t d = 0; d < table.detectors.size(); ++d) {
        std::vector<std::string> row = {table.detectors[d]};
        for (std::size_t c = 0; c < table.cohorts.size(); ++c) {
            const EvalCell& cell = table.cell(d, c);
            row.push_back(cell.missing ? "missing" : format_percent(cell.metrics().acc));
        }
        out += csv::join(row) + "\n";
    }
    return out;
}

}  // namespace vai
