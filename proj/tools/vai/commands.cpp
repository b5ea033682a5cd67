#include "vai/commands.hpp"

#include "vai/csv.hpp"
#include "vai/detector_eval.hpp"
#include "vai/error.hpp"
#include "vai/image_io.hpp"
#include "vai/index.hpp"
#include "vai/parallel.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <map>
#include <ostream>
#include <sstream>

namespace fs = std::filesystem;

namespace vai::cli {

namespace {

void write_text(const fs::path& path, const std::string& text) {
    write_file(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::pair<std::string, std::string> split_assignment(const std::string& text, const char* flag) {
    const auto eq = text.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == text.size()) {
        throw ArgumentError(std::string(flag) + " expects name=value, got '" + text + "'");
    }
    return {text.substr(0, eq), text.substr(eq + 1)};
}

fs::path lbp_output_path(const fs::path& dir, const ManifestRow& row) {
    fs::path rel(row.image_id);
    const bool escapes = rel.is_absolute() || std::any_of(rel.begin(), rel.end(), [](const fs::path& p) {
                             return p == "..";
                         });
    if (escapes) rel = rel.filename();
    rel += ".png";
    return dir / row.cohort / rel;
}

struct Outcome {
    std::optional<MetricVector> metrics;
    std::string error;
};

// Every flag that maps onto a RunConfig field. Unset flags leave the value
// from defaults or the config file in place.
struct ConfigFlags {
    std::optional<std::string> config;
    std::optional<std::string> out;
    std::optional<unsigned> workers;
    std::optional<int> resize;
    std::optional<int> hsv_bins;
    std::optional<int> lbp_bins;
    std::optional<double> canny_sigma;
    std::optional<double> canny_low;
    std::optional<double> canny_high;
    std::optional<double> blur_sigma;
    std::optional<std::string> weights;
    std::optional<double> threshold;
};

void add_config_flags(CLI::App* sub, ConfigFlags& f, const RunConfig& d) {
    auto dflt = [](const auto& v) {
        std::ostringstream s;
        s << " [default: " << v << "]";
        return s.str();
    };
    std::string weights;
    for (int i = 0; i < kMetricCount; ++i) weights += (i ? "," : "") + csv::format_double(d.weights[i]);

    sub->add_option("--config", f.config, "JSON config file; flags override its values [default: none]");
    sub->add_option("--out", f.out, "Output directory" + dflt(d.out_dir.string()));
    sub->add_option("--workers", f.workers,
                    "Worker threads; results do not depend on it [default: $VAI_WORKERS or core count, now " +
                        std::to_string(d.workers) + "]");
    sub->add_option("--resize", f.resize,
                    "Longest side of the analysis raster; 0 keeps native size" + dflt(d.metrics.resize_longest));
    sub->add_option("--hsv-bins", f.hsv_bins, "HSV histogram bins per axis (n^3 cells)" + dflt(d.metrics.hsv_bins));
    sub->add_option("--lbp-bins", f.lbp_bins, "LBP histogram bins; only 256 is valid" + dflt(d.metrics.lbp_bins));
    sub->add_option("--canny-sigma", f.canny_sigma, "Canny pre-smoothing sigma" + dflt(d.metrics.canny_sigma));
    sub->add_option("--canny-low", f.canny_low,
                    "Canny low threshold, fraction of max gradient" + dflt(d.metrics.canny_low));
    sub->add_option("--canny-high", f.canny_high,
                    "Canny high threshold, fraction of max gradient" + dflt(d.metrics.canny_high));
    sub->add_option("--blur-sigma", f.blur_sigma, "Gaussian sigma for sharpness" + dflt(d.metrics.blur_sigma));
    sub->add_option("--weights", f.weights, "Index weights TC,CDC,OC,CR,IS,ISH,IC" + dflt(weights));
    sub->add_option("--threshold", f.threshold, "Detector score threshold, fake iff score >= t" + dflt(d.threshold));
}

RunConfig resolve_config(RunConfig cfg, const ConfigFlags& f) {
    if (f.config) apply_config_file(cfg, *f.config);
    if (f.out) cfg.out_dir = *f.out;
    if (f.workers) cfg.workers = *f.workers;
    if (f.resize) cfg.metrics.resize_longest = *f.resize;
    if (f.hsv_bins) cfg.metrics.hsv_bins = *f.hsv_bins;
    if (f.lbp_bins) cfg.metrics.lbp_bins = *f.lbp_bins;
    if (f.canny_sigma) cfg.metrics.canny_sigma = *f.canny_sigma;
    if (f.canny_low) cfg.metrics.canny_low = *f.canny_low;
    if (f.canny_high) cfg.metrics.canny_high = *f.canny_high;
    if (f.blur_sigma) cfg.metrics.blur_sigma = *f.blur_sigma;
    if (f.weights) cfg.weights = parse_weights(*f.weights);
    if (f.threshold) cfg.threshold = *f.threshold;
    cfg.validate();
    return cfg;
}

struct ScoreFlags {
    std::optional<std::string> manifest;
    std::vector<std::string> cohorts;
    std::optional<std::string> real;
    bool emit_lbp = false;
};

int cmd_score(const RunConfig& cfg, const ScoreFlags& f, bool print_table, std::ostream& out, std::ostream& err) {
    const bool dirs = !f.cohorts.empty() || f.real.has_value();
    if (f.manifest.has_value() == dirs) throw ArgumentError("give either --manifest or --cohort/--real directories");

    Manifest manifest;
    std::vector<fs::path> inputs;
    if (f.manifest) {
        manifest = load_manifest(*f.manifest);
        inputs.emplace_back(*f.manifest);
    } else {
        std::vector<std::pair<std::string, fs::path>> sources;
        for (const std::string& c : f.cohorts) {
            auto [name, dir] = split_assignment(c, "--cohort");
            sources.emplace_back(name, dir);
        }
        std::optional<fs::path> real;
        if (f.real) real = *f.real;
        manifest = scan_directories(sources, real);
    }
    for (const ManifestRow& r : manifest.rows) inputs.push_back(r.path);

    std::optional<fs::path> lbp_dir;
    if (f.emit_lbp) lbp_dir = cfg.out_dir / "lbp";

    ScoreReport report = score_manifest(manifest, cfg, err, lbp_dir);
    report.timestamp = report_timestamp(inputs);

    const ScatterMatrixSpec spec = [&] {
        ScatterMatrixSpec s;
        for (const ImageRow& r : report.images) s.points.push_back(r.metrics.as_array());
        return s;
    }();
    write_text(cfg.out_dir / "scores.json", emit_json(report));
    write_text(cfg.out_dir / "scores.csv", emit_csv(report));
    write_text(cfg.out_dir / "metrics.csv", emit_metrics_csv(report));
    write_text(cfg.out_dir / "scatter.svg", scatter_matrix_svg(spec));

    for (const std::string& w : report.warnings) err << "vai: warning: " << w << "\n";
    err << "vai: scored " << report.images.size() << " image(s) in " << report.cohorts.size() << " cohort(s), "
        << report.skipped.size() << " skipped; reports in " << cfg.out_dir.string() << "\n";
    if (print_table) out << emit_csv(report);
    return report.skipped.empty() ? kExitOk : kExitPartial;
}

struct EvalFlags {
    std::string predictions;
    std::vector<std::string> detector_thresholds;
    std::string detectors;
    std::string cohorts;
    std::string real_cohort = "real";
    bool allow_gaps = false;
};

int cmd_eval(const RunConfig& cfg, const EvalFlags& f, std::ostream& out, std::ostream& err) {
    const auto bytes = read_file(f.predictions);
    const auto records = parse_predictions(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));

    EvalOptions opt;
    opt.default_threshold = cfg.threshold;
    opt.shared_real_cohort = f.real_cohort;
    opt.allow_gaps = f.allow_gaps;
    for (const std::string& t : f.detector_thresholds) {
        auto [name, value] = split_assignment(t, "--detector-threshold");
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
        if (ec != std::errc{} || ptr != value.data() + value.size() || !(v >= 0.0 && v <= 1.0)) {
            throw ArgumentError("--detector-threshold: '" + value + "' is not a number in [0,1]");
        }
        opt.thresholds[name] = v;
    }

    const EvalTable table = eval_table(records, split_list(f.detectors), split_list(f.cohorts), opt);
    const std::string csv_text = emit_eval_csv(table);
    write_text(cfg.out_dir / "eval.csv", csv_text);
    write_text(cfg.out_dir / "accuracy_heatmap.csv", emit_accuracy_heatmap_csv(table));

    const auto missing = std::count_if(table.cells.begin(), table.cells.end(), [](const EvalCell& c) { return c.missing; });
    err << "vai: evaluated " << table.detectors.size() << " detector(s) x " << table.cohorts.size()
        << " cohort(s) from " << records.size() << " record(s)";
    if (missing > 0) err << ", " << missing << " missing cell(s)";
    err << "; tables in " << cfg.out_dir.string() << "\n";
    out << csv_text;
    return missing > 0 ? kExitPartial : kExitOk;
}

int cmd_lbp(const RunConfig& cfg, const std::string& input, const std::optional<std::string>& output,
            std::ostream& err) {
    const PixelBuffer img = resize_longest_side(load_image(input), cfg.metrics.resize_longest);
    const PixelBuffer vis = lbp_visualization(to_grayscale(img));
    const fs::path dest = output ? fs::path(*output) : cfg.out_dir / "lbp" / (fs::path(input).stem().string() + ".png");
    write_file(dest, encode_png(vis));
    err << "vai: wrote " << vis.width() << "x" << vis.height() << " LBP image to " << dest.string() << "\n";
    return kExitOk;
}

}  // namespace

std::string report_timestamp(const std::vector<fs::path>& inputs) {
    std::int64_t secs = 0;
    if (const char* env = std::getenv("SOURCE_DATE_EPOCH"); env != nullptr && *env != '\0') {
        const char* end = env + std::char_traits<char>::length(env);
        const auto [ptr, ec] = std::from_chars(env, end, secs);
        if (ec != std::errc{} || ptr != end || secs < 0) {
            throw ArgumentError(std::string("SOURCE_DATE_EPOCH must be a non-negative integer, got '") + env + "'");
        }
    } else {
        for (const fs::path& p : inputs) {
            std::error_code ec;
            const auto t = fs::last_write_time(p, ec);
            if (ec) continue;
            const auto sys = std::chrono::file_clock::to_sys(t);
            secs = std::max<std::int64_t>(secs, std::chrono::floor<std::chrono::seconds>(sys).time_since_epoch().count());
        }
    }
    const auto tt = static_cast<std::time_t>(secs);
    std::tm tm{};
    gmtime_r(&tt, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

ScoreReport score_manifest(const Manifest& manifest, const RunConfig& cfg, std::ostream& log,
                           const std::optional<fs::path>& lbp_dir) {
    cfg.validate();
    const auto& rows = manifest.rows;
    const auto results = parallel_map<Outcome>(rows.size(), cfg.workers, [&](std::size_t i) {
        Outcome o;
        try {
            const PixelBuffer img = resize_longest_side(load_image(rows[i].path), cfg.metrics.resize_longest);
            const GrayBuffer gray = to_grayscale(img);
            o.metrics = compute_all(gray, to_hsv(img), cfg.metrics);
            if (lbp_dir) write_file(lbp_output_path(*lbp_dir, rows[i]), encode_png(lbp_visualization(gray)));
        } catch (const std::exception& e) {
            o.error = e.what();
        }
        return o;
    });

    ScoreReport report;
    report.config = cfg.report_config();
    report.skipped = manifest.skipped;

    std::vector<Cohort> cohorts;
    std::map<std::string, std::size_t> cohort_index;
    std::vector<std::pair<std::size_t, std::size_t>> where;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (!results[i].metrics) {
            report.skipped.push_back({rows[i].path.generic_string(), rows[i].cohort, results[i].error});
            continue;
        }
        const auto [it, added] = cohort_index.emplace(rows[i].cohort, cohorts.size());
        if (added) cohorts.push_back({rows[i].cohort, {}});
        cohorts[it->second].members.push_back({rows[i].image_id, *results[i].metrics});
        where.emplace_back(it->second, cohorts[it->second].members.size() - 1);
        report.images.push_back({rows[i].image_id, rows[i].cohort, rows[i].label, *results[i].metrics, 0.0});
    }
    for (const SkippedRow& s : report.skipped) log << "vai: skipped " << s.path << ": " << s.reason << "\n";
    if (report.images.empty()) throw EmptyInputError("no image could be scored");

    const NormalizedPool pool = pool_normalize(cohorts, cfg.metrics.lbp_bins);
    report.pool = pool.stats;
    for (std::size_t i = 0; i < report.images.size(); ++i) {
        const auto [c, m] = where[i];
        report.images[i].vai_raw = vai_raw(pool.cohorts[c].members[m].metrics, pool.stats, cfg.weights);
    }

    std::map<std::string, double> raws;
    for (const Cohort& c : pool.cohorts) raws[c.name] = cohort_raw(c, pool.stats, cfg.weights);

    std::vector<VaiScore> scores;
    bool scaled = true;
    try {
        scores = scale_scores(raws);
    } catch (const DegenerateScalingError& e) {
        scaled = false;
        scores = rank_unscaled(raws);
        report.warnings.push_back(std::string(e.what()) + "; raw scores reported unscaled");
    }

    std::map<int, std::vector<std::string>> ties;
    for (const VaiScore& s : scores) {
        CohortRow row;
        row.cohort = s.cohort;
        row.images = cohorts[cohort_index.at(s.cohort)].members.size();
        row.raw = s.raw;
        if (scaled) row.scaled = s.scaled;
        row.rank = s.rank;
        row.tied = s.tied;
        if (s.tied) ties[s.rank].push_back(s.cohort);
        report.cohorts.push_back(std::move(row));
    }
    for (const auto& [rank, names] : ties) {
        std::string list;
        for (const std::string& n : names) list += (list.empty() ? "" : ", ") + n;
        report.warnings.push_back("cohorts tied at rank " + std::to_string(rank) + ": " + list);
    }
    return report;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    RunConfig defaults;
    try {
        defaults = default_run_config();
    } catch (const std::exception& e) {
        err << "vai: error: " << e.what() << "\n";
        return kExitFatal;
    }
    RunConfig lbp_defaults = defaults;
    lbp_defaults.metrics.resize_longest = 0;

    CLI::App app{"Visual AI Index: score image cohorts, rank generators, evaluate detectors", "vai"};
    app.set_version_flag("--version", std::string(tool_version()));
    app.require_subcommand(1);

    ConfigFlags cfg_flags;
    ScoreFlags score_flags;
    EvalFlags eval_flags;
    std::string lbp_input;
    std::optional<std::string> lbp_output;

    auto add_inputs = [&](CLI::App* sub) {
        sub->add_option("--manifest", score_flags.manifest, "CSV with columns path,cohort[,label]");
        sub->add_option("--cohort", score_flags.cohorts, "Cohort directory as name=dir (repeatable), labelled fake");
        sub->add_option("--real", score_flags.real, "Directory of real images, scored as cohort 'real'");
        sub->add_flag("--emit-lbp", score_flags.emit_lbp, "Also write lbp/<cohort>/<image>.png");
    };

    CLI::App* score = app.add_subcommand("score", "Compute metrics and index scores; write reports");
    add_inputs(score);
    add_config_flags(score, cfg_flags, defaults);

    CLI::App* rank = app.add_subcommand("rank", "As score, and print the ranked cohort table");
    add_inputs(rank);
    add_config_flags(rank, cfg_flags, defaults);

    CLI::App* eval = app.add_subcommand("eval", "Accuracy, recall and precision per detector and cohort");
    eval->add_option("--predictions", eval_flags.predictions, "CSV with image_id,truth,score,detector,cohort")
        ->required();
    eval->add_option("--detector-threshold", eval_flags.detector_thresholds,
                     "Per-detector threshold as name=t (repeatable)");
    eval->add_option("--detectors", eval_flags.detectors, "Comma-separated detector order [default: as in file]");
    eval->add_option("--cohorts", eval_flags.cohorts, "Comma-separated cohort order [default: as in file]");
    eval->add_option("--real-cohort", eval_flags.real_cohort,
                     "Cohort name of real images shared by every cell [default: real]");
    eval->add_flag("--allow-gaps", eval_flags.allow_gaps, "Mark cells without fake records as missing");
    add_config_flags(eval, cfg_flags, defaults);

    CLI::App* lbp = app.add_subcommand("lbp", "Render an image's LBP code map as a grayscale PNG");
    lbp->add_option("image", lbp_input, "Input PNG or JPEG")->required();
    lbp->add_option("output", lbp_output, "Output PNG [default: <out>/lbp/<stem>.png]");
    add_config_flags(lbp, cfg_flags, lbp_defaults);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitFatal;
    }

    try {
        if (lbp->parsed()) return cmd_lbp(resolve_config(lbp_defaults, cfg_flags), lbp_input, lbp_output, err);
        const RunConfig cfg = resolve_config(defaults, cfg_flags);
        if (score->parsed()) return cmd_score(cfg, score_flags, false, out, err);
        if (rank->parsed()) return cmd_score(cfg, score_flags, true, out, err);
        if (eval->parsed()) return cmd_eval(cfg, eval_flags, out, err);
    } catch (const std::exception& e) {
        err << "vai: error: " << e.what() << "\n";
        return kExitFatal;
    }
    return kExitFatal;
}

}  // namespace vai::cli
