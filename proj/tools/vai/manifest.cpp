#include "vai/manifest.hpp"

#include "vai/csv.hpp"
#include "vai/error.hpp"
#include "vai/image_io.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <tuple>

namespace fs = std::filesystem;

namespace vai::cli {

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

bool is_image_file(const fs::path& p) {
    const std::string ext = lower(p.extension().string());
    return ext == ".png" || ext == ".jpg" || ext == ".jpeg";
}

}  // namespace

Manifest load_manifest(const fs::path& csv_path) {
    const auto bytes = read_file(csv_path);
    const auto rows = csv::parse(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
    if (rows.empty()) throw ManifestError("manifest is empty", 0);

    int col_path = -1;
    int col_cohort = -1;
    int col_label = -1;
    const auto& header = rows.front().fields;
    for (std::size_t i = 0; i < header.size(); ++i) {
        const std::string h = lower(header[i]);
        if (h == "path") col_path = static_cast<int>(i);
        if (h == "cohort") col_cohort = static_cast<int>(i);
        if (h == "label") col_label = static_cast<int>(i);
    }
    std::string missing;
    if (col_path < 0) missing += "path";
    if (col_cohort < 0) missing += missing.empty() ? "cohort" : ", cohort";
    if (!missing.empty()) throw ManifestError("manifest header lacks column(s): " + missing, rows.front().line);

    const fs::path base = csv_path.parent_path();
    Manifest out;
    std::set<std::pair<std::string, std::string>> seen;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const csv::Row& row = rows[r];
        auto field = [&](int col) -> std::string {
            return col >= 0 && static_cast<std::size_t>(col) < row.fields.size() ? row.fields[col] : std::string();
        };
        ManifestRow m;
        m.line = row.line;
        m.image_id = field(col_path);
        m.cohort = field(col_cohort);
        m.label = lower(field(col_label));
        if (m.image_id.empty()) throw ManifestError("empty path", row.line);
        if (m.cohort.empty()) throw ManifestError("empty cohort", row.line);
        if (!m.label.empty() && m.label != "real" && m.label != "fake") {
            throw ManifestError("label must be real, fake or empty, got '" + m.label + "'", row.line);
        }
        if (!seen.insert({m.cohort, m.image_id}).second) {
            throw ManifestError("duplicate path '" + m.image_id + "' in cohort '" + m.cohort + "'", row.line);
        }
        const fs::path p(m.image_id);
        m.path = p.is_absolute() ? p : base / p;
        std::error_code ec;
        if (!fs::is_regular_file(m.path, ec)) {
            out.skipped.push_back({m.path.generic_string(), m.cohort, "file not found"});
            continue;
        }
        out.rows.push_back(std::move(m));
    }
    return out;
}

Manifest scan_directories(const std::vector<std::pair<std::string, fs::path>>& cohorts,
                          const std::optional<fs::path>& real_dir) {
    std::vector<std::tuple<std::string, fs::path, std::string>> sources;
    std::set<std::string> names;
    for (const auto& [name, dir] : cohorts) {
        if (name.empty()) throw ArgumentError("--cohort needs a non-empty name");
        if (!names.insert(name).second) throw ArgumentError("cohort '" + name + "' given twice");
        sources.emplace_back(name, dir, "fake");
    }
    if (real_dir) {
        if (!names.insert("real").second) throw ArgumentError("cohort name 'real' is reserved for --real");
        sources.emplace_back("real", *real_dir, "real");
    }

    Manifest out;
    for (const auto& [name, dir, label] : sources) {
        std::error_code ec;
        if (!fs::is_directory(dir, ec)) throw ArgumentError("not a directory: " + dir.string());
        std::vector<fs::path> files;
        for (const auto& entry : fs::recursive_directory_iterator(dir)) {
            if (entry.is_regular_file() && is_image_file(entry.path())) files.push_back(entry.path());
        }
        std::vector<ManifestRow> rows;
        for (const fs::path& f : files) {
            rows.push_back({f, f.lexically_relative(dir).generic_string(), name, label, 0});
        }
        std::sort(rows.begin(), rows.end(),
                  [](const ManifestRow& a, const ManifestRow& b) { return a.image_id < b.image_id; });
        if (rows.empty()) out.skipped.push_back({dir.generic_string(), name, "directory has no PNG/JPEG files"});
        for (auto& r : rows) out.rows.push_back(std::move(r));
    }
    return out;
}

}  // namespace vai::cli
