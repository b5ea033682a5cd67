#pragma once

#include "vai/report.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace vai::cli {

struct ManifestRow {
    std::filesystem::path path;
    std::string image_id;  ///< path relative to the manifest or cohort directory
    std::string cohort;
    std::string label;     ///< "real", "fake" or empty
    std::size_t line = 0;  ///< 0 for directory scans
};

struct Manifest {
    std::vector<ManifestRow> rows;     ///< readable rows, manifest order
    std::vector<SkippedRow> skipped;  ///< rows whose file is missing
};

/// CSV with header path,cohort[,label]. Relative paths resolve against the
/// manifest's directory. Missing files become skipped rows; empty cohorts,
/// bad labels and duplicate (cohort, path) pairs raise ManifestError.
Manifest load_manifest(const std::filesystem::path& csv_path);

/// Every .png/.jpg/.jpeg below each directory, sorted by relative path.
/// `--cohort name=dir` rows are labelled fake; the `--real` directory becomes
/// cohort "real" with label real.
Manifest scan_directories(const std::vector<std::pair<std::string, std::filesystem::path>>& cohorts,
                          const std::optional<std::filesystem::path>& real_dir);

}  // namespace vai::cli
