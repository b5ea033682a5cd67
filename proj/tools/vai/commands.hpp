#pragma once

#include "vai/manifest.hpp"
#include "vai/report.hpp"
#include "vai/run_config.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>

namespace vai::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitPartial = 1;
inline constexpr int kExitFatal = 2;

/// Metrics, pool statistics and ranked cohorts for every readable manifest
/// row. Rows that fail to decode are moved to `skipped`. Throws
/// EmptyInputError when no row could be scored. When `lbp_dir` is set, each
/// image's LBP rendering is written below it.
ScoreReport score_manifest(const Manifest& manifest, const RunConfig& cfg, std::ostream& log,
                           const std::optional<std::filesystem::path>& lbp_dir = std::nullopt);

/// ISO-8601 UTC. SOURCE_DATE_EPOCH when set, otherwise the newest
/// modification time among `inputs`, so reruns on unchanged inputs match.
std::string report_timestamp(const std::vector<std::filesystem::path>& inputs);

/// Full command line: `vai <score|rank|eval|lbp> [options]`. Tables go to
/// `out`, logs and errors to `err`. Returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace vai::cli
