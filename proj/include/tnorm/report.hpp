#pragma once

// Experiment outputs.
//
// trials.csv: semicolon-separated, header row first, columns in this order:
//   shape;model;seed;norm_lower;norm_upper;bound_theorem1;bound_corollary;wall_time_ms
// shape is "n1xn2x...", numbers use the shortest round-trip decimal form,
// absent optional values are empty, and failed trials carry "failed" in
// norm_lower.
//
// summary.json: {"schema_version":1,"failures":N,"shapes":[...],
//                "regression":{...}|null}
//
// scaling.svg: x = sqrt(sum n_k); mean and q95 of norm_lower and the bound.
//
// All three are pure functions of their inputs and byte-stable.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "tnorm/experiment.hpp"

namespace tnorm {

inline constexpr std::string_view kCsvHeader =
    "shape;model;seed;norm_lower;norm_upper;bound_theorem1;bound_corollary;wall_time_ms";

std::string records_to_csv(const std::vector<TrialRecord>& records);
std::vector<TrialRecord> records_from_csv(std::string_view text);

nlohmann::ordered_json summary_to_json(const ScalingSummary& summary);
std::string render_svg(const ScalingSummary& summary);

struct ReportFormats {
  bool csv = true;
  bool json = true;
  bool svg = true;
};

/// Writes the selected files into `dir` (created if missing) and returns
/// their paths. Refuses empty record lists before touching the filesystem.
std::vector<std::filesystem::path> write_report(const std::vector<TrialRecord>& records,
                                                const ScalingSummary& summary,
                                                const std::filesystem::path& dir,
                                                ReportFormats formats = {});

}  // namespace tnorm
