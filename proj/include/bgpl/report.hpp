#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "bgpl/runlog.hpp"

namespace bgpl {

/// Machine-readable report: ground truth, accepted patterns with SPARQL and
/// fitness, the per-pattern precision grid (`pv`), the accumulated grid (row i
/// is the elementwise max of patterns 0..i) and per-run generation tables.
json report_json(const PatternSet& set, const std::vector<json>& run_logs);

/// Self-contained HTML page for a report_json document. Grid cells carry
/// `data-precision` attributes with the exact JSON number text.
std::string report_html(const json& report);

/// Reads patterns.json and runs/*.json from a learn directory and writes
/// report.json and report.html into `out_dir`.
void write_report(const std::filesystem::path& learn_dir, const std::filesystem::path& out_dir);

}  // namespace bgpl
