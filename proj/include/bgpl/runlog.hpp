#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "bgpl/config.hpp"
#include "bgpl/evolution.hpp"

namespace bgpl {

using nlohmann::json;

json to_json(const FitnessTuple& f);
FitnessTuple fitness_from_json(const json& j);

json to_json(const PatternEvaluation& e);
PatternEvaluation evaluation_from_json(const json& j);

/// Pattern text (re-parseable), SPARQL SELECT, canonical key, fitness and evaluation.
json to_json(const AcceptedPattern& a);
AcceptedPattern accepted_from_json(const json& j);

json to_json(const CoverageLedger& l);
CoverageLedger ledger_from_json(const json& j);

/// [[source IRI, target IRI], ...]
json to_json(const GroundTruth& gt);
GroundTruth ground_truth_from_json(const json& j);

json to_json(const GenerationRecord& g);

/// Everything one run produced, with the settings it ran under.
json run_log(const RunRecord& run, const Settings& settings, const CoverageLedger& ledger_after);
CoverageLedger ledger_from_run_log(const json& log);

/// The state a learn directory carries between invocations and into predict/evaluate.
struct PatternSet {
    GroundTruth gt;  // the pairs the precision vectors refer to (the training part)
    std::size_t gt_total = 0;  // pairs in the ground-truth file before the split
    double test_ratio = 0.0;
    std::uint64_t split_seed = 1;
    json config = json::object();
    std::vector<AcceptedPattern> patterns;
    CoverageLedger ledger;
    std::size_t next_run = 1;
    bool aborted = false;
    std::string error;
};

json to_json(const PatternSet& s);
PatternSet pattern_set_from_json(const json& j);

/// Removes every member whose name ends in "wall_s": these carry wall-clock
/// timings, the only part of the outputs that differs between identical runs.
void strip_timings(json& j);

/// Two-space indented text with a trailing newline.
std::string dump(const json& j);
json read_json(const std::filesystem::path& path);
/// Writes through a temporary file and a rename.
void write_json(const std::filesystem::path& path, const json& j);

/// Run log file name inside a learn directory: runs/run-007.json.
std::filesystem::path run_log_path(const std::filesystem::path& dir, std::size_t run);
/// All run logs of a learn directory, ordered by run.
std::vector<json> read_run_logs(const std::filesystem::path& dir);

}  // namespace bgpl
