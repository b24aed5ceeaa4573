#pragma once

#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <vector>

#include "bgpl/config.hpp"
#include "bgpl/evalharness.hpp"
#include "bgpl/runlog.hpp"

namespace bgpl {

enum ExitCode : int {
    kExitOk = 0,
    kExitError = 1,           // bad arguments, config or files
    kExitBadGroundTruth = 2,  // unparseable ground truth rows
    kExitUnreachable = 3,     // the remote endpoint could not be reached
};

/// An endpoint plus the store behind it when the backend is local.
struct OpenedEndpoint {
    std::shared_ptr<Endpoint> endpoint;
    std::shared_ptr<const TripleStore> store;
};

/// Applies the environment override, then loads the store or connects.
/// Throws std::invalid_argument when neither a store nor a URL is configured.
OpenedEndpoint open_endpoint(EndpointConfig cfg);

struct LearnArgs {
    Settings settings;
    std::filesystem::path ground_truth;
    std::filesystem::path out_dir;
    bool resume = false;  // continue from out_dir/patterns.json at its next run
};

/// Writes out_dir/runs/run-NNN.json after every run, plus patterns.json,
/// ledger.json, report.json and report.html.
int cmd_learn(const LearnArgs& args, std::ostream& out, std::ostream& err);

struct PredictArgs {
    Settings settings;
    std::filesystem::path patterns;  // patterns.json or a learn directory
    std::filesystem::path sources;
    std::optional<std::size_t> k;    // overrides settings.harness.predict_k
    std::vector<FusionStrategy> strategies;  // empty: all
    std::optional<std::size_t> top;  // truncate each ranked list
    std::filesystem::path output;    // empty: stdout
    /// Use the endpoint settings stored with the patterns when none are configured.
    bool endpoint_from_patterns = true;
};

int cmd_predict(const PredictArgs& args, std::ostream& out, std::ostream& err);

struct EvaluateArgs {
    Settings settings;
    std::filesystem::path patterns;
    std::filesystem::path ground_truth;  // the full file the patterns' split came from
    std::optional<double> test_ratio;    // default: the ratio stored with the patterns
    std::optional<std::uint64_t> split_seed;
    std::optional<std::size_t> k;
    bool baselines = true;
    /// Store for the graph baselines when the endpoint is remote; a local
    /// backend uses its own store.
    std::filesystem::path baseline_store;
    std::filesystem::path output;        // evaluation JSON; the table always goes to `out`
    bool endpoint_from_patterns = true;
};

int cmd_evaluate(const EvaluateArgs& args, std::ostream& out, std::ostream& err);

struct ReportArgs {
    std::filesystem::path learn_dir;
    std::filesystem::path out_dir;  // empty: learn_dir
};

int cmd_report(const ReportArgs& args, std::ostream& out, std::ostream& err);

/// JSON of a metric row: name, kind, recall_at[10], map, ndcg, pairs.
json to_json(const MetricReport& m, const std::string& kind);

}  // namespace bgpl
