#include "bgpl/runlog.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "bgpl/canon.hpp"
#include "bgpl/sparql.hpp"

namespace bgpl {

namespace {

EvalStatus status_from_string(const std::string& s) {
    if (s == "complete") return EvalStatus::Complete;
    if (s == "soft_timeout") return EvalStatus::SoftTimeout;
    if (s == "hard_timeout") return EvalStatus::HardTimeout;
    throw std::runtime_error("unknown evaluation status '" + s + "'");
}

}  // namespace

json to_json(const FitnessTuple& f) {
    return {{"remains", f.remains},
            {"score", f.score},
            {"gain", f.gain},
            {"f1", f.f1},
            {"avg_result_len", f.avg_result_len},
            {"gt_matches", f.gt_matches},
            {"pattern_length", f.pattern_length},
            {"pattern_vars", f.pattern_vars},
            {"timeout_penalty", f.timeout_penalty},
            {"query_time_s", f.query_time_s}};
}

FitnessTuple fitness_from_json(const json& j) {
    FitnessTuple f;
    f.remains = j.at("remains").get<double>();
    f.score = j.at("score").get<double>();
    f.gain = j.at("gain").get<double>();
    f.f1 = j.at("f1").get<double>();
    f.avg_result_len = j.at("avg_result_len").get<double>();
    f.gt_matches = j.at("gt_matches").get<std::size_t>();
    f.pattern_length = j.at("pattern_length").get<std::size_t>();
    f.pattern_vars = j.at("pattern_vars").get<std::size_t>();
    f.timeout_penalty = j.at("timeout_penalty").get<double>();
    f.query_time_s = j.at("query_time_s").get<double>();
    return f;
}

json to_json(const PatternEvaluation& e) {
    return {{"pv", e.pv},
            {"covered", e.covered},
            {"result_len", e.result_len},
            {"gt_matches", e.gt_matches},
            {"recall", e.recall},
            {"avg_result_len", e.avg_result_len},
            {"precision", e.precision},
            {"f1", e.f1},
            {"matched_sources", e.matched_sources},
            {"matched_targets", e.matched_targets},
            {"status", to_string(e.status)},
            {"query_time_s", e.query_time_s},
            {"complete", e.complete}};
}

PatternEvaluation evaluation_from_json(const json& j) {
    PatternEvaluation e;
    e.pv = j.at("pv").get<std::vector<double>>();
    e.covered = j.at("covered").get<std::vector<bool>>();
    e.result_len = j.at("result_len").get<std::vector<std::size_t>>();
    e.gt_matches = j.at("gt_matches").get<std::size_t>();
    e.recall = j.at("recall").get<double>();
    e.avg_result_len = j.at("avg_result_len").get<double>();
    e.precision = j.at("precision").get<double>();
    e.f1 = j.at("f1").get<double>();
    e.matched_sources = j.at("matched_sources").get<std::size_t>();
    e.matched_targets = j.at("matched_targets").get<std::size_t>();
    e.status = status_from_string(j.at("status").get<std::string>());
    e.query_time_s = j.at("query_time_s").get<double>();
    e.complete = j.at("complete").get<bool>();
    return e;
}

json to_json(const AcceptedPattern& a) {
    return {{"run", a.run},
            {"pattern", a.pattern.to_string()},
            {"sparql", to_sparql_select(a.pattern)},
            {"key", a.key},
            {"fitness", to_json(a.fitness)},
            {"evaluation", to_json(a.evaluation)}};
}

AcceptedPattern accepted_from_json(const json& j) {
    AcceptedPattern a;
    a.run = j.at("run").get<std::size_t>();
    a.pattern = parse_pattern(j.at("pattern").get<std::string>());
    a.key = j.at("key").get<std::string>();
    if (a.key != canonical_key(a.pattern)) throw std::runtime_error("pattern key mismatch for " + a.key);
    a.fitness = fitness_from_json(j.at("fitness"));
    a.evaluation = evaluation_from_json(j.at("evaluation"));
    return a;
}

json to_json(const CoverageLedger& l) { return {{"best", l.values()}, {"remains", l.remains()}}; }

CoverageLedger ledger_from_json(const json& j) { return CoverageLedger(j.at("best").get<std::vector<double>>()); }

json to_json(const GroundTruth& gt) {
    json out = json::array();
    for (const auto& p : gt) out.push_back({p.source.value, p.target.value});
    return out;
}

GroundTruth ground_truth_from_json(const json& j) {
    GroundTruth gt;
    for (const auto& row : j) gt.push_back({Term::iri(row.at(0).get<std::string>()), Term::iri(row.at(1).get<std::string>())});
    return gt;
}

json to_json(const GenerationRecord& g) {
    json best = json::array();
    for (const auto& s : g.best) {
        best.push_back({{"pattern", s.pattern}, {"key", s.key}, {"fitness", to_json(s.fitness)}, {"pv", s.pv}});
    }
    return {{"generation", g.generation},
            {"population", g.population},
            {"distinct", g.distinct},
            {"unfit", g.unfit},
            {"hof_best", g.hof_best ? to_json(*g.hof_best) : json(nullptr)},
            {"best", best},
            {"wall_s", g.wall_s}};
}

json run_log(const RunRecord& run, const Settings& settings, const CoverageLedger& ledger_after) {
    json accepted = json::array();
    for (const auto& a : run.accepted) accepted.push_back(to_json(a));
    json generations = json::array();
    for (const auto& g : run.generations) generations.push_back(to_json(g));
    return {{"format", "bgpl-run-log/1"},
            {"run", run.run},
            {"config", config_json(settings)},
            {"remains_before", run.remains_before},
            {"remains_after", run.remains_after},
            {"ledger", to_json(ledger_after)},
            {"accepted", accepted},
            {"generations", generations},
            {"wall_s", run.wall_s}};
}

CoverageLedger ledger_from_run_log(const json& log) { return ledger_from_json(log.at("ledger")); }

json to_json(const PatternSet& s) {
    json patterns = json::array();
    for (const auto& a : s.patterns) patterns.push_back(to_json(a));
    return {{"format", "bgpl-patterns/1"},
            {"ground_truth", to_json(s.gt)},
            {"split", {{"test_ratio", s.test_ratio}, {"seed", s.split_seed}, {"total", s.gt_total}}},
            {"config", s.config},
            {"patterns", patterns},
            {"ledger", to_json(s.ledger)},
            {"next_run", s.next_run},
            {"aborted", s.aborted},
            {"error", s.error}};
}

PatternSet pattern_set_from_json(const json& j) {
    if (j.value("format", "") != "bgpl-patterns/1") throw std::runtime_error("not a pattern set document");
    PatternSet s;
    s.gt = ground_truth_from_json(j.at("ground_truth"));
    const json& split = j.at("split");
    s.test_ratio = split.at("test_ratio").get<double>();
    s.split_seed = split.at("seed").get<std::uint64_t>();
    s.gt_total = split.at("total").get<std::size_t>();
    s.config = j.at("config");
    for (const auto& p : j.at("patterns")) {
        s.patterns.push_back(accepted_from_json(p));
        if (s.patterns.back().evaluation.pv.size() != s.gt.size()) {
            throw std::runtime_error("precision vector size differs from ground truth size");
        }
    }
    s.ledger = ledger_from_json(j.at("ledger"));
    if (s.ledger.size() != s.gt.size()) throw std::runtime_error("ledger size differs from ground truth size");
    s.next_run = j.at("next_run").get<std::size_t>();
    s.aborted = j.at("aborted").get<bool>();
    s.error = j.at("error").get<std::string>();
    return s;
}

void strip_timings(json& j) {
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end();) {
            const std::string& k = it.key();
            if (k.size() >= 6 && k.compare(k.size() - 6, 6, "wall_s") == 0) {
                it = j.erase(it);
            } else {
                strip_timings(*it);
                ++it;
            }
        }
    } else if (j.is_array()) {
        for (auto& v : j) strip_timings(v);
    }
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json read_json(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw std::runtime_error(path.string() + ": " + e.what());
    }
}

void write_json(const std::filesystem::path& path, const json& j) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << dump(j);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

std::filesystem::path run_log_path(const std::filesystem::path& dir, std::size_t run) {
    char name[32];
    std::snprintf(name, sizeof name, "run-%03zu.json", run);
    return dir / "runs" / name;
}

std::vector<json> read_run_logs(const std::filesystem::path& dir) {
    std::vector<json> logs;
    auto runs = dir / "runs";
    if (!std::filesystem::is_directory(runs)) return logs;
    for (const auto& e : std::filesystem::directory_iterator(runs)) {
        const auto& p = e.path();
        if (p.extension() == ".json" && p.filename().string().rfind("run-", 0) == 0) logs.push_back(read_json(p));
    }
    std::sort(logs.begin(), logs.end(),
              [](const json& a, const json& b) { return a.at("run").get<std::size_t>() < b.at("run").get<std::size_t>(); });
    return logs;
}

}  // namespace bgpl
