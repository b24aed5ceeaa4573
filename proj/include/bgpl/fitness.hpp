#pragma once

#include <compare>
#include <string>
#include <vector>

#include "bgpl/endpoint.hpp"

namespace bgpl {

struct GroundTruthPair {
    Term source;
    Term target;

    auto operator<=>(const GroundTruthPair&) const = default;
    bool operator==(const GroundTruthPair&) const = default;
};

using GroundTruth = std::vector<GroundTruthPair>;

/// Pattern fitness. Compared lexicographically in declaration order; fields
/// marked (min) compare inverted, so "greater" always means "fitter".
struct FitnessTuple {
    double remains = 0.0;            // (max) remaining precision sum of the run
    double score = 0.0;              // (max) gain after over-fitting punishment
    double gain = 0.0;               // (max)
    double f1 = 0.0;                 // (max)
    double avg_result_len = 0.0;     // (min)
    std::size_t gt_matches = 0;      // (max)
    std::size_t pattern_length = 0;  // (min)
    std::size_t pattern_vars = 0;    // (min)
    double timeout_penalty = 0.0;    // (min) 0, 0.5 (soft) or 1 (hard)
    double query_time_s = 0.0;       // (min)

    /// Pattern-level precision, the inverse of the average result length (0 when nothing is returned).
    double precision() const { return avg_result_len > 0 ? 1.0 / avg_result_len : 0.0; }

    std::strong_ordering operator<=>(const FitnessTuple& o) const;
    bool operator==(const FitnessTuple& o) const { return (*this <=> o) == 0; }
};

/// What a pattern does on the ground truth, independent of the ledger.
struct PatternEvaluation {
    std::vector<double> pv;           // per GT pair: 1/|prediction(s_i)| if t_i is predicted, else 0
    std::vector<bool> covered;        // per GT pair
    std::vector<std::size_t> result_len;  // per GT pair: |prediction(s_i)|
    std::size_t gt_matches = 0;
    double recall = 0.0;
    double avg_result_len = 0.0;
    double precision = 0.0;
    double f1 = 0.0;
    std::size_t matched_sources = 0;  // distinct sources among covered pairs
    std::size_t matched_targets = 0;  // distinct targets among covered pairs
    EvalStatus status = EvalStatus::Complete;
    double query_time_s = 0.0;
    bool complete = false;            // pattern contains ?source and ?target
};

struct FitnessConfig {
    double overfit_factor = 0.1;
    std::size_t overfit_min_sources = 2;
    std::size_t overfit_min_targets = 2;
};

/// Best precision per GT pair over all accepted patterns of finished runs.
class CoverageLedger {
public:
    CoverageLedger() = default;
    explicit CoverageLedger(std::size_t n) : best_(n, 0.0) {}
    explicit CoverageLedger(std::vector<double> best);

    std::size_t size() const { return best_.size(); }
    double operator[](std::size_t i) const { return best_[i]; }
    const std::vector<double>& values() const { return best_; }
    /// Σ (1 − best_i).
    double remains() const;
    /// Elementwise max with each precision vector.
    void update(const std::vector<const std::vector<double>*>& pvs);
    void update(const std::vector<double>& pv) { update(std::vector<const std::vector<double>*>{&pv}); }

    bool operator==(const CoverageLedger&) const = default;

private:
    std::vector<double> best_;
};

/// Runs the coverage query (VALUES over pairs) and the prediction query
/// (VALUES over distinct sources) and derives the per-pair metrics.
/// Incomplete patterns are not queried: all metrics are 0.
PatternEvaluation evaluate_pattern(Endpoint& ep, const GraphPattern& gp, const GroundTruth& gt);

double timeout_penalty(EvalStatus s);

/// Σ max(0, pv_i − ledger_i); 0 on any timeout or for incomplete patterns.
double gain(const PatternEvaluation& e, const CoverageLedger& ledger);

/// gain × overfit_factor when the covered pairs span fewer than the configured
/// number of distinct sources or targets, otherwise gain.
double score(double gain, const PatternEvaluation& e, const FitnessConfig& cfg = {});

FitnessTuple fitness(const GraphPattern& gp, const PatternEvaluation& e, const CoverageLedger& ledger,
                     const FitnessConfig& cfg = {});

struct Evaluated {
    PatternEvaluation evaluation;
    FitnessTuple fitness;
};

Evaluated evaluate(Endpoint& ep, const GraphPattern& gp, const GroundTruth& gt, const CoverageLedger& ledger,
                   const FitnessConfig& cfg = {});

std::string to_string(const FitnessTuple& f);

}  // namespace bgpl
