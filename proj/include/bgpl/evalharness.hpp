#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "bgpl/predict.hpp"

namespace bgpl {

struct Split {
    GroundTruth train;
    GroundTruth test;
    std::uint64_t seed = 0;
    double ratio = 0.0;
};

/// Random split with floor(ratio · n) test pairs; both parts keep input order.
Split split(const GroundTruth& gt, double test_ratio, std::uint64_t seed);

/// 1-based rank; nullopt stands for "not in the list" (rank ∞).
using Rank = std::optional<std::size_t>;

Rank rank_of_truth(const RankedList& list, const Term& truth);
Rank rank_of_truth(const std::vector<Term>& list, const Term& truth);

struct MetricReport {
    std::string name;
    std::array<double, 10> recall_at{};  // Recall@k at index k − 1
    double map = 0.0;
    double ndcg = 0.0;
    std::size_t pairs = 0;

    double recall(std::size_t k) const { return recall_at.at(k - 1); }
};

/// Recall@1..10, MAP (mean 1/r) and NDCG (mean 1/log2(r + 1)), with 0 for absent truths.
MetricReport metrics(const std::vector<Rank>& ranks, std::string name = {});

/// Node-level view of a store: nodes are the subject/object terms, edges the
/// distinct (subject, object) pairs.
class NodeGraph {
public:
    explicit NodeGraph(const TripleStore& store);

    std::size_t size() const { return nodes_.size(); }
    const Term& node(std::size_t i) const { return nodes_[i]; }
    std::optional<std::size_t> index(const Term& t) const;
    const std::vector<std::vector<std::size_t>>& out() const { return out_; }
    const std::vector<std::vector<std::size_t>>& in() const { return in_; }
    /// Distinct neighbours of node i in the given direction, excluding i itself, ascending.
    std::vector<std::size_t> neighbours(std::size_t i, Direction dir) const;

private:
    std::vector<Term> nodes_;  // sorted
    std::vector<std::vector<std::size_t>> out_;
    std::vector<std::vector<std::size_t>> in_;
};

struct IterationOptions {
    double damping = 0.85;  // PageRank only
    double eps = 1e-10;     // L1 change that ends the iteration
    std::size_t max_iter = 1000;
};

/// Power iteration; the mass of dangling nodes is spread uniformly, so scores sum to 1.
std::vector<double> pagerank(const NodeGraph& g, const IterationOptions& opts = {});
std::vector<double> pagerank(const TripleStore& store, const IterationOptions& opts = {});

struct HitsScores {
    std::vector<double> authority;
    std::vector<double> hub;
};

/// Kleinberg's iteration with L2 normalisation after every half step.
HitsScores hits(const NodeGraph& g, const IterationOptions& opts = {});
HitsScores hits(const TripleStore& store, const IterationOptions& opts = {});

enum class Scorer { OutDegree, InDegree, PageRank, Hits };

/// Graph-measure baselines: rank the 1-hop neighbours of a source.
class BaselinePredictor {
public:
    /// `hits_hub` ranks by hub instead of authority score.
    explicit BaselinePredictor(const TripleStore& store, const IterationOptions& opts = {}, bool hits_hub = false);

    /// Neighbours in the direction, by score descending then term ascending; top k when given.
    std::vector<Term> predict(const Term& source, Direction dir, Scorer scorer,
                              std::optional<std::size_t> k = std::nullopt) const;
    double score(std::size_t node, Scorer scorer) const;
    const NodeGraph& graph() const { return graph_; }

private:
    NodeGraph graph_;
    std::vector<double> pagerank_;
    std::vector<double> hits_;
};

const char* to_string(Scorer s);
const char* to_string(Direction d);
/// Row label such as "pagerank in".
std::string baseline_name(Scorer s, Direction d);

/// One report per fusion strategy: rank of each test pair's target in the
/// fused prediction for its source.
std::vector<MetricReport> evaluate_portfolio(Endpoint& ep, const Portfolio& portfolio, const GroundTruth& test);

/// One report per (scorer, direction), in the order outdeg, indeg, pagerank, hits × in, out, bidi.
std::vector<MetricReport> evaluate_baselines(const BaselinePredictor& baselines, const GroundTruth& test);

/// Aligned text table: Recall@1..5, Recall@10, MAP and NDCG per row.
std::string format_table(const std::vector<MetricReport>& rows);

}  // namespace bgpl
