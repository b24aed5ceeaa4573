#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "bgpl/evolution.hpp"

namespace bgpl {

struct PortfolioEntry {
    GraphPattern pattern;
    std::string key;
    std::vector<double> pv;  // per training GT pair
    FitnessTuple fitness;
};

/// Learned patterns plus the subset used for prediction.
struct Portfolio {
    std::vector<PortfolioEntry> patterns;
    std::vector<std::size_t> representatives;  // indices into patterns, ascending
    std::string variant;                       // clustering variant that chose them
    std::size_t k = 0;
    double loss = 0.0;

    static Portfolio from(const std::vector<AcceptedPattern>& accepted);
    /// All patterns, as if no reduction happened.
    void select_all();
};

/// Σ_i (max over all patterns of pv_i − max over the selected patterns of pv_i).
double precision_loss(const std::vector<std::vector<double>>& pvs, const std::vector<std::size_t>& selected);
/// Σ_i max over all patterns of pv_i.
double precision_mass(const std::vector<std::vector<double>>& pvs);

/// One agglomeration step: clusters a and b (ids < n are points, n + s is the
/// cluster formed at step s) merge at the given Ward distance.
struct Merge {
    std::size_t a = 0;
    std::size_t b = 0;
    double height = 0.0;
    std::size_t size = 0;
};

/// Ward linkage (nearest-neighbour chain, Lance–Williams updates on squared
/// Euclidean distances). Returns the n − 1 merges ordered by height.
std::vector<Merge> ward_linkage(const std::vector<std::vector<double>>& points);

/// Flat cluster label (0..k−1, numbered by smallest member) per point after
/// applying the first n − k merges.
std::vector<std::size_t> cut_tree(const std::vector<Merge>& merges, std::size_t n, std::size_t k);

/// Each dimension divided by its maximum over all points; all-zero dimensions are dropped.
std::vector<std::vector<double>> max_scaled(const std::vector<std::vector<double>>& points);

struct Reduction {
    std::vector<std::size_t> representatives;
    std::string variant;
    double loss = 0.0;
};

/// Best pattern of each cluster: highest score, then the full fitness tuple, then lowest index.
std::vector<std::size_t> representatives(const std::vector<PortfolioEntry>& patterns,
                                         const std::vector<std::size_t>& labels);

/// Clusters the precision vectors into k groups with each variant ("ward",
/// "ward_scaled") and keeps the variant whose representatives lose the least
/// precision. k ≥ |patterns| keeps everything.
Reduction reduce_queries(const std::vector<PortfolioEntry>& patterns, std::size_t k);
void reduce_queries(Portfolio& portfolio, std::size_t k);

/// Distinct ?target bindings per pattern with ?source bound to `source`; a
/// timed-out pattern yields an empty set.
std::vector<std::vector<Term>> predict_targets(Endpoint& ep, const std::vector<GraphPattern>& patterns,
                                               const Term& source);

/// The same for many sources with one VALUES query per pattern: result[s][p].
std::vector<std::vector<std::vector<Term>>> predict_targets(Endpoint& ep, const std::vector<GraphPattern>& patterns,
                                                            const std::vector<Term>& sources);

enum class FusionStrategy { TargetOccs, Scores, FMeasures, GpPrecisions, Precisions };
inline constexpr std::array<FusionStrategy, 5> kFusionStrategies{
    FusionStrategy::TargetOccs, FusionStrategy::Scores, FusionStrategy::FMeasures, FusionStrategy::GpPrecisions,
    FusionStrategy::Precisions};

const char* to_string(FusionStrategy s);
std::optional<FusionStrategy> parse_fusion_strategy(std::string_view name);

using RankedList = std::vector<std::pair<Term, double>>;

struct RankedPrediction {
    Term source;
    std::array<RankedList, 5> lists;  // indexed by FusionStrategy

    const RankedList& operator[](FusionStrategy s) const { return lists[static_cast<std::size_t>(s)]; }
};

/// Fuses per-pattern target sets (sets[j] from patterns[j]) into the five
/// rankings: value descending, then target ascending.
RankedPrediction fuse(const Term& source, const std::vector<std::vector<Term>>& sets,
                      const std::vector<const PortfolioEntry*>& patterns);

/// Prediction for each source with the portfolio's representatives.
std::vector<RankedPrediction> predict(Endpoint& ep, const Portfolio& portfolio, const std::vector<Term>& sources);

}  // namespace bgpl
