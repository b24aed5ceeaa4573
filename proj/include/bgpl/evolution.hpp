#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "bgpl/fitness.hpp"
#include "bgpl/rng.hpp"

namespace bgpl {

struct MutationProbs {
    double introduce_var = 0.05;
    double split_var = 0.05;
    double merge_var = 0.05;
    double del_triple = 0.05;
    double expand_node = 0.1;
    double add_edge = 0.05;
    double increase_dist = 0.05;
    double simplify = 0.05;
    double fix_var = 0.3;
};

struct EvolutionConfig {
    std::size_t population_size = 200;
    std::size_t max_generations = 20;
    std::size_t max_runs = 64;

    double mating_prob = 0.5;
    double p_dominant = 0.9;
    double p_recessive = 0.1;
    double rename_prob = 0.5;
    MutationProbs mutation;

    std::size_t tournament_size = 3;

    /// Initial paths have length l in 1..max_path_length with P(l) ∝ path_decay^l.
    std::size_t max_path_length = 3;
    double path_decay = 0.5;
    double edge_flip_prob = 0.5;
    double fragment_fraction = 0.1;
    double init_fix_var_prob = 0.9;

    std::size_t fix_var_samples = 32;   // M
    std::size_t fix_var_children = 8;   // C

    std::size_t max_length = 10;        // L_max
    std::size_t max_vars = 6;           // V_max, counting ?source and ?target

    std::size_t hof_size = 100;
    std::size_t reintro_fresh = 4;
    std::size_t reintro_hof = 4;

    double accept_score = 2.0;          // accepted iff score > accept_score
    double min_remains = 0.5;           // stop once remains drops below
    bool verify_simplify = true;        // simplify accepted patterns against the endpoint

    std::uint64_t seed = 1;
    std::size_t workers = 1;            // concurrent fitness evaluations
    std::size_t snapshot_size = 10;     // individuals recorded per generation in the run log

    FitnessConfig fitness;
};

/// Throws std::invalid_argument when a probability is outside [0,1] or a size is 0.
void validate(const EvolutionConfig& cfg);

struct Individual {
    Individual() = default;
    explicit Individual(GraphPattern gp) : pattern(std::move(gp)) {}

    GraphPattern pattern;
    std::string key;  // canonical key, set on evaluation
    std::shared_ptr<const PatternEvaluation> evaluation;
    std::optional<FitnessTuple> fitness;

    bool evaluated() const { return fitness.has_value(); }
    void set_pattern(GraphPattern gp) {
        pattern = std::move(gp);
        key.clear();
        evaluation.reset();
        fitness.reset();
    }
};

/// The best distinct (by canonical key) fit-to-live individuals seen, best first.
class HallOfFame {
public:
    explicit HallOfFame(std::size_t capacity) : capacity_(capacity) {}

    /// Offers evaluated individuals; others and unfit ones are ignored.
    void update(const std::vector<Individual>& individuals, const EvolutionConfig& cfg);
    const std::vector<Individual>& entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }
    std::optional<FitnessTuple> best() const;

private:
    std::size_t capacity_;
    std::vector<Individual> entries_;
};

/// Length, variable count, completeness and connectivity bounds for offspring.
bool fit_to_live(const GraphPattern& gp, const EvolutionConfig& cfg);

/// Endpoint, ground truth and ledger a run works against.
struct SearchContext {
    Endpoint& endpoint;
    const GroundTruth& gt;
    const CoverageLedger& ledger;
    const EvolutionConfig& cfg;
};

/// All-variable path of length l from ?source to ?target; flips[i] reverses edge i.
GraphPattern path_pattern(std::size_t length, const std::vector<bool>& flips = {});

/// `count` new individuals (population_size when omitted): a fragment share of
/// single all-variable triples at ?source or ?target, the rest random paths,
/// each path fix-var mutated with init_fix_var_prob. Fix-var children take the
/// slots of their path.
std::vector<Individual> init_population(const SearchContext& ctx, Rng& rng, std::optional<std::size_t> count = {});

/// Two children with swapped dominance: intersection of both parents plus each
/// other dominant triple with p_dominant and each other recessive triple with
/// p_recessive; with rename_prob the recessive triples' variables are renamed fresh first.
std::pair<GraphPattern, GraphPattern> mate(const GraphPattern& a, const GraphPattern& b, Rng& rng,
                                           const EvolutionConfig& cfg);

/// Individual mutation strategies. Each returns false (leaving gp untouched)
/// when it does not apply.
namespace mutation {
bool introduce_var(GraphPattern& gp, Rng& rng);
bool split_var(GraphPattern& gp, Rng& rng);
bool merge_var(GraphPattern& gp, Rng& rng);
bool del_triple(GraphPattern& gp, Rng& rng);
bool expand_node(GraphPattern& gp, Rng& rng);
bool add_edge(GraphPattern& gp, Rng& rng);
bool increase_dist(GraphPattern& gp, Rng& rng);
bool simplify(GraphPattern& gp);
}  // namespace mutation

/// Candidate instantiations of one variable with the number of sampled pairs supporting each.
struct FixVarCandidates {
    Variable var;
    std::vector<std::size_t> pairs;                   // indices of the sampled GT pairs
    std::vector<std::pair<Term, std::size_t>> counts;  // sorted by term
    EvalStatus status = EvalStatus::Complete;
};

/// Up to m GT pair indices drawn without replacement with weight 1 − ledger_i,
/// uniformly once all remaining weights are 0.
std::vector<std::size_t> sample_pairs(const CoverageLedger& ledger, std::size_t m, Rng& rng);

FixVarCandidates fix_var_candidates(const SearchContext& ctx, const GraphPattern& gp, const Variable& v,
                                    const std::vector<std::size_t>& pairs);

/// Instantiates a uniformly chosen non-reserved variable with up to C distinct
/// terms drawn by frequency among the sampled pairs. Empty when nothing applies.
std::vector<GraphPattern> fix_var(const SearchContext& ctx, const GraphPattern& gp, Rng& rng);

/// Applies the nine strategies in order, each with its probability. Returns the
/// mutant, or the fix-var children when that strategy produced any.
std::vector<GraphPattern> mutate(const SearchContext& ctx, const GraphPattern& gp, Rng& rng);

/// Index of the fittest of k uniformly drawn (with replacement) individuals; the first drawn wins ties.
std::size_t tournament(const std::vector<Individual>& pool, std::size_t k, Rng& rng);

/// Tournament winners, then the fresh individuals, then the best hall-of-fame
/// entries, exactly population_size in total. Pool individuals must be evaluated.
std::vector<Individual> select_next(const std::vector<Individual>& pool, const HallOfFame& hof,
                                    const std::vector<Individual>& fresh, const EvolutionConfig& cfg, Rng& rng);

/// Memoized, optionally concurrent pattern evaluation. Evaluations depend only
/// on the pattern, so they are shared across runs; fitness uses the given ledger.
class Evaluator {
public:
    Evaluator(Endpoint& ep, const GroundTruth& gt, const EvolutionConfig& cfg) : ep_(ep), gt_(gt), cfg_(cfg) {}

    /// Fills key, evaluation and fitness of every unevaluated individual.
    /// Only fit-to-live patterns are queried; others get an all-zero evaluation.
    void evaluate(std::vector<Individual>& individuals, const CoverageLedger& ledger);
    Evaluated evaluate(const GraphPattern& gp, const CoverageLedger& ledger);

private:
    std::shared_ptr<const PatternEvaluation> lookup(const std::string& key);

    Endpoint& ep_;
    const GroundTruth& gt_;
    const EvolutionConfig& cfg_;
    std::mutex mutex_;
    std::map<std::string, std::shared_ptr<const PatternEvaluation>> memo_;
};

struct Snapshot {
    std::string pattern;
    std::string key;
    FitnessTuple fitness;
    std::vector<double> pv;
};

struct GenerationRecord {
    std::size_t generation = 0;
    std::vector<Snapshot> best;    // distinct best individuals of the population
    std::optional<FitnessTuple> hof_best;
    std::size_t population = 0;
    std::size_t distinct = 0;      // distinct canonical keys in the population
    std::size_t unfit = 0;         // individuals failing fit-to-live (fragments, surviving parents)
    double wall_s = 0.0;
};

struct AcceptedPattern {
    GraphPattern pattern;
    std::string key;
    PatternEvaluation evaluation;
    FitnessTuple fitness;
    std::size_t run = 0;  // 1-based
};

struct RunRecord {
    std::size_t run = 0;
    std::vector<GenerationRecord> generations;
    std::vector<AcceptedPattern> accepted;  // new patterns of this run
    double remains_before = 0.0;
    double remains_after = 0.0;
    double wall_s = 0.0;
};

struct LearnResult {
    std::vector<AcceptedPattern> patterns;
    CoverageLedger ledger;
    std::vector<RunRecord> runs;
    bool aborted = false;
    std::string error;
};

struct LearnOptions {
    /// Ledger and patterns of earlier runs to resume from.
    std::optional<CoverageLedger> ledger;
    std::vector<AcceptedPattern> previous;
    std::size_t first_run = 1;
    std::function<void(const RunRecord&, const LearnResult&)> on_run;
};

/// One evolutionary run: max_generations generations from a fresh population,
/// returning the final hall of fame.
HallOfFame run_evolution(const SearchContext& ctx, Evaluator& evaluator, Rng& rng, RunRecord& record);

/// The multi-run driver. Each run accepts its hall-of-fame patterns with a score
/// above the threshold (after simplification), skips canonical duplicates of
/// earlier acceptances and then updates the ledger. EndpointUnreachable ends
/// the loop with the partial result marked aborted.
LearnResult learn(Endpoint& ep, const GroundTruth& gt, const EvolutionConfig& cfg, const LearnOptions& opts = {});

}  // namespace bgpl
