#pragma once

// Independent reference implementations used to cross-check the library.
// They favour obviousness over speed and share no code with src/ beyond the data types.

#include <random>
#include <set>
#include <vector>

#include "bgpl/engine.hpp"

namespace bgpl::oracle {

using Row = std::vector<Term>;

/// Enumerates every assignment of the pattern's variables (and blank nodes)
/// over all terms of `triples`, keeps those whose instantiated triples are all
/// in the set, applies the VALUES rows and projects.
std::set<Row> brute_select(const std::vector<Triple>& triples, const SelectQuery& q);

/// Random store over `nodes` IRIs ex:n0.., `preds` predicates ex:p0.. and a couple of literals.
std::vector<Triple> random_triples(std::mt19937_64& rng, int nodes, int preds, int count);

/// Random pattern of 1..max_triples triples drawing from ?source, ?target, up to
/// `extra_vars` other variables, and the terms of `triples`.
GraphPattern random_pattern(std::mt19937_64& rng, const std::vector<Triple>& triples, int max_triples,
                            int extra_vars = 2, bool predicate_vars = true);

/// Random variable renaming of non-reserved variables (injective, fresh names).
GraphPattern rename_randomly(std::mt19937_64& rng, const GraphPattern& gp);

/// True iff some bijection of non-reserved variables maps a onto b (exhaustive search).
bool isomorphic(const GraphPattern& a, const GraphPattern& b);

std::vector<Term> terms_of(const std::vector<Triple>& triples);

}  // namespace bgpl::oracle

namespace bgpl::oracle {

struct FitnessOracle {
    std::vector<double> pv;
    std::size_t gt_matches = 0;
    double recall = 0, avg_result_len = 0, precision = 0, gain = 0;
};

/// Per-pair ASK and per-source prediction by brute force, then the metric definitions verbatim.
FitnessOracle brute_fitness(const std::vector<Triple>& triples, const GraphPattern& gp,
                            const std::vector<std::pair<Term, Term>>& gt, const std::vector<double>& ledger);

}  // namespace bgpl::oracle
