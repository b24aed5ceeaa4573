#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "bgpl/pattern.hpp"
#include "bgpl/triple_store.hpp"

namespace bgpl {

enum class EvalStatus { Complete, SoftTimeout, HardTimeout };

const char* to_string(EvalStatus s);

/// A VALUES block: one column per variable, one term per cell.
struct ValuesTable {
    std::vector<Variable> vars;
    std::vector<std::vector<Term>> rows;

    bool operator==(const ValuesTable&) const = default;
};

struct SelectQuery {
    GraphPattern pattern;
    std::vector<Variable> projection;
    std::optional<ValuesTable> values;
    std::optional<std::size_t> limit;
};

inline constexpr double kNoTimeout = std::numeric_limits<double>::infinity();

/// Wall: timeouts and elapsed time use the steady clock.
/// Work: both are derived from a count of visited index entries, which makes
/// results and timings reproducible regardless of machine load.
enum class ClockMode { Wall, Work };

/// Nominal duration charged per unit of engine work in ClockMode::Work.
inline constexpr double kSecondsPerWorkUnit = 1e-7;

struct EvalOptions {
    double soft_timeout_s = 2.0;
    double hard_timeout_s = 10.0;
    ClockMode clock = ClockMode::Wall;
};

/// Projected DISTINCT solutions. Soft timeouts keep the rows found so far;
/// hard timeouts carry no rows.
struct EvalResult {
    std::vector<Variable> columns;
    std::vector<std::vector<Term>> rows;
    EvalStatus status = EvalStatus::Complete;
    double elapsed_s = 0.0;
    std::uint64_t work = 0;

    Binding binding(std::size_t row) const;
    bool timed_out() const { return status != EvalStatus::Complete; }
};

/// Evaluates SELECT DISTINCT over the store. Throws std::invalid_argument for a
/// projection variable absent from both pattern and VALUES, or for an empty
/// pattern without VALUES.
EvalResult select(const TripleStore& store, const SelectQuery& query, const EvalOptions& opts = {});

struct AskResult {
    bool value = false;
    EvalStatus status = EvalStatus::Complete;
    double elapsed_s = 0.0;
};

/// True iff the pattern with `binding` applied has at least one solution.
AskResult ask(const TripleStore& store, const GraphPattern& gp, const Binding& binding, const EvalOptions& opts = {});

/// Greedy join order. Estimates use exact index counts for fixed positions and
/// per-position fan-out for positions bound by earlier variables (or `prebound`).
/// Patterns sharing no variable with the bound set are deferred until nothing connected remains.
std::vector<TriplePattern> join_plan(const TripleStore& store, const GraphPattern& gp,
                                     const std::vector<Variable>& prebound = {});

}  // namespace bgpl
