#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "bgpl/term.hpp"

namespace bgpl {

using TermId = std::uint32_t;
inline constexpr TermId kUnbound = static_cast<TermId>(-1);

struct IdTriple {
    TermId s;
    TermId p;
    TermId o;

    auto operator<=>(const IdTriple&) const = default;
    bool operator==(const IdTriple&) const = default;
};

enum class Direction { In, Out, Bidi };

/// Immutable in-memory triple store. Terms are interned into ids assigned in
/// sorted term order, so id order equals term order and is input-order independent.
/// Three sorted copies of the triple set (SPO, POS, OSP orderings) answer every
/// bound/unbound combination with one binary search.
class TripleStore {
public:
    TripleStore() = default;
    explicit TripleStore(std::vector<Triple> triples);

    std::size_t size() const { return spo_.size(); }
    bool empty() const { return spo_.empty(); }
    std::size_t term_count() const { return terms_.size(); }

    std::optional<TermId> lookup(const Term& t) const;
    const Term& term(TermId id) const { return terms_.at(id); }

    /// Triples matching the bound ids (kUnbound = wildcard). The span is a
    /// contiguous slice of one index; elements are always laid out as (s, p, o).
    std::span<const IdTriple> match_ids(TermId s, TermId p, TermId o) const;

    /// Term-level match, results in SPO id order.
    std::vector<Triple> match(const std::optional<Term>& s, const std::optional<Term>& p,
                              const std::optional<Term>& o) const;

    std::size_t degree(const Term& node, Direction dir) const;
    std::size_t degree(TermId node, Direction dir) const;

    /// All triples in SPO order.
    std::span<const IdTriple> triples() const { return spo_; }
    std::vector<Triple> to_triples() const;
    Triple decode(const IdTriple& t) const { return {terms_[t.s], terms_[t.p], terms_[t.o]}; }

    /// Number of distinct terms seen in subject (0), predicate (1) or object (2) position.
    std::size_t distinct_in_position(int position) const { return distinct_.at(position); }

    /// Index sizes, exposed for consistency checks.
    std::size_t spo_size() const { return spo_.size(); }
    std::size_t pos_size() const { return pos_.size(); }
    std::size_t osp_size() const { return osp_.size(); }

private:
    std::vector<Term> terms_;
    std::unordered_map<Term, TermId> ids_;
    std::vector<IdTriple> spo_;
    std::vector<IdTriple> pos_;
    std::vector<IdTriple> osp_;
    std::array<std::size_t, 3> distinct_{};
};

struct ParseOptions {
    /// Relative IRI references are resolved by concatenation onto this base.
    std::string base = "file:///";
};

/// Parses N-Triples and the Turtle subset (@prefix/PREFIX, @base/BASE, `a`,
/// `;` and `,` lists, `[ ... ]` blank nodes, numeric and boolean literals).
/// Throws ParseError with line/column.
std::vector<Triple> parse_turtle(std::string_view text, const ParseOptions& opts = {});

/// Reads a whole stream (gzip-compressed input is detected and inflated) and builds a store.
TripleStore load_ntriples(std::istream& in, const ParseOptions& opts = {});
TripleStore load_file(const std::filesystem::path& path, const ParseOptions& opts = {});

/// Inflates gzip data; returns the input unchanged when it lacks the gzip magic.
std::string maybe_gunzip(std::string bytes);

void write_ntriples(const TripleStore& store, std::ostream& out);

}  // namespace bgpl
