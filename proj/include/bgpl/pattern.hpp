#pragma once

#include <compare>
#include <initializer_list>
#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "bgpl/lexer.hpp"
#include "bgpl/term.hpp"

namespace bgpl {

struct Variable {
    std::string name;

    auto operator<=>(const Variable&) const = default;
    bool operator==(const Variable&) const = default;
};

inline const Variable kSource{"source"};
inline const Variable kTarget{"target"};

inline bool is_reserved(const Variable& v) { return v == kSource || v == kTarget; }

/// A triple-pattern position: a variable or a fixed RDF term. Blank-node terms
/// inside patterns behave as non-projectable variables (SPARQL semantics).
using Node = std::variant<Variable, Term>;

inline bool is_var(const Node& n) { return std::holds_alternative<Variable>(n); }
inline const Variable& var_of(const Node& n) { return std::get<Variable>(n); }
inline const Term& term_of(const Node& n) { return std::get<Term>(n); }
inline bool is_fixed(const Node& n) { return !is_var(n) && !term_of(n).is_blank(); }
inline bool is_reserved(const Node& n) { return is_var(n) && is_reserved(var_of(n)); }

std::string to_string(const Node& n);

struct TriplePattern {
    Node s;
    Node p;
    Node o;

    auto operator<=>(const TriplePattern&) const = default;
    bool operator==(const TriplePattern&) const = default;
};

std::string to_string(const TriplePattern& t);

using Binding = std::map<Variable, Term>;

/// A basic graph pattern with set semantics: triples are kept sorted and unique.
class GraphPattern {
public:
    GraphPattern() = default;
    GraphPattern(std::initializer_list<TriplePattern> triples);
    explicit GraphPattern(std::vector<TriplePattern> triples);

    bool insert(TriplePattern t);
    bool erase(const TriplePattern& t);

    const std::vector<TriplePattern>& triples() const { return triples_; }
    std::size_t size() const { return triples_.size(); }
    bool empty() const { return triples_.empty(); }
    auto begin() const { return triples_.begin(); }
    auto end() const { return triples_.end(); }

    /// Distinct variables, sorted.
    std::vector<Variable> variables() const;
    /// Distinct variables plus distinct blank nodes.
    std::size_t variable_count() const;
    bool contains(const Variable& v) const;
    /// Number of positions (s, p or o) holding the node.
    std::size_t occurrences(const Node& n) const;
    /// Distinct nodes in subject/object positions, sorted.
    std::vector<Node> nodes() const;
    /// Distinct fixed (non-blank) terms in any position, sorted.
    std::vector<Term> fixed_terms() const;

    bool is_complete() const { return contains(kSource) && contains(kTarget); }
    /// Single component of the undirected graph over subject/object nodes, with
    /// predicate variables attached to both endpoints of their triple. Empty patterns are not connected.
    bool is_connected() const;

    /// Applies a binding: bound variables become their terms.
    GraphPattern substitute(const Binding& b) const;
    /// Replaces every occurrence of `from` by `to`.
    GraphPattern replace(const Node& from, const Node& to) const;

    /// One triple per line, N-Triples terms and `?var` variables, each ending in " .".
    std::string to_string() const;

    auto operator<=>(const GraphPattern&) const = default;
    bool operator==(const GraphPattern&) const = default;

private:
    std::vector<TriplePattern> triples_;
};

/// A variable named `<prefix><n>` not occurring in any of the given patterns.
Variable fresh_variable(const GraphPattern& gp, std::string_view prefix = "v");
Variable fresh_variable(std::initializer_list<const GraphPattern*> gps, std::string_view prefix = "v");

/// Parses a basic graph pattern body: optional PREFIX lines, then triples with
/// `.`, `;`, `,` and `a`. Throws ParseError.
GraphPattern parse_pattern(std::string_view text, const Namespaces& ns = {});

namespace detail {
/// Reads a pattern node (variable, IRI, prefixed name, blank node, literal);
/// `predicate` enables the `a` shorthand.
Node read_node(Lexer& lex, const Namespaces& ns, bool predicate);
/// Reads triples up to (not consuming) a token of kind `stop`.
void read_triples(Lexer& lex, const Namespaces& ns, std::vector<TriplePattern>& out, TokenKind stop);
/// Consumes leading PREFIX / @prefix / BASE declarations into `ns`.
void read_prologue(Lexer& lex, Namespaces& ns);
}  // namespace detail

}  // namespace bgpl
