#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

namespace bgpl {

enum class TermKind : std::uint8_t { Iri, Blank, Literal };

/// An RDF node. Literals carry at most one of datatype / language tag.
struct Term {
    TermKind kind = TermKind::Iri;
    std::string value;
    std::string datatype;  // IRI of the datatype, empty for plain / lang literals
    std::string language;

    static Term iri(std::string v) { return {TermKind::Iri, std::move(v), {}, {}}; }
    static Term blank(std::string label) { return {TermKind::Blank, std::move(label), {}, {}}; }
    static Term literal(std::string lexical, std::string datatype = {}, std::string language = {});

    bool is_iri() const { return kind == TermKind::Iri; }
    bool is_blank() const { return kind == TermKind::Blank; }
    bool is_literal() const { return kind == TermKind::Literal; }

    auto operator<=>(const Term&) const = default;
    bool operator==(const Term&) const = default;
};

/// N-Triples surface form: `<iri>`, `_:label`, `"lex"`, `"lex"@en`, `"lex"^^<dt>`.
std::string to_ntriples(const Term& t);

/// Escapes a literal lexical form for N-Triples / SPARQL string syntax.
std::string escape_literal(std::string_view lexical);

/// True for an IRI with a scheme (`scheme:rest`) and no characters forbidden in IRIREF.
bool is_absolute_iri(std::string_view iri);

/// True when the string contains none of the characters disallowed inside `<...>`.
bool is_valid_iri_chars(std::string_view iri);

struct Triple {
    Term subject;
    Term predicate;
    Term object;

    auto operator<=>(const Triple&) const = default;
    bool operator==(const Triple&) const = default;
};

/// Throws std::invalid_argument unless subject is not a literal and predicate is an IRI.
void validate_triple(const Triple& t);

std::string to_ntriples(const Triple& t);

/// 64-bit FNV-1a, stable across processes and platforms.
std::uint64_t fnv1a(std::string_view bytes, std::uint64_t seed = 0xcbf29ce484222325ULL);

}  // namespace bgpl

template <>
struct std::hash<bgpl::Term> {
    std::size_t operator()(const bgpl::Term& t) const noexcept;
};
