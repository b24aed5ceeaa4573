#include "bgpl/term.hpp"

#include <stdexcept>

namespace bgpl {

Term Term::literal(std::string lexical, std::string datatype, std::string language) {
    if (!datatype.empty() && !language.empty()) {
        throw std::invalid_argument("literal cannot carry both a datatype and a language tag");
    }
    return {TermKind::Literal, std::move(lexical), std::move(datatype), std::move(language)};
}

std::string escape_literal(std::string_view lexical) {
    std::string out;
    out.reserve(lexical.size() + 2);
    for (char c : lexical) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default: out += c;
        }
    }
    return out;
}

std::string to_ntriples(const Term& t) {
    switch (t.kind) {
        case TermKind::Iri: return "<" + t.value + ">";
        case TermKind::Blank: return "_:" + t.value;
        case TermKind::Literal: {
            std::string out = "\"" + escape_literal(t.value) + "\"";
            if (!t.language.empty()) {
                out += "@" + t.language;
            } else if (!t.datatype.empty()) {
                out += "^^<" + t.datatype + ">";
            }
            return out;
        }
    }
    return {};
}

bool is_valid_iri_chars(std::string_view iri) {
    for (unsigned char c : iri) {
        if (c <= 0x20) return false;
        switch (c) {
            case '<': case '>': case '"': case '{': case '}':
            case '|': case '^': case '`': case '\\':
                return false;
            default: break;
        }
    }
    return true;
}

bool is_absolute_iri(std::string_view iri) {
    if (iri.empty() || !is_valid_iri_chars(iri)) return false;
    auto is_alpha = [](char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); };
    if (!is_alpha(iri.front())) return false;
    for (std::size_t i = 1; i < iri.size(); ++i) {
        char c = iri[i];
        if (c == ':') return true;
        bool ok = is_alpha(c) || (c >= '0' && c <= '9') || c == '+' || c == '-' || c == '.';
        if (!ok) return false;
    }
    return false;
}

void validate_triple(const Triple& t) {
    if (t.subject.is_literal()) throw std::invalid_argument("literal in subject position");
    if (!t.predicate.is_iri()) throw std::invalid_argument("predicate must be an IRI");
}

std::string to_ntriples(const Triple& t) {
    return to_ntriples(t.subject) + " " + to_ntriples(t.predicate) + " " + to_ntriples(t.object) + " .";
}

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t seed) {
    std::uint64_t h = seed;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace bgpl

std::size_t std::hash<bgpl::Term>::operator()(const bgpl::Term& t) const noexcept {
    std::uint64_t h = bgpl::fnv1a(t.value, 0xcbf29ce484222325ULL ^ static_cast<std::uint64_t>(t.kind));
    if (!t.datatype.empty()) h = bgpl::fnv1a(t.datatype, h ^ 0x5eed);
    if (!t.language.empty()) h = bgpl::fnv1a(t.language, h ^ 0x1a6);
    return static_cast<std::size_t>(h);
}
