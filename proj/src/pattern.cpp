#include "bgpl/pattern.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <set>
#include <stdexcept>

namespace bgpl {

namespace {

void validate(const TriplePattern& t) {
    if (!is_var(t.s) && term_of(t.s).is_literal()) throw std::invalid_argument("literal in subject position");
    if (!is_var(t.p) && !term_of(t.p).is_iri()) throw std::invalid_argument("predicate must be an IRI or variable");
}

bool is_word(const Token& t, std::string_view w) {
    if (t.kind != TokenKind::Word || t.text.size() != w.size()) return false;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (std::toupper(static_cast<unsigned char>(t.text[i])) != w[i]) return false;
    }
    return true;
}

}  // namespace

std::string to_string(const Node& n) {
    if (is_var(n)) return "?" + var_of(n).name;
    return to_ntriples(term_of(n));
}

std::string to_string(const TriplePattern& t) {
    return to_string(t.s) + " " + to_string(t.p) + " " + to_string(t.o) + " .";
}

GraphPattern::GraphPattern(std::initializer_list<TriplePattern> triples)
    : GraphPattern(std::vector<TriplePattern>(triples)) {}

GraphPattern::GraphPattern(std::vector<TriplePattern> triples) : triples_(std::move(triples)) {
    for (const auto& t : triples_) validate(t);
    std::sort(triples_.begin(), triples_.end());
    triples_.erase(std::unique(triples_.begin(), triples_.end()), triples_.end());
}

bool GraphPattern::insert(TriplePattern t) {
    validate(t);
    auto it = std::lower_bound(triples_.begin(), triples_.end(), t);
    if (it != triples_.end() && *it == t) return false;
    triples_.insert(it, std::move(t));
    return true;
}

bool GraphPattern::erase(const TriplePattern& t) {
    auto it = std::lower_bound(triples_.begin(), triples_.end(), t);
    if (it == triples_.end() || *it != t) return false;
    triples_.erase(it);
    return true;
}

std::vector<Variable> GraphPattern::variables() const {
    std::set<Variable> vars;
    for (const auto& t : triples_) {
        for (const Node* n : {&t.s, &t.p, &t.o}) {
            if (is_var(*n)) vars.insert(var_of(*n));
        }
    }
    return {vars.begin(), vars.end()};
}

std::size_t GraphPattern::variable_count() const {
    std::set<Node> vars;
    for (const auto& t : triples_) {
        for (const Node* n : {&t.s, &t.p, &t.o}) {
            if (!is_fixed(*n)) vars.insert(*n);
        }
    }
    return vars.size();
}

bool GraphPattern::contains(const Variable& v) const {
    for (const auto& t : triples_) {
        for (const Node* n : {&t.s, &t.p, &t.o}) {
            if (is_var(*n) && var_of(*n) == v) return true;
        }
    }
    return false;
}

std::size_t GraphPattern::occurrences(const Node& n) const {
    std::size_t count = 0;
    for (const auto& t : triples_) count += (t.s == n) + (t.p == n) + (t.o == n);
    return count;
}

std::vector<Node> GraphPattern::nodes() const {
    std::set<Node> nodes;
    for (const auto& t : triples_) {
        nodes.insert(t.s);
        nodes.insert(t.o);
    }
    return {nodes.begin(), nodes.end()};
}

std::vector<Term> GraphPattern::fixed_terms() const {
    std::set<Term> terms;
    for (const auto& t : triples_) {
        for (const Node* n : {&t.s, &t.p, &t.o}) {
            if (is_fixed(*n)) terms.insert(term_of(*n));
        }
    }
    return {terms.begin(), terms.end()};
}

bool GraphPattern::is_connected() const {
    if (triples_.empty()) return false;
    std::vector<Node> vertices;
    for (const auto& t : triples_) {
        vertices.push_back(t.s);
        vertices.push_back(t.o);
        if (!is_fixed(t.p)) vertices.push_back(t.p);
    }
    std::sort(vertices.begin(), vertices.end());
    vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());
    auto index = [&](const Node& n) {
        return static_cast<std::size_t>(std::lower_bound(vertices.begin(), vertices.end(), n) - vertices.begin());
    };
    std::vector<std::size_t> parent(vertices.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    auto unite = [&](std::size_t a, std::size_t b) { parent[find(a)] = find(b); };
    for (const auto& t : triples_) {
        unite(index(t.s), index(t.o));
        if (!is_fixed(t.p)) unite(index(t.p), index(t.s));
    }
    std::size_t root = find(0);
    for (std::size_t i = 1; i < vertices.size(); ++i) {
        if (find(i) != root) return false;
    }
    return true;
}

GraphPattern GraphPattern::substitute(const Binding& b) const {
    std::vector<TriplePattern> out;
    out.reserve(triples_.size());
    auto sub = [&](const Node& n) -> Node {
        if (is_var(n)) {
            auto it = b.find(var_of(n));
            if (it != b.end()) return it->second;
        }
        return n;
    };
    for (const auto& t : triples_) out.push_back({sub(t.s), sub(t.p), sub(t.o)});
    return GraphPattern(std::move(out));
}

GraphPattern GraphPattern::replace(const Node& from, const Node& to) const {
    std::vector<TriplePattern> out;
    out.reserve(triples_.size());
    auto sub = [&](const Node& n) { return n == from ? to : n; };
    for (const auto& t : triples_) out.push_back({sub(t.s), sub(t.p), sub(t.o)});
    return GraphPattern(std::move(out));
}

std::string GraphPattern::to_string() const {
    std::string out;
    for (const auto& t : triples_) {
        out += bgpl::to_string(t);
        out += '\n';
    }
    return out;
}

Variable fresh_variable(std::initializer_list<const GraphPattern*> gps, std::string_view prefix) {
    std::set<std::string> used;
    for (const auto* gp : gps) {
        for (const auto& v : gp->variables()) used.insert(v.name);
    }
    for (std::size_t i = 0;; ++i) {
        std::string name = std::string(prefix) + std::to_string(i);
        if (!used.count(name)) return Variable{name};
    }
}

Variable fresh_variable(const GraphPattern& gp, std::string_view prefix) { return fresh_variable({&gp}, prefix); }

namespace detail {

Node read_node(Lexer& lex, const Namespaces& ns, bool predicate) {
    Token t = lex.next();
    if (t.kind == TokenKind::Variable) return Variable{t.text};
    if (predicate && t.kind == TokenKind::Word && t.text == "a") return Term::iri(std::string(kRdfType));
    return read_term(lex, t, ns);
}

void read_triples(Lexer& lex, const Namespaces& ns, std::vector<TriplePattern>& out, TokenKind stop) {
    while (lex.peek().kind != stop) {
        if (lex.peek().kind == TokenKind::End) {
            const Token& e = lex.peek();
            throw ParseError("unexpected end of input in graph pattern", e.line, e.column);
        }
        Node s = read_node(lex, ns, false);
        while (true) {
            Node p = read_node(lex, ns, true);
            while (true) {
                Node o = read_node(lex, ns, false);
                TriplePattern tp{s, p, o};
                try {
                    validate(tp);
                } catch (const std::invalid_argument& e) {
                    throw ParseError(e.what(), lex.line(), lex.column());
                }
                out.push_back(std::move(tp));
                if (lex.peek().kind != TokenKind::Comma) break;
                lex.next();
            }
            if (lex.peek().kind != TokenKind::Semicolon) break;
            while (lex.peek().kind == TokenKind::Semicolon) lex.next();
            auto k = lex.peek().kind;
            if (k == TokenKind::Dot || k == stop) break;
        }
        if (lex.peek().kind == TokenKind::Dot) {
            lex.next();
        } else if (lex.peek().kind != stop) {
            const Token& e = lex.peek();
            throw ParseError("expected '.' between triple patterns", e.line, e.column);
        }
    }
}

void read_prologue(Lexer& lex, Namespaces& ns) {
    while (true) {
        const Token& t = lex.peek();
        bool at_form = t.kind == TokenKind::AtKeyword;
        bool is_prefix = at_form ? t.text == "prefix" : is_word(t, "PREFIX");
        bool is_base = at_form ? t.text == "base" : is_word(t, "BASE");
        if (!is_prefix && !is_base) return;
        lex.next();
        if (is_prefix) {
            Token name = lex.next();
            if (name.kind != TokenKind::PrefixedName || name.text.back() != ':') {
                throw ParseError("expected prefix name", name.line, name.column);
            }
            Token iri = lex.next();
            if (iri.kind != TokenKind::IriRef) throw ParseError("expected IRI", iri.line, iri.column);
            ns.prefixes[name.text.substr(0, name.text.size() - 1)] = ns.resolve(iri.text);
        } else {
            Token iri = lex.next();
            if (iri.kind != TokenKind::IriRef) throw ParseError("expected IRI", iri.line, iri.column);
            ns.base = ns.resolve(iri.text);
        }
        if (at_form) {
            Token dot = lex.next();
            if (dot.kind != TokenKind::Dot) throw ParseError("expected '.'", dot.line, dot.column);
        }
    }
}

}  // namespace detail

GraphPattern parse_pattern(std::string_view text, const Namespaces& ns_in) {
    Lexer lex(text);
    Namespaces ns = ns_in;
    detail::read_prologue(lex, ns);
    std::vector<TriplePattern> triples;
    detail::read_triples(lex, ns, triples, TokenKind::End);
    return GraphPattern(std::move(triples));
}

}  // namespace bgpl
