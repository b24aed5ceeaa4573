#include "bgpl/triple_store.hpp"

#include <zlib.h>

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <iterator>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "bgpl/lexer.hpp"

namespace bgpl {

namespace {

using Key = std::array<TermId, 3>;

Key spo_key(const IdTriple& t) { return {t.s, t.p, t.o}; }
Key pos_key(const IdTriple& t) { return {t.p, t.o, t.s}; }
Key osp_key(const IdTriple& t) { return {t.o, t.s, t.p}; }

template <typename KeyFn>
std::span<const IdTriple> prefix_range(const std::vector<IdTriple>& index, KeyFn key, Key prefix,
                                       std::size_t len) {
    auto less = [&](const Key& a, const Key& b) {
        for (std::size_t i = 0; i < len; ++i) {
            if (a[i] != b[i]) return a[i] < b[i];
        }
        return false;
    };
    auto lo = std::partition_point(index.begin(), index.end(),
                                   [&](const IdTriple& t) { return less(key(t), prefix); });
    auto hi = std::partition_point(lo, index.end(), [&](const IdTriple& t) { return !less(prefix, key(t)); });
    return {std::to_address(lo), static_cast<std::size_t>(hi - lo)};
}

}  // namespace

TripleStore::TripleStore(std::vector<Triple> triples) {
    for (const auto& t : triples) validate_triple(t);

    std::vector<Term> terms;
    terms.reserve(triples.size() * 3);
    for (const auto& t : triples) {
        terms.push_back(t.subject);
        terms.push_back(t.predicate);
        terms.push_back(t.object);
    }
    std::sort(terms.begin(), terms.end());
    terms.erase(std::unique(terms.begin(), terms.end()), terms.end());
    terms_ = std::move(terms);
    ids_.reserve(terms_.size());
    for (TermId i = 0; i < terms_.size(); ++i) ids_.emplace(terms_[i], i);

    spo_.reserve(triples.size());
    for (const auto& t : triples) spo_.push_back({ids_.at(t.subject), ids_.at(t.predicate), ids_.at(t.object)});
    std::sort(spo_.begin(), spo_.end());
    spo_.erase(std::unique(spo_.begin(), spo_.end()), spo_.end());

    pos_ = spo_;
    std::sort(pos_.begin(), pos_.end(), [](const IdTriple& a, const IdTriple& b) { return pos_key(a) < pos_key(b); });
    osp_ = spo_;
    std::sort(osp_.begin(), osp_.end(), [](const IdTriple& a, const IdTriple& b) { return osp_key(a) < osp_key(b); });

    auto count_runs = [](const std::vector<IdTriple>& index, auto key) {
        std::size_t n = 0;
        for (std::size_t i = 0; i < index.size(); ++i) n += (i == 0 || key(index[i]) != key(index[i - 1]));
        return n;
    };
    distinct_ = {count_runs(spo_, [](const IdTriple& t) { return t.s; }),
                 count_runs(pos_, [](const IdTriple& t) { return t.p; }),
                 count_runs(osp_, [](const IdTriple& t) { return t.o; })};
}

std::optional<TermId> TripleStore::lookup(const Term& t) const {
    auto it = ids_.find(t);
    if (it == ids_.end()) return std::nullopt;
    return it->second;
}

std::span<const IdTriple> TripleStore::match_ids(TermId s, TermId p, TermId o) const {
    const bool bs = s != kUnbound, bp = p != kUnbound, bo = o != kUnbound;
    if (bs) {
        if (bo && !bp) return prefix_range(osp_, osp_key, {o, s, 0}, 2);
        return prefix_range(spo_, spo_key, {s, p, o}, bp ? (bo ? 3 : 2) : 1);
    }
    if (bp) return prefix_range(pos_, pos_key, {p, o, 0}, bo ? 2 : 1);
    if (bo) return prefix_range(osp_, osp_key, {o, 0, 0}, 1);
    return spo_;
}

std::vector<Triple> TripleStore::match(const std::optional<Term>& s, const std::optional<Term>& p,
                                       const std::optional<Term>& o) const {
    auto resolve = [&](const std::optional<Term>& t, TermId& id) {
        if (!t) {
            id = kUnbound;
            return true;
        }
        auto found = lookup(*t);
        if (!found) return false;
        id = *found;
        return true;
    };
    TermId si, pi, oi;
    if (!resolve(s, si) || !resolve(p, pi) || !resolve(o, oi)) return {};
    auto range = match_ids(si, pi, oi);
    std::vector<IdTriple> ids(range.begin(), range.end());
    std::sort(ids.begin(), ids.end());
    std::vector<Triple> out;
    out.reserve(ids.size());
    for (const auto& t : ids) out.push_back(decode(t));
    return out;
}

std::size_t TripleStore::degree(TermId node, Direction dir) const {
    std::size_t in = match_ids(kUnbound, kUnbound, node).size();
    std::size_t out = match_ids(node, kUnbound, kUnbound).size();
    switch (dir) {
        case Direction::In: return in;
        case Direction::Out: return out;
        case Direction::Bidi: return in + out;
    }
    return 0;
}

std::size_t TripleStore::degree(const Term& node, Direction dir) const {
    auto id = lookup(node);
    return id ? degree(*id, dir) : 0;
}

std::vector<Triple> TripleStore::to_triples() const {
    std::vector<Triple> out;
    out.reserve(spo_.size());
    for (const auto& t : spo_) out.push_back(decode(t));
    return out;
}

// --- Turtle subset reader -------------------------------------------------

namespace {

class TurtleReader {
public:
    TurtleReader(std::string_view text, const ParseOptions& opts) : lex_(text) { ns_.base = opts.base; }

    std::vector<Triple> run() {
        while (lex_.peek().kind != TokenKind::End) statement();
        return std::move(out_);
    }

private:
    [[noreturn]] static void fail(const Token& t, const std::string& msg) { throw ParseError(msg, t.line, t.column); }

    Token expect(TokenKind k, const char* what) {
        Token t = lex_.next();
        if (t.kind != k) fail(t, std::string("expected ") + what);
        return t;
    }

    static bool is_word(const Token& t, std::string_view w) {
        if (t.kind != TokenKind::Word || t.text.size() != w.size()) return false;
        for (std::size_t i = 0; i < w.size(); ++i) {
            if (std::toupper(static_cast<unsigned char>(t.text[i])) != w[i]) return false;
        }
        return true;
    }

    void statement() {
        const Token& t = lex_.peek();
        if (t.kind == TokenKind::AtKeyword) {
            Token kw = lex_.next();
            directive(kw.text == "prefix");
            expect(TokenKind::Dot, "'.' after directive");
            return;
        }
        if (is_word(t, "PREFIX") || is_word(t, "BASE")) {
            bool prefix = is_word(t, "PREFIX");
            lex_.next();
            directive(prefix);
            return;
        }
        Term subject = subject_term();
        predicate_object_list(subject);
        expect(TokenKind::Dot, "'.' at end of statement");
    }

    void directive(bool prefix) {
        if (prefix) {
            Token name = expect(TokenKind::PrefixedName, "prefix name");
            if (name.text.back() != ':') fail(name, "prefix name must end with ':'");
            Token iri = expect(TokenKind::IriRef, "IRI");
            ns_.prefixes[name.text.substr(0, name.text.size() - 1)] = ns_.resolve(iri.text);
        } else {
            Token iri = expect(TokenKind::IriRef, "IRI");
            ns_.base = ns_.resolve(iri.text);
        }
    }

    Term subject_term() {
        Token t = lex_.next();
        if (t.kind == TokenKind::LBracket) return anon_node();
        if (t.kind == TokenKind::IriRef || t.kind == TokenKind::PrefixedName || t.kind == TokenKind::BlankLabel) {
            return read_term(lex_, t, ns_);
        }
        fail(t, "expected subject");
    }

    Term anon_node() {
        Term node = Term::blank("genid" + std::to_string(++anon_counter_));
        if (lex_.peek().kind != TokenKind::RBracket) predicate_object_list(node);
        expect(TokenKind::RBracket, "']'");
        return node;
    }

    void predicate_object_list(const Term& subject) {
        while (true) {
            Token pt = lex_.next();
            Term predicate;
            if (pt.kind == TokenKind::Word && pt.text == "a") {
                predicate = Term::iri(std::string(kRdfType));
            } else if (pt.kind == TokenKind::IriRef || pt.kind == TokenKind::PrefixedName) {
                predicate = read_term(lex_, pt, ns_);
            } else {
                fail(pt, "expected predicate");
            }
            while (true) {
                Token ot = lex_.next();
                Term object = ot.kind == TokenKind::LBracket ? anon_node() : read_term(lex_, ot, ns_);
                out_.push_back({subject, predicate, std::move(object)});
                if (lex_.peek().kind != TokenKind::Comma) break;
                lex_.next();
            }
            if (lex_.peek().kind != TokenKind::Semicolon) return;
            while (lex_.peek().kind == TokenKind::Semicolon) lex_.next();
            auto k = lex_.peek().kind;
            if (k == TokenKind::Dot || k == TokenKind::RBracket) return;
        }
    }

    Lexer lex_;
    Namespaces ns_;
    std::vector<Triple> out_;
    std::size_t anon_counter_ = 0;
};

}  // namespace

std::vector<Triple> parse_turtle(std::string_view text, const ParseOptions& opts) {
    return TurtleReader(text, opts).run();
}

std::string maybe_gunzip(std::string bytes) {
    if (bytes.size() < 2 || static_cast<unsigned char>(bytes[0]) != 0x1f ||
        static_cast<unsigned char>(bytes[1]) != 0x8b) {
        return bytes;
    }
    z_stream zs{};
    if (inflateInit2(&zs, 16 + MAX_WBITS) != Z_OK) throw std::runtime_error("zlib init failed");
    zs.next_in = reinterpret_cast<Bytef*>(bytes.data());
    zs.avail_in = static_cast<uInt>(bytes.size());
    std::string out;
    char buf[1 << 15];
    int rc = Z_OK;
    while (rc != Z_STREAM_END) {
        zs.next_out = reinterpret_cast<Bytef*>(buf);
        zs.avail_out = sizeof(buf);
        rc = inflate(&zs, Z_NO_FLUSH);
        if (rc != Z_OK && rc != Z_STREAM_END) {
            inflateEnd(&zs);
            throw std::runtime_error("corrupt gzip input");
        }
        out.append(buf, sizeof(buf) - zs.avail_out);
        if (rc != Z_STREAM_END && zs.avail_in == 0 && zs.avail_out != 0) {
            inflateEnd(&zs);
            throw std::runtime_error("truncated gzip input");
        }
    }
    inflateEnd(&zs);
    return out;
}

TripleStore load_ntriples(std::istream& in, const ParseOptions& opts) {
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    bytes = maybe_gunzip(std::move(bytes));
    return TripleStore(parse_turtle(bytes, opts));
}

TripleStore load_file(const std::filesystem::path& path, const ParseOptions& opts) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    return load_ntriples(in, opts);
}

void write_ntriples(const TripleStore& store, std::ostream& out) {
    for (const auto& t : store.triples()) out << to_ntriples(store.decode(t)) << '\n';
}

}  // namespace bgpl
