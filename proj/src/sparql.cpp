#include "bgpl/sparql.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace bgpl {

namespace {

void write_values(std::string& out, const ValuesTable& vt) {
    out += "  VALUES (";
    for (std::size_t i = 0; i < vt.vars.size(); ++i) {
        if (i) out += ' ';
        out += "?" + vt.vars[i].name;
    }
    out += ") {\n";
    for (const auto& row : vt.rows) {
        out += "    (";
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ' ';
            out += to_ntriples(row[i]);
        }
        out += ")\n";
    }
    out += "  }\n";
}

void write_body(std::string& out, const GraphPattern& gp, const std::optional<ValuesTable>& values) {
    out += "WHERE {\n";
    if (values) write_values(out, *values);
    for (const auto& t : gp) out += "  " + to_string(t) + "\n";
    out += "}";
}

bool is_word(const Token& t, std::string_view w) {
    if (t.kind != TokenKind::Word || t.text.size() != w.size()) return false;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (std::toupper(static_cast<unsigned char>(t.text[i])) != w[i]) return false;
    }
    return true;
}

[[noreturn]] void fail(const Token& t, const std::string& msg) { throw ParseError(msg, t.line, t.column); }

ValuesTable read_values(Lexer& lex, const Namespaces& ns) {
    ValuesTable vt;
    Token t = lex.next();
    bool multi = t.kind == TokenKind::LParen;
    if (multi) {
        while (lex.peek().kind == TokenKind::Variable) vt.vars.push_back({lex.next().text});
        Token close = lex.next();
        if (close.kind != TokenKind::RParen) fail(close, "expected ')' after VALUES variables");
    } else if (t.kind == TokenKind::Variable) {
        vt.vars.push_back({t.text});
    } else {
        fail(t, "expected VALUES variables");
    }
    Token open = lex.next();
    if (open.kind != TokenKind::LBrace) fail(open, "expected '{' in VALUES");
    while (lex.peek().kind != TokenKind::RBrace) {
        std::vector<Term> row;
        if (multi) {
            Token lp = lex.next();
            if (lp.kind != TokenKind::LParen) fail(lp, "expected '(' for VALUES row");
            while (lex.peek().kind != TokenKind::RParen) {
                Token v = lex.next();
                if (is_word(v, "UNDEF")) fail(v, "UNDEF is not supported");
                row.push_back(read_term(lex, v, ns));
            }
            lex.next();
        } else {
            Token v = lex.next();
            if (is_word(v, "UNDEF")) fail(v, "UNDEF is not supported");
            row.push_back(read_term(lex, v, ns));
        }
        if (row.size() != vt.vars.size()) fail(lex.peek(), "VALUES row arity mismatch");
        vt.rows.push_back(std::move(row));
    }
    lex.next();
    return vt;
}

}  // namespace

std::string to_sparql(const SelectQuery& q) {
    std::string out;
    if (q.projection.empty()) {
        out = "ASK ";
    } else {
        out = "SELECT DISTINCT";
        for (const auto& v : q.projection) out += " ?" + v.name;
        out += "\n";
    }
    write_body(out, q.pattern, q.values);
    if (q.limit && !q.projection.empty()) out += "\nLIMIT " + std::to_string(*q.limit);
    out += "\n";
    return out;
}

std::string to_sparql_select(const GraphPattern& gp) {
    SelectQuery q;
    q.pattern = gp;
    q.projection = {kSource, kTarget};
    return to_sparql(q);
}

std::string to_sparql_ask(const GraphPattern& gp, const Binding& binding) {
    SelectQuery q;
    q.pattern = gp;
    if (!binding.empty()) {
        ValuesTable vt;
        vt.rows.emplace_back();
        for (const auto& [v, t] : binding) {
            vt.vars.push_back(v);
            vt.rows.back().push_back(t);
        }
        q.values = std::move(vt);
    }
    return to_sparql(q);
}

ParsedQuery parse_sparql(std::string_view text) {
    Lexer lex(text);
    Namespaces ns;
    detail::read_prologue(lex, ns);
    ParsedQuery pq;
    Token head = lex.next();
    bool select_all = false;
    if (is_word(head, "ASK")) {
        pq.is_ask = true;
    } else if (is_word(head, "SELECT")) {
        if (is_word(lex.peek(), "DISTINCT") || is_word(lex.peek(), "REDUCED")) lex.next();
        if (lex.peek().kind == TokenKind::Star) {
            lex.next();
            select_all = true;
        } else {
            while (lex.peek().kind == TokenKind::Variable) pq.query.projection.push_back({lex.next().text});
            if (pq.query.projection.empty()) fail(lex.peek(), "expected projection variables");
        }
    } else {
        fail(head, "expected SELECT or ASK");
    }
    if (is_word(lex.peek(), "WHERE")) lex.next();
    Token open = lex.next();
    if (open.kind != TokenKind::LBrace) fail(open, "expected '{'");

    std::vector<TriplePattern> triples;
    while (lex.peek().kind != TokenKind::RBrace) {
        if (is_word(lex.peek(), "VALUES")) {
            Token kw = lex.next();
            if (pq.query.values) fail(kw, "only one VALUES block is supported");
            pq.query.values = read_values(lex, ns);
            if (lex.peek().kind == TokenKind::Dot) lex.next();
            continue;
        }
        // Read one triples block up to the next VALUES, '}' or end.
        std::vector<TriplePattern> block;
        Node s = detail::read_node(lex, ns, false);
        while (true) {
            Node p = detail::read_node(lex, ns, true);
            while (true) {
                Node o = detail::read_node(lex, ns, false);
                block.push_back({s, p, o});
                if (lex.peek().kind != TokenKind::Comma) break;
                lex.next();
            }
            if (lex.peek().kind != TokenKind::Semicolon) break;
            while (lex.peek().kind == TokenKind::Semicolon) lex.next();
            if (lex.peek().kind == TokenKind::Dot || lex.peek().kind == TokenKind::RBrace) break;
        }
        if (lex.peek().kind == TokenKind::Dot) {
            lex.next();
        } else if (lex.peek().kind != TokenKind::RBrace && !is_word(lex.peek(), "VALUES")) {
            fail(lex.peek(), "expected '.' between triple patterns");
        }
        triples.insert(triples.end(), block.begin(), block.end());
    }
    lex.next();
    try {
        pq.query.pattern = GraphPattern(std::move(triples));
    } catch (const std::invalid_argument& e) {
        throw ParseError(e.what(), open.line, open.column);
    }

    if (is_word(lex.peek(), "LIMIT")) {
        lex.next();
        Token n = lex.next();
        if (n.kind != TokenKind::Integer) fail(n, "expected integer after LIMIT");
        pq.query.limit = std::stoull(n.text);
    }
    Token end = lex.next();
    if (end.kind != TokenKind::End) fail(end, "unexpected trailing input");

    if (select_all) {
        std::set<Variable> vars;
        for (const auto& v : pq.query.pattern.variables()) vars.insert(v);
        if (pq.query.values) vars.insert(pq.query.values->vars.begin(), pq.query.values->vars.end());
        pq.query.projection.assign(vars.begin(), vars.end());
    }
    return pq;
}

}  // namespace bgpl
