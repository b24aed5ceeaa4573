#include "bgpl/lexer.hpp"

#include <cctype>

namespace bgpl {

namespace {

std::string position_message(const std::string& message, std::size_t line, std::size_t column) {
    return "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message;
}

void append_utf8(std::string& out, unsigned long cp) {
    if (cp < 0x80) {
        out += static_cast<char>(cp);
    } else if (cp < 0x800) {
        out += static_cast<char>(0xC0 | (cp >> 6));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else if (cp < 0x10000) {
        out += static_cast<char>(0xE0 | (cp >> 12));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else {
        out += static_cast<char>(0xF0 | (cp >> 18));
        out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    }
}

bool is_name_char(char c) {
    auto u = static_cast<unsigned char>(c);
    return std::isalnum(u) || c == '_' || c == '-' || c == '.' || c == ':' || c == '%' || u >= 0x80;
}

bool is_local_escape(char c) {
    static constexpr std::string_view kEsc = "_~.-!$&'()*+,;=/?#@%";
    return kEsc.find(c) != std::string_view::npos;
}

}  // namespace

ParseError::ParseError(const std::string& message, std::size_t line, std::size_t column)
    : std::runtime_error(position_message(message, line, column)), line_(line), column_(column) {}

void Lexer::advance(std::size_t n) {
    for (std::size_t i = 0; i < n && pos_ < src_.size(); ++i) {
        if (src_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }
}

void Lexer::fail(const std::string& msg) const { throw ParseError(msg, line_, col_); }

void Lexer::skip_space_and_comments() {
    while (pos_ < src_.size()) {
        char c = cur();
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
            advance();
        } else if (c == '#') {
            while (pos_ < src_.size() && cur() != '\n') advance();
        } else {
            break;
        }
    }
}

const Token& Lexer::peek() {
    if (!peeked_) {
        peek_tok_ = lex();
        peeked_ = true;
    }
    return peek_tok_;
}

Token Lexer::next() {
    if (peeked_) {
        peeked_ = false;
        return std::move(peek_tok_);
    }
    return lex();
}

void Lexer::read_unicode_escape(std::string& out, int digits) {
    unsigned long cp = 0;
    for (int i = 0; i < digits; ++i) {
        char h = cur();
        if (!std::isxdigit(static_cast<unsigned char>(h))) fail("invalid unicode escape");
        cp = cp * 16 + static_cast<unsigned long>(std::isdigit(static_cast<unsigned char>(h))
                                                      ? h - '0'
                                                      : (std::tolower(static_cast<unsigned char>(h)) - 'a' + 10));
        advance();
    }
    append_utf8(out, cp);
}

std::string Lexer::read_iri() {
    std::size_t l = line_, c = col_;
    advance();  // '<'
    std::string out;
    while (true) {
        if (pos_ >= src_.size()) throw ParseError("unterminated IRI", l, c);
        char ch = cur();
        if (ch == '>') {
            advance();
            break;
        }
        if (ch == '\\') {
            advance();
            char e = cur();
            advance();
            if (e == 'u') {
                read_unicode_escape(out, 4);
            } else if (e == 'U') {
                read_unicode_escape(out, 8);
            } else {
                fail("invalid escape in IRI");
            }
            continue;
        }
        if (static_cast<unsigned char>(ch) <= 0x20 || ch == '<' || ch == '"' || ch == '{' || ch == '}' ||
            ch == '|' || ch == '^' || ch == '`') {
            fail("invalid IRI: illegal character");
        }
        out += ch;
        advance();
    }
    return out;
}

std::string Lexer::read_string() {
    std::size_t l = line_, c = col_;
    char q = cur();
    bool long_form = at(1) == q && at(2) == q;
    advance(long_form ? 3 : 1);
    std::string out;
    while (true) {
        if (pos_ >= src_.size()) throw ParseError("unterminated literal", l, c);
        char ch = cur();
        if (long_form) {
            if (ch == q && at(1) == q && at(2) == q) {
                advance(3);
                break;
            }
        } else if (ch == q) {
            advance();
            break;
        } else if (ch == '\n' || ch == '\r') {
            throw ParseError("unterminated literal", l, c);
        }
        if (ch == '\\') {
            advance();
            char e = cur();
            advance();
            switch (e) {
                case 't': out += '\t'; break;
                case 'b': out += '\b'; break;
                case 'n': out += '\n'; break;
                case 'r': out += '\r'; break;
                case 'f': out += '\f'; break;
                case '"': out += '"'; break;
                case '\'': out += '\''; break;
                case '\\': out += '\\'; break;
                case 'u': read_unicode_escape(out, 4); break;
                case 'U': read_unicode_escape(out, 8); break;
                default: fail("invalid string escape");
            }
            continue;
        }
        out += ch;
        advance();
    }
    return out;
}

std::string Lexer::read_name_chars(bool allow_colon) {
    std::string out;
    while (pos_ < src_.size()) {
        char ch = cur();
        if (ch == '\\' && is_local_escape(at(1))) {
            out += at(1);
            advance(2);
            continue;
        }
        if (!is_name_char(ch) || (!allow_colon && ch == ':')) break;
        out += ch;
        advance();
    }
    // A trailing '.' terminates the statement rather than belonging to the name.
    while (!out.empty() && out.back() == '.') {
        out.pop_back();
        --pos_;
        --col_;
    }
    return out;
}

Token Lexer::read_number(Token tok) {
    std::string text;
    if (cur() == '+' || cur() == '-') {
        text += cur();
        advance();
    }
    bool frac = false, expo = false;
    while (std::isdigit(static_cast<unsigned char>(cur()))) {
        text += cur();
        advance();
    }
    if (cur() == '.' && std::isdigit(static_cast<unsigned char>(at(1)))) {
        frac = true;
        text += cur();
        advance();
        while (std::isdigit(static_cast<unsigned char>(cur()))) {
            text += cur();
            advance();
        }
    }
    if ((cur() == 'e' || cur() == 'E') &&
        (std::isdigit(static_cast<unsigned char>(at(1))) ||
         ((at(1) == '+' || at(1) == '-') && std::isdigit(static_cast<unsigned char>(at(2)))))) {
        expo = true;
        text += cur();
        advance();
        if (cur() == '+' || cur() == '-') {
            text += cur();
            advance();
        }
        while (std::isdigit(static_cast<unsigned char>(cur()))) {
            text += cur();
            advance();
        }
    }
    tok.kind = expo ? TokenKind::Double : (frac ? TokenKind::Decimal : TokenKind::Integer);
    tok.text = std::move(text);
    return tok;
}

Token Lexer::lex() {
    skip_space_and_comments();
    Token tok;
    tok.line = line_;
    tok.column = col_;
    if (pos_ >= src_.size()) {
        tok.kind = TokenKind::End;
        return tok;
    }
    char c = cur();
    auto single = [&](TokenKind k) {
        tok.kind = k;
        tok.text = std::string(1, c);
        advance();
        return tok;
    };
    switch (c) {
        case '<':
            tok.kind = TokenKind::IriRef;
            tok.text = read_iri();
            return tok;
        case '"':
        case '\'':
            tok.kind = TokenKind::String;
            tok.text = read_string();
            return tok;
        case '.': return single(TokenKind::Dot);
        case ';': return single(TokenKind::Semicolon);
        case ',': return single(TokenKind::Comma);
        case '(': return single(TokenKind::LParen);
        case ')': return single(TokenKind::RParen);
        case '{': return single(TokenKind::LBrace);
        case '}': return single(TokenKind::RBrace);
        case '[': return single(TokenKind::LBracket);
        case ']': return single(TokenKind::RBracket);
        case '*': return single(TokenKind::Star);
        case '^':
            if (at(1) != '^') fail("expected '^^'");
            advance(2);
            tok.kind = TokenKind::DatatypeMark;
            tok.text = "^^";
            return tok;
        case '?':
        case '$': {
            advance();
            std::string name;
            while (std::isalnum(static_cast<unsigned char>(cur())) || cur() == '_' ||
                   static_cast<unsigned char>(cur()) >= 0x80) {
                name += cur();
                advance();
            }
            if (name.empty()) fail("empty variable name");
            tok.kind = TokenKind::Variable;
            tok.text = std::move(name);
            return tok;
        }
        case '@': {
            advance();
            std::string word;
            while (std::isalnum(static_cast<unsigned char>(cur())) || cur() == '-') {
                word += cur();
                advance();
            }
            if (word.empty()) fail("expected language tag or directive after '@'");
            tok.kind = (word == "prefix" || word == "base") ? TokenKind::AtKeyword : TokenKind::LangTag;
            tok.text = std::move(word);
            return tok;
        }
        default: break;
    }
    if (c == '_' && at(1) == ':') {
        advance(2);
        tok.kind = TokenKind::BlankLabel;
        tok.text = read_name_chars(false);
        if (tok.text.empty()) fail("empty blank node label");
        return tok;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        ((c == '+' || c == '-') && std::isdigit(static_cast<unsigned char>(at(1))))) {
        return read_number(std::move(tok));
    }
    if (is_name_char(c)) {
        tok.text = read_name_chars(true);
        if (tok.text.empty()) fail("unexpected character");
        tok.kind = tok.text.find(':') != std::string::npos ? TokenKind::PrefixedName : TokenKind::Word;
        return tok;
    }
    fail(std::string("unexpected character '") + c + "'");
}

std::string Namespaces::resolve(const std::string& iri) const {
    if (is_absolute_iri(iri)) return iri;
    return base + iri;
}

std::string Namespaces::expand(const std::string& pname) const {
    auto colon = pname.find(':');
    auto it = prefixes.find(pname.substr(0, colon));
    if (it == prefixes.end()) throw std::out_of_range("undeclared prefix '" + pname.substr(0, colon) + "'");
    return it->second + pname.substr(colon + 1);
}

Term read_term(Lexer& lex, const Token& tok, const Namespaces& ns) {
    auto iri_from = [&](const Token& t) -> std::string {
        std::string iri;
        if (t.kind == TokenKind::IriRef) {
            iri = ns.resolve(t.text);
        } else {
            try {
                iri = ns.expand(t.text);
            } catch (const std::out_of_range& e) {
                throw ParseError(e.what(), t.line, t.column);
            }
        }
        if (!is_absolute_iri(iri)) throw ParseError("invalid IRI '" + iri + "'", t.line, t.column);
        return iri;
    };
    switch (tok.kind) {
        case TokenKind::IriRef:
        case TokenKind::PrefixedName:
            return Term::iri(iri_from(tok));
        case TokenKind::BlankLabel:
            return Term::blank(tok.text);
        case TokenKind::String: {
            const Token& nt = lex.peek();
            if (nt.kind == TokenKind::LangTag) {
                std::string tag = lex.next().text;
                return Term::literal(tok.text, {}, tag);
            }
            if (nt.kind == TokenKind::DatatypeMark) {
                lex.next();
                Token dt = lex.next();
                if (dt.kind != TokenKind::IriRef && dt.kind != TokenKind::PrefixedName) {
                    throw ParseError("expected datatype IRI", dt.line, dt.column);
                }
                return Term::literal(tok.text, iri_from(dt));
            }
            return Term::literal(tok.text);
        }
        case TokenKind::Integer: return Term::literal(tok.text, std::string(kXsd) + "integer");
        case TokenKind::Decimal: return Term::literal(tok.text, std::string(kXsd) + "decimal");
        case TokenKind::Double: return Term::literal(tok.text, std::string(kXsd) + "double");
        case TokenKind::Word:
            if (tok.text == "true" || tok.text == "false") {
                return Term::literal(tok.text, std::string(kXsd) + "boolean");
            }
            break;
        default: break;
    }
    throw ParseError("expected an RDF term, got '" + tok.text + "'", tok.line, tok.column);
}

}  // namespace bgpl
