#pragma once

#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>

#include "bgpl/term.hpp"

namespace bgpl {

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& message, std::size_t line, std::size_t column);

    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

enum class TokenKind {
    IriRef,        // text = IRI without brackets, escapes resolved
    PrefixedName,  // text = "prefix:local"
    BlankLabel,    // text = label without "_:"
    Variable,      // text = name without "?" / "$"
    String,        // text = unescaped lexical form
    LangTag,       // text = tag without "@"
    AtKeyword,     // @prefix / @base, text = word without "@"
    DatatypeMark,  // ^^
    Integer,
    Decimal,
    Double,
    Word,          // bare keyword: a, true, PREFIX, SELECT, ...
    Dot,
    Semicolon,
    Comma,
    LParen,
    RParen,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Star,
    End,
};

struct Token {
    TokenKind kind = TokenKind::End;
    std::string text;
    std::size_t line = 1;
    std::size_t column = 1;
};

/// Tokenizer shared by the Turtle reader, the pattern reader and the SPARQL subset parser.
class Lexer {
public:
    explicit Lexer(std::string_view input) : src_(input) {}

    Token next();
    const Token& peek();

    std::size_t line() const { return line_; }
    std::size_t column() const { return col_; }

private:
    Token lex();
    void skip_space_and_comments();
    char cur() const { return pos_ < src_.size() ? src_[pos_] : '\0'; }
    char at(std::size_t off) const { return pos_ + off < src_.size() ? src_[pos_ + off] : '\0'; }
    void advance(std::size_t n = 1);
    [[noreturn]] void fail(const std::string& msg) const;
    std::string read_iri();
    std::string read_string();
    void read_unicode_escape(std::string& out, int digits);
    Token read_number(Token tok);
    std::string read_name_chars(bool allow_colon);

    std::string_view src_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t col_ = 1;
    bool peeked_ = false;
    Token peek_tok_;
};

/// Prefix table plus base IRI for resolving IRI references and prefixed names.
struct Namespaces {
    std::map<std::string, std::string> prefixes;
    std::string base = "file:///";

    /// Resolves `<rel>` against the base by concatenation; absolute IRIs pass through.
    std::string resolve(const std::string& iri) const;
    /// Expands "p:local"; throws std::out_of_range on an undeclared prefix.
    std::string expand(const std::string& pname) const;
};

/// Interprets a token as an RDF term (IRI, prefixed name, blank node, literal, number, boolean).
/// Literal tokens consume an optional trailing language tag or datatype from the lexer.
Term read_term(Lexer& lex, const Token& tok, const Namespaces& ns);

inline constexpr std::string_view kXsd = "http://www.w3.org/2001/XMLSchema#";
inline constexpr std::string_view kRdfType = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";

}  // namespace bgpl
