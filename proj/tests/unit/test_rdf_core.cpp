#include <gtest/gtest.h>
#include <zlib.h>

#include <algorithm>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "bgpl/triple_store.hpp"
#include "oracles.hpp"

using namespace bgpl;

namespace {

const std::string ex = "http://example.org/";
Term X(const std::string& local) { return Term::iri(ex + local); }

TripleStore capitals() { return load_file(std::string(BGPL_TEST_DATA) + "/capitals.ttl"); }

}  // namespace

TEST(Term, LiteralRejectsDatatypeAndLanguage) {
    EXPECT_THROW(Term::literal("x", ex + "dt", "en"), std::invalid_argument);
    EXPECT_NO_THROW(Term::literal("x", ex + "dt"));
    EXPECT_NO_THROW(Term::literal("x", {}, "en"));
}

TEST(Term, EqualityIsFieldwise) {
    EXPECT_EQ(Term::literal("x"), Term::literal("x"));
    EXPECT_NE(Term::literal("x"), Term::literal("x", {}, "en"));
    EXPECT_NE(Term::iri("a:b"), Term::blank("a:b"));
    EXPECT_NE(Term::iri("http://a/B"), Term::iri("http://a/b"));
}

TEST(Term, NTriplesForm) {
    EXPECT_EQ(to_ntriples(X("a")), "<http://example.org/a>");
    EXPECT_EQ(to_ntriples(Term::blank("b1")), "_:b1");
    EXPECT_EQ(to_ntriples(Term::literal("a\"b\n")), "\"a\\\"b\\n\"");
    EXPECT_EQ(to_ntriples(Term::literal("x", {}, "en")), "\"x\"@en");
    EXPECT_EQ(to_ntriples(Term::literal("1", ex + "dt")), "\"1\"^^<http://example.org/dt>");
}

TEST(Term, AbsoluteIri) {
    EXPECT_TRUE(is_absolute_iri("http://example.org/x"));
    EXPECT_TRUE(is_absolute_iri("urn:isbn:1"));
    EXPECT_FALSE(is_absolute_iri("relative/path"));
    EXPECT_FALSE(is_absolute_iri("http://a b"));
    EXPECT_FALSE(is_absolute_iri(""));
}

TEST(Term, TripleValidation) {
    EXPECT_THROW(validate_triple({Term::literal("x"), X("p"), X("o")}), std::invalid_argument);
    EXPECT_THROW(validate_triple({X("s"), Term::blank("p"), X("o")}), std::invalid_argument);
    EXPECT_NO_THROW(validate_triple({Term::blank("s"), X("p"), Term::literal("o")}));
}

TEST(Term, Fnv1aKnownVectors) {
    EXPECT_EQ(fnv1a(""), 0xcbf29ce484222325ULL);
    EXPECT_EQ(fnv1a("a"), 0xaf63dc4c8601ec8cULL);
    EXPECT_EQ(fnv1a("foobar"), 0x85944171f73967e8ULL);
}

TEST(Load, SingleStatementWithRelativeIris) {
    auto triples = parse_turtle("<s> <p> <o> .");
    ASSERT_EQ(triples.size(), 1u);
    EXPECT_EQ(triples[0].subject, Term::iri("file:///s"));
}

TEST(Load, EmptyInput) {
    std::istringstream in("");
    EXPECT_TRUE(load_ntriples(in).empty());
    std::istringstream comments("# only a comment\n\n");
    EXPECT_TRUE(load_ntriples(comments).empty());
}

TEST(Load, DuplicatesCollapse) {
    auto store = load_file(std::string(BGPL_TEST_DATA) + "/dups.nt");
    EXPECT_EQ(store.size(), 9u);
}

TEST(Load, LiteralForms) {
    auto t = parse_turtle(R"(<http://a/s> <http://a/p> "a\tbé\U0001F600" .
<http://a/s> <http://a/p> """multi
line""" .
<http://a/s> <http://a/p> 'single'@en-GB .)");
    ASSERT_EQ(t.size(), 3u);
    EXPECT_EQ(t[0].object.value, "a\tb\xc3\xa9\xf0\x9f\x98\x80");
    EXPECT_EQ(t[1].object.value, "multi\nline");
    EXPECT_EQ(t[2].object.language, "en-GB");
}

TEST(Load, TurtleSubset) {
    auto t = parse_turtle(R"(@prefix ex: <http://e/> .
PREFIX x: <http://x/>
ex:a a ex:C ; ex:p ex:b , ex:c ; x:n 42 , 1.5 , 2e3 , true .
ex:b ex:q [ ex:r ex:d ] .)");
    TripleStore store(t);
    EXPECT_EQ(store.match(Term::iri("http://e/a"), std::nullopt, std::nullopt).size(), 7u);
    auto typed = store.match(std::nullopt, Term::iri(std::string(kRdfType)), std::nullopt);
    ASSERT_EQ(typed.size(), 1u);
    auto nums = store.match(std::nullopt, Term::iri("http://x/n"), std::nullopt);
    std::set<std::string> dts;
    for (const auto& tr : nums) dts.insert(tr.object.datatype);
    EXPECT_EQ(dts, (std::set<std::string>{std::string(kXsd) + "integer", std::string(kXsd) + "decimal",
                                           std::string(kXsd) + "double", std::string(kXsd) + "boolean"}));
    auto anon = store.match(Term::iri("http://e/b"), Term::iri("http://e/q"), std::nullopt);
    ASSERT_EQ(anon.size(), 1u);
    EXPECT_TRUE(anon[0].object.is_blank());
    EXPECT_EQ(store.match(anon[0].object, std::nullopt, std::nullopt).size(), 1u);
}

TEST(Load, ErrorsCarryPosition) {
    try {
        parse_turtle("<http://a/s> <http://a/p> <http://a/o> .\n<http://a/s> <http://a/p> \"open");
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 2u);
        EXPECT_NE(std::string(e.what()).find("unterminated literal"), std::string::npos);
    }
    try {
        parse_turtle("<http://a/s> <http://a/p> <http://a b> .");
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_NE(std::string(e.what()).find("invalid IRI"), std::string::npos);
        EXPECT_EQ(e.line(), 1u);
    }
    EXPECT_THROW(parse_turtle("<http://a/s> <http://a/p> ."), ParseError);
    EXPECT_THROW(parse_turtle("\"lit\" <http://a/p> <http://a/o> ."), ParseError);
    EXPECT_THROW(parse_turtle("u:s <http://a/p> <http://a/o> ."), ParseError);
    EXPECT_THROW(parse_turtle("<http://a/s> <http://a/p> <http://a/o>"), ParseError);
}

TEST(Load, GzipInput) {
    std::string text = "<http://a/s> <http://a/p> <http://a/o> .\n";
    z_stream zs{};
    ASSERT_EQ(deflateInit2(&zs, Z_DEFAULT_COMPRESSION, Z_DEFLATED, 16 + MAX_WBITS, 8, Z_DEFAULT_STRATEGY), Z_OK);
    std::string out(256, '\0');
    zs.next_in = reinterpret_cast<Bytef*>(text.data());
    zs.avail_in = static_cast<uInt>(text.size());
    zs.next_out = reinterpret_cast<Bytef*>(out.data());
    zs.avail_out = static_cast<uInt>(out.size());
    ASSERT_EQ(deflate(&zs, Z_FINISH), Z_STREAM_END);
    out.resize(zs.total_out);
    deflateEnd(&zs);
    std::istringstream in(out);
    EXPECT_EQ(load_ntriples(in).size(), 1u);
}

TEST(Store, MatchFixture) {
    auto g = capitals();
    EXPECT_EQ(g.match(std::nullopt, std::nullopt, std::nullopt).size(), g.size());
    auto m = g.match(X("Berlin"), X("capitalOf"), std::nullopt);
    ASSERT_EQ(m.size(), 1u);
    EXPECT_EQ(m[0].object, X("Germany"));
    EXPECT_TRUE(g.match(Term::literal("3645000", std::string(kXsd) + "integer"), std::nullopt, std::nullopt).empty());
    EXPECT_TRUE(g.match(X("Nowhere"), std::nullopt, std::nullopt).empty());
}

TEST(Store, MatchIsInIdOrder) {
    auto g = capitals();
    auto all = g.match(std::nullopt, X("capitalOf"), std::nullopt);
    std::vector<Triple> sorted = all;
    std::sort(sorted.begin(), sorted.end());
    EXPECT_EQ(all, sorted);
}

TEST(Store, Degree) {
    TripleStore g({{X("h"), X("p"), X("a")},
                   {X("h"), X("p"), X("b")},
                   {X("h"), X("q"), X("c")},
                   {X("d"), X("p"), X("h")},
                   {X("e"), X("p"), X("h")}});
    EXPECT_EQ(g.degree(X("h"), Direction::Out), 3u);
    EXPECT_EQ(g.degree(X("h"), Direction::In), 2u);
    EXPECT_EQ(g.degree(X("h"), Direction::Bidi), 5u);
    EXPECT_EQ(g.degree(X("isolated"), Direction::Bidi), 0u);

    TripleStore loop({{X("x"), X("p"), X("x")}});
    EXPECT_EQ(loop.degree(X("x"), Direction::In), 1u);
    EXPECT_EQ(loop.degree(X("x"), Direction::Out), 1u);
    EXPECT_EQ(loop.degree(X("x"), Direction::Bidi), 2u);
}

TEST(Store, RejectsInvalidTriples) {
    EXPECT_THROW(TripleStore({{Term::literal("x"), X("p"), X("o")}}), std::invalid_argument);
}

TEST(StoreProperty, MatchEqualsFilteringForAllBindingCombinations) {
    std::mt19937_64 rng(7);
    for (int round = 0; round < 30; ++round) {
        auto triples = oracle::random_triples(rng, 8, 3, 60);
        TripleStore g(triples);
        std::set<Triple> facts(triples.begin(), triples.end());
        EXPECT_EQ(g.spo_size(), facts.size());
        EXPECT_EQ(g.pos_size(), facts.size());
        EXPECT_EQ(g.osp_size(), facts.size());
        for (int probe = 0; probe < 10; ++probe) {
            const Triple& ref = triples[rng() % triples.size()];
            for (int mask = 0; mask < 8; ++mask) {
                std::optional<Term> s, p, o;
                if (mask & 1) s = ref.subject;
                if (mask & 2) p = ref.predicate;
                if (mask & 4) o = ref.object;
                std::vector<Triple> expected;
                for (const auto& t : facts) {
                    if ((!s || t.subject == *s) && (!p || t.predicate == *p) && (!o || t.object == *o)) {
                        expected.push_back(t);
                    }
                }
                auto got = g.match(s, p, o);
                std::sort(got.begin(), got.end());
                EXPECT_EQ(got, expected) << "mask " << mask;
            }
        }
    }
}

TEST(StoreProperty, RoundTrip) {
    std::mt19937_64 rng(11);
    auto check = [](const TripleStore& g) {
        std::ostringstream out;
        write_ntriples(g, out);
        std::istringstream in(out.str());
        auto back = load_ntriples(in);
        EXPECT_EQ(back.to_triples(), g.to_triples());
    };
    check(capitals());
    check(load_file(std::string(BGPL_TEST_DATA) + "/dups.nt"));
    for (int i = 0; i < 10; ++i) check(TripleStore(oracle::random_triples(rng, 10, 4, 50)));
}

TEST(StoreProperty, IdsIndependentOfInputOrder) {
    std::mt19937_64 rng(3);
    auto triples = oracle::random_triples(rng, 10, 3, 40);
    TripleStore a(triples);
    std::shuffle(triples.begin(), triples.end(), rng);
    TripleStore b(triples);
    ASSERT_EQ(a.term_count(), b.term_count());
    for (TermId i = 0; i < a.term_count(); ++i) EXPECT_EQ(a.term(i), b.term(i));
}
