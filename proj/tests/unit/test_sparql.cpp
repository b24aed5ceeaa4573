#include <gtest/gtest.h>

#include <random>

#include "bgpl/sparql.hpp"
#include "oracles.hpp"

using namespace bgpl;

namespace {
const std::string ex = "http://example.org/";
Term X(const std::string& local) { return Term::iri(ex + local); }
}  // namespace

TEST(Sparql, SerializeSelect) {
    Namespaces n;
    n.prefixes[""] = ex;
    auto gp = parse_pattern("?source :capitalOf ?target", n);
    EXPECT_EQ(to_sparql_select(gp),
              "SELECT DISTINCT ?source ?target\nWHERE {\n  ?source <http://example.org/capitalOf> ?target .\n}\n");
}

TEST(Sparql, SerializeAskWithBinding) {
    auto gp = parse_pattern("?source <http://example.org/p> ?target");
    auto text = to_sparql_ask(gp, {{kSource, X("a")}, {kTarget, X("b")}});
    EXPECT_EQ(text.rfind("ASK WHERE {", 0), 0u);
    auto pq = parse_sparql(text);
    EXPECT_TRUE(pq.is_ask);
    ASSERT_TRUE(pq.query.values);
    EXPECT_EQ(pq.query.values->rows, (std::vector<std::vector<Term>>{{X("a"), X("b")}}));
}

TEST(Sparql, ParseSubset) {
    auto pq = parse_sparql(R"(PREFIX ex: <http://example.org/>
SELECT ?target WHERE {
  VALUES ?source { ex:a ex:b }
  ?source ex:p ?x ; ex:q ?target .
  ?x a ex:C
} LIMIT 5)");
    EXPECT_FALSE(pq.is_ask);
    EXPECT_EQ(pq.query.projection, std::vector<Variable>{kTarget});
    EXPECT_EQ(pq.query.pattern.size(), 3u);
    EXPECT_EQ(pq.query.limit, 5u);
    EXPECT_EQ(pq.query.values->rows.size(), 2u);

    auto star = parse_sparql("SELECT * { ?s <http://p> ?o }");
    EXPECT_EQ(star.query.projection, (std::vector<Variable>{{"o"}, {"s"}}));

    EXPECT_THROW(parse_sparql("SELECT ?x WHERE { ?x <http://p> ?y } ORDER BY ?x"), ParseError);
    EXPECT_THROW(parse_sparql("CONSTRUCT { } WHERE { }"), ParseError);
    EXPECT_THROW(parse_sparql("SELECT ?x { VALUES ?x { UNDEF } }"), ParseError);
}

TEST(Sparql, RoundTripRandomQueries) {
    std::mt19937_64 rng(1);
    for (int i = 0; i < 50; ++i) {
        auto triples = oracle::random_triples(rng, 6, 3, 20);
        SelectQuery q{oracle::random_pattern(rng, triples, 4), {}, {}, {}};
        q.projection = q.pattern.variables();
        if (q.projection.empty()) continue;
        ValuesTable vt{{q.projection[0]}, {{triples[0].subject}, {Term::literal("a \"q\"", {}, "en")}}};
        q.values = vt;
        if (i % 2) q.limit = 1024;
        auto pq = parse_sparql(to_sparql(q));
        EXPECT_EQ(pq.query.pattern, q.pattern);
        EXPECT_EQ(pq.query.projection, q.projection);
        EXPECT_EQ(pq.query.values, q.values);
        EXPECT_EQ(pq.query.limit, q.limit);
    }
}
