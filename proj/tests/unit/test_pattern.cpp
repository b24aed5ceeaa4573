#include <gtest/gtest.h>

#include "bgpl/pattern.hpp"

using namespace bgpl;

namespace {

Namespaces ns() {
    Namespaces n;
    n.prefixes[""] = "http://example.org/";
    return n;
}

GraphPattern P(std::string_view text) { return parse_pattern(text, ns()); }

}  // namespace

TEST(Pattern, SetSemantics) {
    auto gp = P("?source :p ?target . ?source :p ?target . ?target :q ?v .");
    EXPECT_EQ(gp.size(), 2u);
    EXPECT_FALSE(gp.insert(gp.triples()[0]));
    EXPECT_EQ(P(":a :p ?target . ?source :p :a"), P("?source :p :a . :a :p ?target"));
}

TEST(Pattern, DerivedPredicates) {
    auto gp = P("?source ?p ?v . ?v :q ?target .");
    EXPECT_EQ(gp.size(), 2u);
    EXPECT_EQ(gp.variable_count(), 4u);
    EXPECT_TRUE(gp.is_complete());
    EXPECT_TRUE(gp.is_connected());
    EXPECT_FALSE(P("?source :p ?v").is_complete());
    EXPECT_FALSE(P("?source :p ?v . ?w :q ?target").is_connected());
    EXPECT_FALSE(GraphPattern{}.is_connected());
    // Connection through a shared fixed term counts.
    EXPECT_TRUE(P("?source :p :x . :x :q ?target").is_connected());
    // A shared predicate variable links two otherwise separate edges.
    EXPECT_TRUE(P("?source ?p ?a . ?target ?p ?b").is_connected());
}

TEST(Pattern, Validation) {
    EXPECT_THROW(P("\"lit\" :p ?x"), ParseError);
    EXPECT_THROW(GraphPattern({{Term::literal("x"), Term::iri("http://p"), Variable{"x"}}}), std::invalid_argument);
    EXPECT_THROW(GraphPattern({{Variable{"x"}, Term::literal("p"), Variable{"y"}}}), std::invalid_argument);
}

TEST(Pattern, BindingSubstitutesOnlyBoundVariables) {
    auto gp = P("?source :p ?v . ?v :q ?target");
    Binding b{{kSource, Term::iri("http://example.org/Berlin")}};
    auto out = gp.substitute(b);
    EXPECT_EQ(out, P(":Berlin :p ?v . ?v :q ?target"));
}

TEST(Pattern, ReplaceAndFresh) {
    auto gp = P("?source :p ?v0 . ?v0 :q ?target . ?v1 :r ?v0");
    EXPECT_EQ(fresh_variable(gp).name, "v2");
    auto r = gp.replace(Variable{"v0"}, Term::iri("http://example.org/x"));
    EXPECT_EQ(r.occurrences(Term::iri("http://example.org/x")), 3u);
    EXPECT_EQ(gp.occurrences(Variable{"v0"}), 3u);
}

TEST(Pattern, BlankNodesCountAsVariables) {
    auto gp = P("?source :p _:b . _:b :q ?target");
    EXPECT_EQ(gp.variable_count(), 3u);
    EXPECT_TRUE(gp.fixed_terms().size() == 2u);
}

TEST(Pattern, RoundTripText) {
    auto gp = P("?source :p \"x\"@en . ?source a :C ; :q 3 .");
    EXPECT_EQ(parse_pattern(gp.to_string()), gp);
}
