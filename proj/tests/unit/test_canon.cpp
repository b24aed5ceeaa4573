#include <gtest/gtest.h>

#include <random>

#include "bgpl/canon.hpp"
#include "oracles.hpp"

using namespace bgpl;

namespace {
Namespaces ns() {
    Namespaces n;
    n.prefixes[""] = "http://example.org/";
    return n;
}
GraphPattern P(std::string_view text) { return parse_pattern(text, ns()); }
}  // namespace

TEST(Canon, PureRenaming) {
    EXPECT_EQ(canonical_key(P("?source ?p ?v . ?v ?q ?target")), canonical_key(P("?source ?a ?x . ?x ?b ?target")));
}

TEST(Canon, DirectionMatters) {
    EXPECT_NE(canonical_key(P("?source :p ?v")), canonical_key(P("?v :p ?source")));
}

TEST(Canon, SymmetricPattern) {
    auto a = P("?source ?p ?v1 . ?source ?p ?v2 . ?v1 :q ?t0 . ?v2 :q ?t0");
    auto b = P("?source ?p ?v2 . ?source ?p ?v1 . ?v2 :q ?t0 . ?v1 :q ?t0");
    auto c = a.replace(Variable{"v1"}, Variable{"tmp"}).replace(Variable{"v2"}, Variable{"v1"}).replace(Variable{"tmp"}, Variable{"v2"});
    EXPECT_TRUE(oracle::isomorphic(a, c));
    EXPECT_EQ(canonical_key(a), canonical_key(b));
    EXPECT_EQ(canonical_key(a), canonical_key(c));
}

TEST(Canon, ReservedVariablesNeverRenamed) {
    auto f = canonicalize(P("?target ?p ?x . ?x ?q ?source"));
    EXPECT_TRUE(f.pattern.contains(kSource));
    EXPECT_TRUE(f.pattern.contains(kTarget));
    EXPECT_EQ(f.mapping.count(Node{kSource}), 0u);
    EXPECT_EQ(f.mapping.count(Node{kTarget}), 0u);
    EXPECT_EQ(f.mapping.size(), 3u);
    // Swapping source and target is a different pattern.
    EXPECT_NE(canonical_key(P("?source :p ?target")), canonical_key(P("?target :p ?source")));
}

TEST(Canon, BlankNodesActAsVariables) {
    EXPECT_EQ(canonical_key(P("?source :p _:b . _:b :q ?target")), canonical_key(P("?source :p ?x . ?x :q ?target")));
}

TEST(Canon, FixedTermsKeepIdentity) {
    EXPECT_NE(canonical_key(P("?source :p ?target")), canonical_key(P("?source :q ?target")));
    EXPECT_NE(canonical_key(P("?source :p \"1\"")), canonical_key(P("?source :p 1")));
}

TEST(Canon, KeyIsStableText) {
    EXPECT_EQ(canonical_key(P("?target :q ?zz . ?source :p ?zz")),
              "?source <http://example.org/p> ?c0 .\n?target <http://example.org/q> ?c0 .\n");
}

TEST(CanonProperty, RenamingAndShuffleInvariant) {
    std::mt19937_64 rng(17);
    for (int i = 0; i < 300; ++i) {
        auto triples = oracle::random_triples(rng, 5, 2, 20);
        auto gp = oracle::random_pattern(rng, triples, 6, 4);
        auto renamed = oracle::rename_randomly(rng, gp);
        ASSERT_EQ(canonical_key(gp), canonical_key(renamed)) << gp.to_string() << "\nvs\n" << renamed.to_string();
        // The canonical pattern is itself a renaming of the input.
        EXPECT_TRUE(oracle::isomorphic(gp, canonicalize(gp).pattern));
    }
}

TEST(CanonProperty, EqualKeysImplyIsomorphism) {
    std::mt19937_64 rng(23);
    int equal = 0, distinct = 0;
    for (int i = 0; i < 400; ++i) {
        auto triples = oracle::random_triples(rng, 3, 2, 10);
        auto a = oracle::random_pattern(rng, triples, 3, 3);
        GraphPattern b;
        switch (i % 3) {
            case 0: b = oracle::rename_randomly(rng, a); break;
            case 1: {
                // Near copy: one variable occurrence set redirected to another variable.
                auto vars = a.variables();
                b = oracle::rename_randomly(rng, vars.size() < 2 ? a : a.replace(vars[0], vars[1]));
                break;
            }
            default: b = oracle::random_pattern(rng, triples, 3, 3);
        }
        bool same_key = canonical_key(a) == canonical_key(b);
        EXPECT_EQ(same_key, oracle::isomorphic(a, b)) << a.to_string() << "\nvs\n" << b.to_string();
        (same_key ? equal : distinct)++;
    }
    EXPECT_GT(equal, 0);
    EXPECT_GT(distinct, 0);
}
