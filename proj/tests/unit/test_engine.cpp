#include <gtest/gtest.h>

#include <random>
#include <set>

#include "bgpl/engine.hpp"
#include "oracles.hpp"

using namespace bgpl;

namespace {

const std::string ex = "http://example.org/";
Term X(const std::string& local) { return Term::iri(ex + local); }

Namespaces ns() {
    Namespaces n;
    n.prefixes[""] = ex;
    return n;
}
GraphPattern P(std::string_view text) { return parse_pattern(text, ns()); }

TripleStore capitals() { return load_file(std::string(BGPL_TEST_DATA) + "/capitals.ttl"); }

std::set<oracle::Row> rows(const EvalResult& r) { return {r.rows.begin(), r.rows.end()}; }

}  // namespace

TEST(Select, ValuesBoundCapital) {
    auto g = capitals();
    SelectQuery q;
    q.pattern = P("?source :capitalOf ?target");
    q.projection = {kTarget};
    q.values = ValuesTable{{kSource}, {{X("Berlin")}}};
    auto r = select(g, q);
    EXPECT_EQ(r.status, EvalStatus::Complete);
    EXPECT_EQ(rows(r), (std::set<oracle::Row>{{X("Germany")}}));
}

TEST(Select, NoMatch) {
    auto g = capitals();
    SelectQuery q{P("?source :capitalOf ?x . ?x :capitalOf ?target"), {kSource, kTarget}, {}, {}};
    auto r = select(g, q);
    EXPECT_TRUE(r.rows.empty());
    EXPECT_EQ(r.status, EvalStatus::Complete);
}

TEST(Select, HardTimeoutZero) {
    auto g = capitals();
    SelectQuery q{P("?source ?p ?target"), {kSource, kTarget}, {}, {}};
    EvalOptions o;
    o.hard_timeout_s = 0;
    auto r = select(g, q, o);
    EXPECT_EQ(r.status, EvalStatus::HardTimeout);
    EXPECT_TRUE(r.rows.empty());
}

TEST(Select, DegenerateQueries) {
    auto g = capitals();
    EXPECT_THROW(select(g, SelectQuery{GraphPattern{}, {kSource}, {}, {}}), std::invalid_argument);
    EXPECT_THROW(select(g, SelectQuery{P("?source :p ?o"), {kTarget}, {}, {}}), std::invalid_argument);
    // VALUES alone is a valid query.
    SelectQuery only_values{GraphPattern{}, {kSource}, ValuesTable{{kSource}, {{X("a")}, {X("b")}}}, {}};
    EXPECT_EQ(select(g, only_values).rows.size(), 2u);
}

TEST(Select, DistinctAndLimit) {
    auto g = capitals();
    SelectQuery q{P("?s a ?t"), {kSource}, {}, {}};
    q.pattern = P("?source a ?t");
    EXPECT_EQ(select(g, q).rows.size(), 6u);
    q.projection = {Variable{"t"}};
    EXPECT_EQ(select(g, q).rows.size(), 2u);
    q.limit = 1;
    EXPECT_EQ(select(g, q).rows.size(), 1u);
}

TEST(Select, UnknownTermsInValues) {
    auto g = capitals();
    SelectQuery q{P("?source :capitalOf ?target"), {kSource, kTarget},
                  ValuesTable{{kSource, kTarget}, {{X("Berlin"), X("Germany")}, {X("Atlantis"), X("Germany")}}}, {}};
    EXPECT_EQ(rows(select(g, q)), (std::set<oracle::Row>{{X("Berlin"), X("Germany")}}));
}

TEST(Select, SoftTimeoutRowsAreSubset) {
    std::mt19937_64 rng(5);
    TripleStore g(oracle::random_triples(rng, 30, 2, 400));
    SelectQuery q{P("?source ?p ?x . ?x ?q ?target"), {kSource, kTarget}, {}, {}};
    EvalOptions full;
    full.clock = ClockMode::Work;
    full.soft_timeout_s = full.hard_timeout_s = kNoTimeout;
    auto complete = select(g, q, full);
    ASSERT_EQ(complete.status, EvalStatus::Complete);
    EvalOptions soft = full;
    soft.soft_timeout_s = 200 * kSecondsPerWorkUnit;
    auto partial = select(g, q, soft);
    EXPECT_EQ(partial.status, EvalStatus::SoftTimeout);
    EXPECT_LT(partial.rows.size(), complete.rows.size());
    auto all = rows(complete);
    for (const auto& r : partial.rows) EXPECT_TRUE(all.count(r));
    EvalOptions hard = full;
    hard.hard_timeout_s = 200 * kSecondsPerWorkUnit;
    auto aborted = select(g, q, hard);
    EXPECT_EQ(aborted.status, EvalStatus::HardTimeout);
    EXPECT_TRUE(aborted.rows.empty());
}

TEST(Select, WorkClockIsDeterministic) {
    std::mt19937_64 rng(9);
    TripleStore g(oracle::random_triples(rng, 20, 3, 200));
    SelectQuery q{P("?source ?p ?x . ?x ?q ?target"), {kSource, kTarget}, {}, {}};
    EvalOptions o;
    o.clock = ClockMode::Work;
    auto a = select(g, q, o), b = select(g, q, o);
    EXPECT_EQ(a.rows, b.rows);
    EXPECT_EQ(a.work, b.work);
    EXPECT_DOUBLE_EQ(a.elapsed_s, b.elapsed_s);
}

TEST(Ask, Fixture) {
    auto g = capitals();
    auto gp = P("?source :capitalOf ?target");
    EXPECT_TRUE(ask(g, gp, {{kSource, X("Berlin")}, {kTarget, X("Germany")}}).value);
    EXPECT_FALSE(ask(g, gp, {{kSource, X("Berlin")}, {kTarget, X("France")}}).value);
    EXPECT_TRUE(ask(g, P("?source ?p ?target"), {{kSource, X("Berlin")}, {kTarget, X("Germany")}}).value);
    // A literal bound into subject position simply has no solution.
    EXPECT_FALSE(ask(g, gp, {{kSource, Term::literal("x")}, {kTarget, X("Germany")}}).value);
}

TEST(JoinPlan, Examples) {
    TripleStore g({{X("a"), X("p"), X("b")},
                   {X("b"), X("q"), X("c")},
                   {X("d"), X("q"), X("c")},
                   {X("e"), X("q"), X("c")},
                   {X("f"), X("q"), X("a")}});
    auto single = P("?source :p ?target");
    EXPECT_EQ(join_plan(g, single), single.triples());

    auto two = P("?source :p ?v . ?v :q ?target");
    auto plan = join_plan(g, two);
    ASSERT_EQ(plan.size(), 2u);
    EXPECT_EQ(plan[0], P("?source :p ?v").triples()[0]);

    auto fixed = P("?source ?x ?y . :e :q ?source");
    plan = join_plan(g, fixed);
    EXPECT_EQ(plan[0], P(":e :q ?source").triples()[0]);

    auto disconnected = P("?source :q ?target . ?a :p ?b . ?target :q ?c");
    plan = join_plan(g, disconnected);
    EXPECT_EQ(plan.back(), P("?a :p ?b").triples()[0]);
}

TEST(EngineProperty, MatchesBruteForce) {
    std::mt19937_64 rng(42);
    int checked = 0;
    for (int round = 0; round < 120; ++round) {
        auto triples = oracle::random_triples(rng, 7, 3, 5 + static_cast<int>(rng() % 80));
        TripleStore g(triples);
        SelectQuery q;
        q.pattern = oracle::random_pattern(rng, triples, 3);
        auto vars = q.pattern.variables();
        for (const auto& v : vars) {
            if (rng() % 2) q.projection.push_back(v);
        }
        if (q.projection.empty()) q.projection.push_back(vars.empty() ? kSource : vars[0]);
        if (vars.empty()) q.values = ValuesTable{{kSource}, {{triples[0].subject}}};
        auto expected = oracle::brute_select(triples, q);
        EXPECT_EQ(rows(select(g, q)), expected) << q.pattern.to_string();
        ++checked;
    }
    EXPECT_EQ(checked, 120);
}

TEST(EngineProperty, ValuesEqualsUnionOfRows) {
    std::mt19937_64 rng(8);
    for (int round = 0; round < 40; ++round) {
        auto triples = oracle::random_triples(rng, 8, 2, 60);
        TripleStore g(triples);
        SelectQuery q{oracle::random_pattern(rng, triples, 3), {}, {}, {}};
        if (!q.pattern.contains(kSource)) continue;
        q.projection = q.pattern.variables();
        ValuesTable vt{{kSource}, {}};
        for (int i = 0; i < 4; ++i) vt.rows.push_back({triples[rng() % triples.size()].subject});
        q.values = vt;
        std::set<oracle::Row> unioned;
        for (const auto& row : vt.rows) {
            SelectQuery one = q;
            one.values = ValuesTable{{kSource}, {row}};
            auto r = rows(select(g, one));
            unioned.insert(r.begin(), r.end());
        }
        EXPECT_EQ(rows(select(g, q)), unioned);
    }
}
