#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "bgpl/fitness.hpp"
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

std::shared_ptr<const TripleStore> capitals() {
    return std::make_shared<const TripleStore>(load_file(std::string(BGPL_TEST_DATA) + "/capitals.ttl"));
}

GroundTruth capital_gt() {
    return {{X("Berlin"), X("Germany")}, {X("Paris"), X("France")}, {X("London"), X("United_Kingdom")}};
}

}  // namespace

TEST(Fitness, PerfectPattern) {
    auto ep = Endpoint::local(capitals());
    auto gt = capital_gt();
    auto r = evaluate(*ep, P("?source :capitalOf ?target"), gt, CoverageLedger(gt.size()));
    EXPECT_EQ(r.evaluation.recall, 1.0);
    EXPECT_EQ(r.fitness.avg_result_len, 1.0);
    EXPECT_EQ(r.fitness.precision(), 1.0);
    EXPECT_EQ(r.fitness.f1, 1.0);
    EXPECT_EQ(r.fitness.gain, 3.0);
    EXPECT_EQ(r.fitness.score, 3.0);
    EXPECT_EQ(r.fitness.remains, 3.0);
    EXPECT_EQ(r.fitness.gt_matches, 3u);
    EXPECT_EQ(r.fitness.pattern_length, 1u);
    EXPECT_EQ(r.fitness.pattern_vars, 2u);
    EXPECT_EQ(r.fitness.timeout_penalty, 0.0);
    EXPECT_EQ(r.evaluation.pv, (std::vector<double>{1, 1, 1}));
}

TEST(Fitness, AllVariableTriple) {
    // Out-neighbours: Berlin -> {Germany, City, "3645000"}, Paris -> {France, City}, London -> {UK, City}.
    auto ep = Endpoint::local(capitals());
    auto gt = capital_gt();
    auto r = evaluate(*ep, P("?source ?p ?target"), gt, CoverageLedger(gt.size()));
    EXPECT_EQ(r.evaluation.recall, 1.0);
    EXPECT_DOUBLE_EQ(r.fitness.avg_result_len, 7.0 / 3.0);
    EXPECT_DOUBLE_EQ(r.fitness.precision(), 3.0 / 7.0);
    EXPECT_DOUBLE_EQ(r.fitness.f1, 0.6);
    EXPECT_DOUBLE_EQ(r.fitness.gain, 1.0 / 3 + 0.5 + 0.5);
}

TEST(Fitness, SaturatedLedger) {
    auto ep = Endpoint::local(capitals());
    auto gt = capital_gt();
    CoverageLedger full(std::vector<double>(gt.size(), 1.0));
    for (const auto* text : {"?source :capitalOf ?target", "?source ?p ?target", "?target ?p ?source"}) {
        auto r = evaluate(*ep, P(text), gt, full);
        EXPECT_EQ(r.fitness.gain, 0.0);
        EXPECT_EQ(r.fitness.remains, 0.0);
    }
}

TEST(Fitness, IncompletePatternHasNoGain) {
    auto ep = Endpoint::local(capitals());
    auto gt = capital_gt();
    auto r = evaluate(*ep, P("?source :capitalOf ?x"), gt, CoverageLedger(gt.size()));
    EXPECT_FALSE(r.evaluation.complete);
    EXPECT_EQ(r.fitness.gain, 0.0);
    EXPECT_EQ(r.fitness.gt_matches, 0u);
    EXPECT_EQ(ep->stats().backend_requests, 0u);
}

TEST(Fitness, TimeoutsZeroTheGain) {
    EndpointConfig hard;
    hard.hard_timeout_s = 0;
    auto gt = capital_gt();
    auto r = evaluate(*Endpoint::local(capitals(), hard), P("?source :capitalOf ?target"), gt, CoverageLedger(3));
    EXPECT_EQ(r.fitness.timeout_penalty, 1.0);
    EXPECT_EQ(r.fitness.gain, 0.0);
    EvalResult soft;
    PatternEvaluation e;
    e.complete = true;
    e.pv = {1, 1, 1};
    e.status = EvalStatus::SoftTimeout;
    EXPECT_EQ(gain(e, CoverageLedger(3)), 0.0);
    EXPECT_EQ(timeout_penalty(EvalStatus::SoftTimeout), 0.5);
}

TEST(Score, OverfitPunishment) {
    PatternEvaluation spread;
    spread.matched_sources = 3;
    spread.matched_targets = 3;
    EXPECT_EQ(score(3.0, spread), 3.0);
    PatternEvaluation hub;
    hub.matched_sources = 3;
    hub.matched_targets = 1;
    EXPECT_DOUBLE_EQ(score(1.0, hub), 0.1);
    EXPECT_EQ(score(0.0, spread), 0.0);
    FitnessConfig lenient;
    lenient.overfit_min_targets = 1;
    EXPECT_EQ(score(1.0, hub, lenient), 1.0);
}

TEST(Score, HubTargetFixture) {
    auto store = std::make_shared<const TripleStore>(std::vector<Triple>{
        {X("a"), X("in"), X("Hub")}, {X("b"), X("in"), X("Hub")}, {X("c"), X("in"), X("Other")}});
    auto ep = Endpoint::local(store);
    GroundTruth gt{{X("a"), X("Hub")}, {X("b"), X("Hub")}};
    auto r = evaluate(*ep, P("?source :in ?target"), gt, CoverageLedger(2));
    EXPECT_EQ(r.fitness.gain, 2.0);
    EXPECT_DOUBLE_EQ(r.fitness.score, 0.2);
}

TEST(Ledger, Update) {
    CoverageLedger l(3);
    l.update(std::vector<const std::vector<double>*>{});
    EXPECT_EQ(l.values(), (std::vector<double>{0, 0, 0}));
    l.update(std::vector<double>{1, 0, 0.5});
    EXPECT_EQ(l.values(), (std::vector<double>{1, 0, 0.5}));
    EXPECT_DOUBLE_EQ(l.remains(), 3 - 1.5);
    l.update(std::vector<double>{0.5, 1, 0.2});
    EXPECT_EQ(l.values(), (std::vector<double>{1, 1, 0.5}));
    EXPECT_THROW(l.update(std::vector<double>{1}), std::invalid_argument);
    EXPECT_THROW(CoverageLedger(std::vector<double>{1.5}), std::invalid_argument);
}

TEST(FitnessTupleOrder, SingleFieldFlips) {
    FitnessTuple base;
    base.remains = 5;
    base.score = 1;
    base.gain = 1;
    base.f1 = 0.5;
    base.avg_result_len = 2;
    base.gt_matches = 3;
    base.pattern_length = 2;
    base.pattern_vars = 3;
    base.timeout_penalty = 0.5;
    base.query_time_s = 0.1;
    auto up = [&](auto member, auto delta) {
        FitnessTuple f = base;
        f.*member += delta;
        return f;
    };
    EXPECT_GT(up(&FitnessTuple::remains, 1.0), base);
    EXPECT_GT(up(&FitnessTuple::score, 1.0), base);
    EXPECT_GT(up(&FitnessTuple::gain, 1.0), base);
    EXPECT_GT(up(&FitnessTuple::f1, 0.1), base);
    EXPECT_GT(up(&FitnessTuple::gt_matches, std::size_t{1}), base);
    EXPECT_LT(up(&FitnessTuple::avg_result_len, 1.0), base);
    EXPECT_LT(up(&FitnessTuple::pattern_length, std::size_t{1}), base);
    EXPECT_LT(up(&FitnessTuple::pattern_vars, std::size_t{1}), base);
    EXPECT_LT(up(&FitnessTuple::timeout_penalty, 0.5), base);
    EXPECT_LT(up(&FitnessTuple::query_time_s, 0.1), base);
    // Earlier fields dominate later ones.
    FitnessTuple a = up(&FitnessTuple::score, 0.01);
    a.f1 = 0;
    a.pattern_length = 9;
    EXPECT_GT(a, base);
}

TEST(FitnessProperty, MatchesBruteForceOracle) {
    std::mt19937_64 rng(99);
    int complete = 0;
    for (int round = 0; round < 60; ++round) {
        auto triples = oracle::random_triples(rng, 8, 3, 20 + static_cast<int>(rng() % 100));
        auto store = std::make_shared<const TripleStore>(triples);
        auto gp = oracle::random_pattern(rng, triples, 3);
        std::vector<std::pair<Term, Term>> pairs;
        GroundTruth gt;
        std::set<std::pair<Term, Term>> used;
        while (gt.size() < 6) {
            const auto& t = triples[rng() % triples.size()];
            Term target = rng() % 3 ? t.object : triples[rng() % triples.size()].object;
            if (!used.insert({t.subject, target}).second) continue;
            gt.push_back({t.subject, target});
            pairs.push_back({t.subject, target});
        }
        std::vector<double> ledger;
        for (std::size_t i = 0; i < gt.size(); ++i) ledger.push_back((rng() % 3) / 2.0);
        EndpointConfig cfg;
        cfg.batch_size = 1 + rng() % 4;
        auto ep = Endpoint::local(store, cfg);
        auto r = evaluate(*ep, gp, gt, CoverageLedger(ledger));
        auto o = oracle::brute_fitness(triples, gp, pairs, ledger);
        complete += gp.is_complete();
        EXPECT_EQ(r.evaluation.pv, o.pv) << gp.to_string();
        EXPECT_EQ(r.fitness.gt_matches, o.gt_matches);
        EXPECT_NEAR(r.evaluation.recall, o.recall, 1e-12);
        EXPECT_NEAR(r.fitness.avg_result_len, o.avg_result_len, 1e-12);
        EXPECT_NEAR(r.fitness.precision(), o.precision, 1e-12);
        EXPECT_NEAR(r.fitness.gain, o.gain, 1e-12);
        EXPECT_LE(r.fitness.gain, r.fitness.remains + 1e-12);
        for (double v : r.evaluation.pv) {
            EXPECT_TRUE(v == 0 || std::abs(1 / v - std::round(1 / v)) < 1e-9);
        }
    }
    EXPECT_GT(complete, 10);
}

TEST(FitnessProperty, CachingDoesNotChangeResults) {
    std::mt19937_64 rng(5);
    auto triples = oracle::random_triples(rng, 10, 3, 120);
    auto store = std::make_shared<const TripleStore>(triples);
    EndpointConfig off;
    off.cache_capacity = 0;
    auto cached = Endpoint::local(store), uncached = Endpoint::local(store, off);
    GroundTruth gt;
    for (int i = 0; i < 8; ++i) gt.push_back({triples[i].subject, triples[i].object});
    std::sort(gt.begin(), gt.end());
    gt.erase(std::unique(gt.begin(), gt.end()), gt.end());
    CoverageLedger ledger(gt.size());
    for (int round = 0; round < 40; ++round) {
        auto gp = oracle::random_pattern(rng, triples, 3);
        for (int rep = 0; rep < 2; ++rep) {
            auto a = evaluate(*cached, gp, gt, ledger);
            auto b = evaluate(*uncached, gp, gt, ledger);
            EXPECT_EQ(a.fitness, b.fitness);
            EXPECT_EQ(a.evaluation.pv, b.evaluation.pv);
        }
    }
    EXPECT_GT(cached->stats().cache_hits, 0u);
}
