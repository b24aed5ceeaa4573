#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>

#include "bgpl/evalharness.hpp"
#include "ranking_oracles.hpp"
#include "synthetic.hpp"

using namespace bgpl;

namespace {

const std::string ex = "http://example.org/";
Term X(const std::string& local) { return Term::iri(ex + local); }

TripleStore graph(const std::vector<std::pair<std::string, std::string>>& edges, const std::string& pred = "p") {
    std::vector<Triple> ts;
    for (const auto& [s, o] : edges) ts.push_back({X(s), X(pred), X(o)});
    return TripleStore(std::move(ts));
}

std::vector<double> as_doubles(const std::vector<Rank>& ranks) {
    std::vector<double> out;
    for (const auto& r : ranks) out.push_back(r ? static_cast<double>(*r) : oracle::kNoRank);
    return out;
}

GroundTruth pairs(std::size_t n) {
    GroundTruth gt;
    for (std::size_t i = 0; i < n; ++i) gt.push_back({X("s" + std::to_string(i)), X("t" + std::to_string(i))});
    return gt;
}

}  // namespace

TEST(Rank, PositionInList) {
    RankedList l{{X("a"), 3}, {X("b"), 2}, {X("c"), 1}};
    EXPECT_EQ(rank_of_truth(l, X("a")), 1u);
    EXPECT_EQ(rank_of_truth(l, X("c")), 3u);
    EXPECT_EQ(rank_of_truth(l, X("z")), std::nullopt);
    EXPECT_EQ(rank_of_truth(std::vector<Term>{X("b"), X("a")}, X("a")), 2u);
    EXPECT_EQ(rank_of_truth(std::vector<Term>{}, X("a")), std::nullopt);
}

TEST(Metrics, HitAndMiss) {
    auto m = metrics({1u, std::nullopt});
    EXPECT_DOUBLE_EQ(m.recall(1), 0.5);
    EXPECT_DOUBLE_EQ(m.recall(10), 0.5);
    EXPECT_DOUBLE_EQ(m.map, 0.5);
    EXPECT_DOUBLE_EQ(m.ndcg, 0.5);
    EXPECT_EQ(m.pairs, 2u);
}

TEST(Metrics, ThreeRanks) {
    auto m = metrics({1u, 2u, 4u});
    EXPECT_NEAR(m.recall(1), 1.0 / 3, 1e-12);
    EXPECT_NEAR(m.recall(2), 2.0 / 3, 1e-12);
    EXPECT_NEAR(m.recall(3), 2.0 / 3, 1e-12);
    EXPECT_NEAR(m.recall(4), 1.0, 1e-12);
    EXPECT_NEAR(m.map, (1 + 0.5 + 0.25) / 3, 1e-12);
    EXPECT_NEAR(m.ndcg, (1 + 1 / std::log2(3.0) + 1 / std::log2(5.0)) / 3, 1e-12);
}

TEST(Metrics, EmptyIsZero) {
    auto m = metrics({});
    EXPECT_EQ(m.map, 0.0);
    EXPECT_EQ(m.recall(10), 0.0);
}

TEST(MetricsProperty, MatchesNaiveOracle) {
    std::mt19937_64 rng(5);
    for (int round = 0; round < 200; ++round) {
        std::vector<Rank> ranks;
        std::size_t n = rng() % 30;
        for (std::size_t i = 0; i < n; ++i) {
            if (rng() % 4 == 0) ranks.push_back(std::nullopt);
            else ranks.push_back(1 + rng() % 15);
        }
        auto got = metrics(ranks);
        auto want = oracle::naive_metrics(as_doubles(ranks));
        for (std::size_t k = 1; k <= 10; ++k) EXPECT_NEAR(got.recall(k), want.recall_at[k - 1], 1e-12);
        EXPECT_NEAR(got.map, want.map, 1e-12);
        EXPECT_NEAR(got.ndcg, want.ndcg, 1e-12);
        for (std::size_t k = 1; k < 10; ++k) EXPECT_LE(got.recall(k), got.recall(k + 1));
        EXPECT_LE(got.map, got.ndcg + 1e-12);
    }
}

TEST(Split, SizesAndPartition) {
    auto gt = pairs(727);
    auto s = split(gt, 0.1, 42);
    EXPECT_EQ(s.test.size(), 72u);
    EXPECT_EQ(s.train.size(), 655u);
    std::set<GroundTruthPair> all(s.train.begin(), s.train.end());
    all.insert(s.test.begin(), s.test.end());
    EXPECT_EQ(all.size(), 727u);
    // Both halves keep input order.
    auto pos = [&](const GroundTruthPair& p) { return std::find(gt.begin(), gt.end(), p) - gt.begin(); };
    for (std::size_t i = 1; i < s.test.size(); ++i) EXPECT_LT(pos(s.test[i - 1]), pos(s.test[i]));
    for (std::size_t i = 1; i < s.train.size(); ++i) EXPECT_LT(pos(s.train[i - 1]), pos(s.train[i]));
}

TEST(Split, SeedDeterminism) {
    auto gt = pairs(100);
    EXPECT_EQ(split(gt, 0.2, 7).test, split(gt, 0.2, 7).test);
    EXPECT_NE(split(gt, 0.2, 7).test, split(gt, 0.2, 8).test);
    EXPECT_TRUE(split(gt, 0.0, 1).test.empty());
    EXPECT_EQ(split(gt, 1.0, 1).test.size(), 100u);
    EXPECT_THROW(split(gt, 1.5, 1), std::invalid_argument);
}

TEST(NodeGraph, DistinctEdgesAndSortedNodes) {
    std::vector<Triple> ts{{X("b"), X("p"), X("a")}, {X("b"), X("q"), X("a")}, {X("a"), X("p"), X("c")}};
    TripleStore store(ts);
    NodeGraph g(store);
    ASSERT_EQ(g.size(), 3u);
    EXPECT_EQ(g.node(0), X("a"));
    EXPECT_EQ(g.node(2), X("c"));
    auto b = *g.index(X("b"));
    EXPECT_EQ(g.out()[b].size(), 1u);
    EXPECT_FALSE(g.index(X("p")));
}

TEST(PageRank, CycleIsUniform) {
    auto pr = pagerank(graph({{"a", "b"}, {"b", "c"}, {"c", "a"}}));
    for (double x : pr) EXPECT_NEAR(x, 1.0 / 3, 1e-9);
}

TEST(PageRank, TwoNodeClosedForm) {
    // a -> b with b dangling.
    auto pr = pagerank(graph({{"a", "b"}}));
    auto ref = oracle::reference_pagerank({{1}, {}}, 0.85, 500);
    EXPECT_NEAR(pr[0], ref[0], 1e-9);
    EXPECT_NEAR(pr[1], ref[1], 1e-9);
    // Fixed point: pr_a = 0.075 + 0.425 pr_b and pr_a + pr_b = 1.
    EXPECT_NEAR(pr[0], 0.5 / 1.425, 1e-9);
}

TEST(PageRankProperty, MatchesReferenceAndSumsToOne) {
    std::mt19937_64 rng(11);
    for (int round = 0; round < 30; ++round) {
        std::size_t n = 2 + rng() % 12;
        std::vector<std::pair<std::string, std::string>> edges;
        std::size_t m = rng() % (3 * n);
        for (std::size_t i = 0; i < m; ++i) {
            edges.push_back({"n" + std::to_string(10 + rng() % n), "n" + std::to_string(10 + rng() % n)});
        }
        if (edges.empty()) continue;
        auto store = graph(edges);
        NodeGraph g(store);
        auto pr = pagerank(g);
        double sum = 0;
        for (double x : pr) sum += x;
        EXPECT_NEAR(sum, 1.0, 1e-9);
        auto ref = oracle::reference_pagerank(g.out(), 0.85, 2000);
        for (std::size_t i = 0; i < pr.size(); ++i) EXPECT_NEAR(pr[i], ref[i], 1e-8);
    }
}

TEST(PageRankProperty, RelabelingInvariance) {
    std::vector<std::pair<std::string, std::string>> edges{{"a", "b"}, {"a", "c"}, {"c", "a"}, {"d", "c"}, {"b", "e"}};
    std::vector<std::pair<std::string, std::string>> renamed;
    auto rename = [](const std::string& s) { return "z" + std::string(1, static_cast<char>('z' - (s[0] - 'a'))); };
    for (const auto& [s, o] : edges) renamed.push_back({rename(s), rename(o)});
    auto g1 = graph(edges), g2 = graph(renamed);
    NodeGraph n1(g1), n2(g2);
    auto p1 = pagerank(n1), p2 = pagerank(n2);
    for (std::size_t i = 0; i < n1.size(); ++i) {
        std::string local = n1.node(i).value.substr(ex.size());
        EXPECT_NEAR(p1[i], p2[*n2.index(X(rename(local)))], 1e-12);
    }
}

TEST(Hits, BipartiteClosedForm) {
    // a1 -> b1, a1 -> b2, a2 -> b2: authority of (b1, b2) is proportional to (1, golden ratio).
    auto store = graph({{"a1", "b1"}, {"a1", "b2"}, {"a2", "b2"}});
    NodeGraph g(store);
    auto h = hits(g);
    const double phi = (1 + std::sqrt(5.0)) / 2;
    double b1 = h.authority[*g.index(X("b1"))], b2 = h.authority[*g.index(X("b2"))];
    EXPECT_NEAR(b2 / b1, phi, 1e-8);
    EXPECT_NEAR(b1 * b1 + b2 * b2, 1.0, 1e-9);
    EXPECT_NEAR(h.authority[*g.index(X("a1"))], 0.0, 1e-12);
    // Hubs: A A^T = [[2,1],[1,1]], principal eigenvector (golden ratio, 1).
    double a1 = h.hub[*g.index(X("a1"))], a2 = h.hub[*g.index(X("a2"))];
    EXPECT_NEAR(a1 / a2, phi, 1e-8);
    EXPECT_NEAR(h.hub[*g.index(X("b1"))], 0.0, 1e-12);
}

TEST(Baseline, StarByInDegree) {
    // s links to x, y, z; y and z are also pointed to by others.
    auto store = graph({{"s", "x"}, {"s", "y"}, {"s", "z"}, {"u", "y"}, {"u", "z"}, {"v", "z"}});
    BaselinePredictor b(store);
    EXPECT_EQ(b.predict(X("s"), Direction::Out, Scorer::InDegree), (std::vector<Term>{X("z"), X("y"), X("x")}));
    EXPECT_EQ(b.predict(X("s"), Direction::Out, Scorer::InDegree, 2), (std::vector<Term>{X("z"), X("y")}));
    EXPECT_TRUE(b.predict(X("s"), Direction::In, Scorer::InDegree).empty());
    EXPECT_EQ(b.predict(X("z"), Direction::In, Scorer::OutDegree), (std::vector<Term>{X("s"), X("u"), X("v")}));
}

TEST(Baseline, UnknownSourceAndSelfLoops) {
    auto store = graph({{"a", "a"}, {"a", "b"}});
    BaselinePredictor b(store);
    EXPECT_TRUE(b.predict(X("nowhere"), Direction::Bidi, Scorer::PageRank).empty());
    EXPECT_EQ(b.predict(X("a"), Direction::Bidi, Scorer::PageRank), std::vector<Term>{X("b")});
}

TEST(Baseline, TiesBrokenByTerm) {
    auto store = graph({{"a", "c"}, {"c", "b"}, {"b", "a"}});
    BaselinePredictor b(store);
    for (auto s : {Scorer::OutDegree, Scorer::InDegree, Scorer::PageRank, Scorer::Hits}) {
        EXPECT_EQ(b.predict(X("a"), Direction::Bidi, s), (std::vector<Term>{X("b"), X("c")})) << to_string(s);
    }
}

TEST(Baseline, TableOrderAndNames) {
    auto store = graph({{"a", "b"}});
    BaselinePredictor b(store);
    auto rows = evaluate_baselines(b, {{X("a"), X("b")}});
    ASSERT_EQ(rows.size(), 12u);
    EXPECT_EQ(rows[0].name, "outdeg in");
    EXPECT_EQ(rows[1].name, "outdeg out");
    EXPECT_EQ(rows[2].name, "outdeg bidi");
    EXPECT_EQ(rows[6].name, "pagerank in");
    EXPECT_EQ(rows[11].name, "hits bidi");
    EXPECT_EQ(rows[0].recall(10), 0.0);
    EXPECT_EQ(rows[1].recall(1), 1.0);
    auto table = format_table(rows);
    EXPECT_NE(table.find("R@10"), std::string::npos);
    EXPECT_NE(table.find("NDCG"), std::string::npos);
    EXPECT_NE(table.find("pagerank bidi"), std::string::npos);
    EXPECT_EQ(std::count(table.begin(), table.end(), '\n'), 13);
}

TEST(Evaluate, LearnedPortfolioBeatsBaselines) {
    auto fx = synthetic::planted(3, {.gt_pairs = 80, .shape = synthetic::Shape::TwoHop});
    auto store = std::make_shared<const TripleStore>(fx.triples);
    auto ep = Endpoint::local(store);
    auto s = split(fx.gt, 0.25, 1);
    ASSERT_EQ(s.test.size(), 20u);
    EvolutionConfig cfg;
    cfg.population_size = 60;
    cfg.max_generations = 8;
    cfg.max_runs = 3;
    cfg.hof_size = 30;
    auto learned = learn(*ep, s.train, cfg);
    ASSERT_FALSE(learned.patterns.empty());
    auto portfolio = Portfolio::from(learned.patterns);
    reduce_queries(portfolio, 10);
    auto fused = evaluate_portfolio(*ep, portfolio, s.test);
    ASSERT_EQ(fused.size(), kFusionStrategies.size());
    auto base = evaluate_baselines(BaselinePredictor(*store), s.test);
    double best_baseline = 0;
    for (const auto& r : base) best_baseline = std::max(best_baseline, r.recall(1));
    for (const auto& r : fused) {
        EXPECT_EQ(r.pairs, 20u);
        EXPECT_GT(r.recall(1), best_baseline) << r.name;
    }
}
