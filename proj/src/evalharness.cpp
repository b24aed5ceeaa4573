#include "bgpl/evalharness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <set>
#include <stdexcept>

#include "bgpl/rng.hpp"

namespace bgpl {

Split split(const GroundTruth& gt, double test_ratio, std::uint64_t seed) {
    if (!(test_ratio >= 0.0 && test_ratio <= 1.0)) throw std::invalid_argument("test ratio must lie in [0,1]");
    const std::size_t n = gt.size();
    const auto n_test = static_cast<std::size_t>(std::floor(test_ratio * static_cast<double>(n)));
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    Rng rng(seed);
    for (std::size_t i = n; i > 1; --i) std::swap(idx[i - 1], idx[rng.index(i)]);
    std::vector<bool> in_test(n, false);
    for (std::size_t i = 0; i < n_test; ++i) in_test[idx[i]] = true;
    Split s;
    s.seed = seed;
    s.ratio = test_ratio;
    for (std::size_t i = 0; i < n; ++i) (in_test[i] ? s.test : s.train).push_back(gt[i]);
    return s;
}

Rank rank_of_truth(const RankedList& list, const Term& truth) {
    for (std::size_t i = 0; i < list.size(); ++i) {
        if (list[i].first == truth) return i + 1;
    }
    return std::nullopt;
}

Rank rank_of_truth(const std::vector<Term>& list, const Term& truth) {
    auto it = std::find(list.begin(), list.end(), truth);
    if (it == list.end()) return std::nullopt;
    return static_cast<std::size_t>(it - list.begin()) + 1;
}

MetricReport metrics(const std::vector<Rank>& ranks, std::string name) {
    MetricReport m;
    m.name = std::move(name);
    m.pairs = ranks.size();
    if (ranks.empty()) return m;
    const double n = static_cast<double>(ranks.size());
    std::array<std::size_t, 10> hits{};
    for (const auto& r : ranks) {
        if (!r) continue;
        for (std::size_t k = *r; k <= 10; ++k) ++hits[k - 1];
        m.map += 1.0 / static_cast<double>(*r);
        m.ndcg += 1.0 / std::log2(static_cast<double>(*r) + 1.0);
    }
    for (std::size_t k = 0; k < 10; ++k) m.recall_at[k] = static_cast<double>(hits[k]) / n;
    m.map /= n;
    m.ndcg /= n;
    return m;
}

// ---- graph baselines ----

NodeGraph::NodeGraph(const TripleStore& store) {
    std::vector<TermId> ids;
    for (const auto& t : store.triples()) {
        ids.push_back(t.s);
        ids.push_back(t.o);
    }
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    // Ids follow term order, so nodes_ ends up sorted.
    std::vector<std::size_t> pos(store.term_count(), 0);
    for (std::size_t i = 0; i < ids.size(); ++i) {
        pos[ids[i]] = i;
        nodes_.push_back(store.term(ids[i]));
    }
    out_.resize(nodes_.size());
    in_.resize(nodes_.size());
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    for (const auto& t : store.triples()) edges.push_back({pos[t.s], pos[t.o]});
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    for (const auto& [s, o] : edges) {
        out_[s].push_back(o);
        in_[o].push_back(s);
    }
    for (auto& v : in_) std::sort(v.begin(), v.end());
}

std::optional<std::size_t> NodeGraph::index(const Term& t) const {
    auto it = std::lower_bound(nodes_.begin(), nodes_.end(), t);
    if (it == nodes_.end() || *it != t) return std::nullopt;
    return static_cast<std::size_t>(it - nodes_.begin());
}

std::vector<std::size_t> NodeGraph::neighbours(std::size_t i, Direction dir) const {
    std::set<std::size_t> out;
    if (dir != Direction::In) out.insert(out_[i].begin(), out_[i].end());
    if (dir != Direction::Out) out.insert(in_[i].begin(), in_[i].end());
    out.erase(i);
    return {out.begin(), out.end()};
}

std::vector<double> pagerank(const NodeGraph& g, const IterationOptions& opts) {
    const std::size_t n = g.size();
    if (n == 0) return {};
    const double d = opts.damping, inv_n = 1.0 / static_cast<double>(n);
    std::vector<double> pr(n, inv_n), next(n);
    for (std::size_t it = 0; it < opts.max_iter; ++it) {
        double dangling = 0;
        for (std::size_t u = 0; u < n; ++u) {
            if (g.out()[u].empty()) dangling += pr[u];
        }
        const double base = (1.0 - d) * inv_n + d * dangling * inv_n;
        // Pull formulation: each node sums over its in-neighbours in index order.
        double change = 0;
        for (std::size_t v = 0; v < n; ++v) {
            double s = 0;
            for (std::size_t u : g.in()[v]) s += pr[u] / static_cast<double>(g.out()[u].size());
            next[v] = base + d * s;
            change += std::abs(next[v] - pr[v]);
        }
        pr.swap(next);
        if (change < opts.eps) break;
    }
    return pr;
}

std::vector<double> pagerank(const TripleStore& store, const IterationOptions& opts) {
    return pagerank(NodeGraph(store), opts);
}

namespace {
void normalize_l2(std::vector<double>& v) {
    double s = 0;
    for (double x : v) s += x * x;
    if (s == 0) return;
    s = std::sqrt(s);
    for (double& x : v) x /= s;
}
}  // namespace

HitsScores hits(const NodeGraph& g, const IterationOptions& opts) {
    const std::size_t n = g.size();
    HitsScores h;
    h.authority.assign(n, 1.0);
    h.hub.assign(n, 1.0);
    normalize_l2(h.authority);
    normalize_l2(h.hub);
    std::vector<double> a(n), b(n);
    for (std::size_t it = 0; it < opts.max_iter; ++it) {
        for (std::size_t v = 0; v < n; ++v) {
            double s = 0;
            for (std::size_t u : g.in()[v]) s += h.hub[u];
            a[v] = s;
        }
        normalize_l2(a);
        for (std::size_t u = 0; u < n; ++u) {
            double s = 0;
            for (std::size_t v : g.out()[u]) s += a[v];
            b[u] = s;
        }
        normalize_l2(b);
        double change = 0;
        for (std::size_t i = 0; i < n; ++i) change += std::abs(a[i] - h.authority[i]) + std::abs(b[i] - h.hub[i]);
        h.authority.swap(a);
        h.hub.swap(b);
        if (change < opts.eps) break;
    }
    return h;
}

HitsScores hits(const TripleStore& store, const IterationOptions& opts) { return hits(NodeGraph(store), opts); }

BaselinePredictor::BaselinePredictor(const TripleStore& store, const IterationOptions& opts, bool hits_hub)
    : graph_(store) {
    pagerank_ = pagerank(graph_, opts);
    HitsScores h = hits(graph_, opts);
    hits_ = hits_hub ? std::move(h.hub) : std::move(h.authority);
}

double BaselinePredictor::score(std::size_t node, Scorer scorer) const {
    switch (scorer) {
        case Scorer::OutDegree: return static_cast<double>(graph_.out()[node].size());
        case Scorer::InDegree: return static_cast<double>(graph_.in()[node].size());
        case Scorer::PageRank: return pagerank_[node];
        case Scorer::Hits: return hits_[node];
    }
    return 0;
}

std::vector<Term> BaselinePredictor::predict(const Term& source, Direction dir, Scorer scorer,
                                             std::optional<std::size_t> k) const {
    auto i = graph_.index(source);
    if (!i) return {};
    auto nb = graph_.neighbours(*i, dir);
    // Node indices follow term order, so index order is the tie-break.
    std::stable_sort(nb.begin(), nb.end(), [&](std::size_t a, std::size_t b) { return score(a, scorer) > score(b, scorer); });
    if (k && nb.size() > *k) nb.resize(*k);
    std::vector<Term> out;
    for (std::size_t j : nb) out.push_back(graph_.node(j));
    return out;
}

const char* to_string(Scorer s) {
    switch (s) {
        case Scorer::OutDegree: return "outdeg";
        case Scorer::InDegree: return "indeg";
        case Scorer::PageRank: return "pagerank";
        case Scorer::Hits: return "hits";
    }
    return "?";
}

const char* to_string(Direction d) {
    switch (d) {
        case Direction::In: return "in";
        case Direction::Out: return "out";
        case Direction::Bidi: return "bidi";
    }
    return "?";
}

std::string baseline_name(Scorer s, Direction d) { return std::string(to_string(s)) + " " + to_string(d); }

std::vector<MetricReport> evaluate_portfolio(Endpoint& ep, const Portfolio& portfolio, const GroundTruth& test) {
    std::vector<Term> sources;
    for (const auto& p : test) sources.push_back(p.source);
    auto preds = predict(ep, portfolio, sources);
    std::vector<MetricReport> out;
    for (auto s : kFusionStrategies) {
        std::vector<Rank> ranks;
        for (std::size_t i = 0; i < test.size(); ++i) ranks.push_back(rank_of_truth(preds[i][s], test[i].target));
        out.push_back(metrics(ranks, to_string(s)));
    }
    return out;
}

std::vector<MetricReport> evaluate_baselines(const BaselinePredictor& baselines, const GroundTruth& test) {
    std::vector<MetricReport> out;
    for (auto s : {Scorer::OutDegree, Scorer::InDegree, Scorer::PageRank, Scorer::Hits}) {
        for (auto d : {Direction::In, Direction::Out, Direction::Bidi}) {
            std::vector<Rank> ranks;
            for (const auto& p : test) ranks.push_back(rank_of_truth(baselines.predict(p.source, d, s), p.target));
            out.push_back(metrics(ranks, baseline_name(s, d)));
        }
    }
    return out;
}

std::string format_table(const std::vector<MetricReport>& rows) {
    std::size_t width = 4;
    for (const auto& r : rows) width = std::max(width, r.name.size());
    std::string out;
    char buf[64];
    out += std::string(width, ' ');
    for (const char* h : {"R@1", "R@2", "R@3", "R@4", "R@5", "R@10", "MAP", "NDCG"}) {
        std::snprintf(buf, sizeof buf, "  %6s", h);
        out += buf;
    }
    out += "\n";
    for (const auto& r : rows) {
        out += std::string(width - r.name.size(), ' ') + r.name;
        for (double v : {r.recall(1), r.recall(2), r.recall(3), r.recall(4), r.recall(5), r.recall(10), r.map, r.ndcg}) {
            std::snprintf(buf, sizeof buf, "  %6.3f", v);
            out += buf;
        }
        out += "\n";
    }
    return out;
}

}  // namespace bgpl
