#include "bgpl/predict.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

namespace bgpl {

Portfolio Portfolio::from(const std::vector<AcceptedPattern>& accepted) {
    Portfolio p;
    for (const auto& a : accepted) p.patterns.push_back({a.pattern, a.key, a.evaluation.pv, a.fitness});
    p.select_all();
    return p;
}

void Portfolio::select_all() {
    representatives.resize(patterns.size());
    std::iota(representatives.begin(), representatives.end(), std::size_t{0});
    variant = "all";
    k = patterns.size();
    loss = 0.0;
}

namespace {

std::vector<double> column_max(const std::vector<std::vector<double>>& pvs, const std::vector<std::size_t>* subset) {
    std::vector<double> best;
    auto take = [&](const std::vector<double>& pv) {
        if (best.size() < pv.size()) best.resize(pv.size(), 0.0);
        for (std::size_t i = 0; i < pv.size(); ++i) best[i] = std::max(best[i], pv[i]);
    };
    if (subset) {
        for (std::size_t j : *subset) take(pvs.at(j));
    } else {
        for (const auto& pv : pvs) take(pv);
    }
    return best;
}

}  // namespace

double precision_mass(const std::vector<std::vector<double>>& pvs) {
    double s = 0;
    for (double v : column_max(pvs, nullptr)) s += v;
    return s;
}

double precision_loss(const std::vector<std::vector<double>>& pvs, const std::vector<std::size_t>& selected) {
    auto all = column_max(pvs, nullptr);
    auto sel = column_max(pvs, &selected);
    sel.resize(all.size(), 0.0);
    double loss = 0;
    for (std::size_t i = 0; i < all.size(); ++i) loss += all[i] - sel[i];
    return loss;
}

// ---- Ward clustering ----

std::vector<Merge> ward_linkage(const std::vector<std::vector<double>>& points) {
    const std::size_t n = points.size();
    if (n < 2) return {};
    // Squared Euclidean distances, updated in place as clusters merge.
    std::vector<double> d(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            double s = 0;
            const auto& a = points[i];
            const auto& b = points[j];
            if (a.size() != b.size()) throw std::invalid_argument("points differ in dimension");
            for (std::size_t k = 0; k < a.size(); ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
            d[i * n + j] = d[j * n + i] = s;
        }
    }
    auto D = [&](std::size_t i, std::size_t j) -> double& { return d[i * n + j]; };

    std::vector<std::size_t> size(n, 1);
    std::vector<std::size_t> member(n);  // smallest point of the cluster held by each slot
    std::iota(member.begin(), member.end(), std::size_t{0});
    std::vector<bool> active(n, true);
    struct Raw {
        std::size_t a, b;
        double height;
    };
    std::vector<Raw> raw;
    std::vector<std::size_t> chain;

    for (std::size_t remaining = n; remaining > 1;) {
        if (chain.empty()) {
            for (std::size_t i = 0; i < n; ++i) {
                if (active[i]) {
                    chain.push_back(i);
                    break;
                }
            }
        }
        const std::size_t a = chain.back();
        const std::size_t prev = chain.size() >= 2 ? chain[chain.size() - 2] : n;
        std::size_t b = prev;
        double best = prev < n ? D(a, prev) : std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < n; ++i) {
            if (!active[i] || i == a) continue;
            if (D(a, i) < best) {
                best = D(a, i);
                b = i;
            }
        }
        if (b != prev) {
            chain.push_back(b);
            continue;
        }
        // a and b are reciprocal nearest neighbours: merge b into a's slot.
        chain.pop_back();
        chain.pop_back();
        const std::size_t lo = std::min(a, b), hi = std::max(a, b);
        raw.push_back({member[lo], member[hi], std::sqrt(best)});
        const double dab = best;
        const double na = static_cast<double>(size[lo]), nb = static_cast<double>(size[hi]);
        for (std::size_t k = 0; k < n; ++k) {
            if (!active[k] || k == lo || k == hi) continue;
            const double nk = static_cast<double>(size[k]);
            double v = ((na + nk) * D(lo, k) + (nb + nk) * D(hi, k) - nk * dab) / (na + nb + nk);
            D(lo, k) = D(k, lo) = v;
        }
        size[lo] += size[hi];
        member[lo] = std::min(member[lo], member[hi]);
        active[hi] = false;
        --remaining;
    }

    std::stable_sort(raw.begin(), raw.end(), [](const Raw& x, const Raw& y) { return x.height < y.height; });
    // Replay in height order to number the clusters.
    std::vector<std::size_t> parent(n), id(n), count(n, 1);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    std::iota(id.begin(), id.end(), std::size_t{0});
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    std::vector<Merge> out;
    for (std::size_t s = 0; s < raw.size(); ++s) {
        std::size_t ra = find(raw[s].a), rb = find(raw[s].b);
        Merge m{std::min(id[ra], id[rb]), std::max(id[ra], id[rb]), raw[s].height, count[ra] + count[rb]};
        parent[rb] = ra;
        count[ra] = m.size;
        id[ra] = n + s;
        out.push_back(m);
    }
    return out;
}

std::vector<std::size_t> cut_tree(const std::vector<Merge>& merges, std::size_t n, std::size_t k) {
    if (k == 0 || (n > 0 && k > n)) throw std::invalid_argument("cut_tree: k out of range");
    std::vector<std::size_t> parent(n + merges.size());
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (std::size_t s = 0; s + k < n && s < merges.size(); ++s) {
        parent[find(merges[s].a)] = n + s;
        parent[find(merges[s].b)] = n + s;
    }
    std::map<std::size_t, std::size_t> label_of_root;
    std::vector<std::size_t> labels(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto [it, fresh] = label_of_root.try_emplace(find(i), label_of_root.size());
        labels[i] = it->second;
    }
    return labels;
}

std::vector<std::vector<double>> max_scaled(const std::vector<std::vector<double>>& points) {
    auto mx = column_max(points, nullptr);
    std::vector<std::vector<double>> out;
    for (const auto& p : points) {
        std::vector<double> q;
        for (std::size_t i = 0; i < mx.size(); ++i) {
            if (mx[i] > 0) q.push_back(p[i] / mx[i]);
        }
        out.push_back(std::move(q));
    }
    return out;
}

std::vector<std::size_t> representatives(const std::vector<PortfolioEntry>& patterns,
                                         const std::vector<std::size_t>& labels) {
    std::map<std::size_t, std::size_t> best;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        auto [it, fresh] = best.try_emplace(labels[i], i);
        if (fresh) continue;
        const auto& cur = patterns[it->second].fitness;
        const auto& cand = patterns[i].fitness;
        if (cand.score > cur.score || (cand.score == cur.score && cand > cur)) it->second = i;
    }
    std::vector<std::size_t> out;
    for (const auto& [label, i] : best) out.push_back(i);
    std::sort(out.begin(), out.end());
    return out;
}

Reduction reduce_queries(const std::vector<PortfolioEntry>& patterns, std::size_t k) {
    if (k == 0) throw std::invalid_argument("K must be at least 1");
    if (patterns.empty()) throw std::invalid_argument("no patterns to reduce");
    Reduction r;
    if (k >= patterns.size()) {
        r.representatives.resize(patterns.size());
        std::iota(r.representatives.begin(), r.representatives.end(), std::size_t{0});
        r.variant = "all";
        return r;
    }
    std::vector<std::vector<double>> pvs;
    for (const auto& p : patterns) pvs.push_back(p.pv);
    const std::pair<const char*, std::vector<std::vector<double>>> variants[] = {{"ward", pvs},
                                                                                {"ward_scaled", max_scaled(pvs)}};
    bool first = true;
    for (const auto& [name, points] : variants) {
        auto labels = cut_tree(ward_linkage(points), points.size(), k);
        auto reps = representatives(patterns, labels);
        double loss = precision_loss(pvs, reps);
        if (first || loss < r.loss) {
            r = {std::move(reps), name, loss};
            first = false;
        }
    }
    return r;
}

void reduce_queries(Portfolio& portfolio, std::size_t k) {
    Reduction r = reduce_queries(portfolio.patterns, k);
    portfolio.representatives = std::move(r.representatives);
    portfolio.variant = r.variant;
    portfolio.k = k;
    portfolio.loss = r.loss;
}

// ---- prediction ----

std::vector<std::vector<std::vector<Term>>> predict_targets(Endpoint& ep, const std::vector<GraphPattern>& patterns,
                                                            const std::vector<Term>& sources) {
    std::vector<std::vector<std::vector<Term>>> out(sources.size(), std::vector<std::vector<Term>>(patterns.size()));
    if (sources.empty()) return out;
    std::map<Term, std::vector<std::size_t>> slots;
    ValuesTable values{{kSource}, {}};
    for (std::size_t s = 0; s < sources.size(); ++s) {
        auto& v = slots[sources[s]];
        if (v.empty()) values.rows.push_back({sources[s]});
        v.push_back(s);
    }
    for (std::size_t j = 0; j < patterns.size(); ++j) {
        if (!patterns[j].is_complete()) continue;
        const std::size_t limit = ep.config().result_limit * values.rows.size();
        EvalResult r = ep.run_select(patterns[j], {kSource, kTarget}, values, limit);
        if (r.timed_out()) continue;
        std::map<Term, std::set<Term>> by_source;
        for (const auto& row : r.rows) by_source[row[0]].insert(row[1]);
        for (auto& [src, targets] : by_source) {
            auto it = slots.find(src);
            if (it == slots.end()) continue;
            for (std::size_t s : it->second) out[s][j].assign(targets.begin(), targets.end());
        }
    }
    return out;
}

std::vector<std::vector<Term>> predict_targets(Endpoint& ep, const std::vector<GraphPattern>& patterns,
                                               const Term& source) {
    return predict_targets(ep, patterns, std::vector<Term>{source}).front();
}

const char* to_string(FusionStrategy s) {
    switch (s) {
        case FusionStrategy::TargetOccs: return "target_occs";
        case FusionStrategy::Scores: return "scores";
        case FusionStrategy::FMeasures: return "f_measures";
        case FusionStrategy::GpPrecisions: return "gp_precisions";
        case FusionStrategy::Precisions: return "precisions";
    }
    return "?";
}

std::optional<FusionStrategy> parse_fusion_strategy(std::string_view name) {
    for (auto s : kFusionStrategies) {
        if (name == to_string(s)) return s;
    }
    return std::nullopt;
}

RankedPrediction fuse(const Term& source, const std::vector<std::vector<Term>>& sets,
                      const std::vector<const PortfolioEntry*>& patterns) {
    if (sets.size() != patterns.size()) throw std::invalid_argument("fuse: one target set per pattern expected");
    std::map<Term, std::array<double, 5>> acc;
    for (std::size_t j = 0; j < sets.size(); ++j) {
        const auto& set = sets[j];
        if (set.empty()) continue;
        const auto& f = patterns[j]->fitness;
        const double share = 1.0 / static_cast<double>(set.size());
        for (const auto& t : std::set<Term>(set.begin(), set.end())) {
            auto& v = acc.try_emplace(t, std::array<double, 5>{}).first->second;
            v[0] += 1.0;
            v[1] += f.score;
            v[2] += f.f1;
            v[3] += f.precision();
            v[4] += share;
        }
    }
    RankedPrediction out;
    out.source = source;
    for (std::size_t s = 0; s < 5; ++s) {
        auto& list = out.lists[s];
        for (const auto& [t, v] : acc) list.push_back({t, v[s]});
        std::stable_sort(list.begin(), list.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
    }
    return out;
}

std::vector<RankedPrediction> predict(Endpoint& ep, const Portfolio& portfolio, const std::vector<Term>& sources) {
    std::vector<GraphPattern> patterns;
    std::vector<const PortfolioEntry*> entries;
    for (std::size_t i : portfolio.representatives) {
        patterns.push_back(portfolio.patterns.at(i).pattern);
        entries.push_back(&portfolio.patterns[i]);
    }
    auto sets = predict_targets(ep, patterns, sources);
    std::vector<RankedPrediction> out;
    for (std::size_t s = 0; s < sources.size(); ++s) out.push_back(fuse(sources[s], sets[s], entries));
    return out;
}

}  // namespace bgpl
