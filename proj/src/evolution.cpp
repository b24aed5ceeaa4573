#include "bgpl/evolution.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <set>
#include <stdexcept>
#include <thread>

#include "bgpl/canon.hpp"
#include "bgpl/simplify.hpp"

namespace bgpl {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

bool contains_triple(const GraphPattern& gp, const TriplePattern& t) {
    return std::binary_search(gp.begin(), gp.end(), t);
}

// Fresh variable names avoiding the pattern and each other.
class FreshNames {
public:
    explicit FreshNames(std::initializer_list<const GraphPattern*> gps) {
        for (const auto* gp : gps) {
            for (const auto& v : gp->variables()) taken_.insert(v.name);
        }
    }
    Variable next(const std::string& prefix) {
        for (std::size_t i = 0;; ++i) {
            std::string name = prefix + std::to_string(i);
            if (taken_.insert(name).second) return Variable{name};
        }
    }

private:
    std::set<std::string> taken_;
};

std::vector<Variable> free_variables(const GraphPattern& gp) {
    std::vector<Variable> out;
    for (const auto& v : gp.variables()) {
        if (!is_reserved(v)) out.push_back(v);
    }
    return out;
}

bool literal(const Node& n) { return !is_var(n) && term_of(n).is_literal(); }

std::uint64_t run_seed(std::uint64_t seed, std::size_t run) {
    // splitmix64 finalizer over seed and run index
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t>(run) + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

void validate(const EvolutionConfig& c) {
    auto prob = [](double p, const char* name) {
        if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument(std::string(name) + " must lie in [0,1]");
    };
    auto size = [](std::size_t n, const char* name) {
        if (n == 0) throw std::invalid_argument(std::string(name) + " must be at least 1");
    };
    prob(c.mating_prob, "mating_prob");
    prob(c.p_dominant, "p_dominant");
    prob(c.p_recessive, "p_recessive");
    prob(c.rename_prob, "rename_prob");
    prob(c.edge_flip_prob, "edge_flip_prob");
    prob(c.fragment_fraction, "fragment_fraction");
    prob(c.init_fix_var_prob, "init_fix_var_prob");
    const auto& m = c.mutation;
    prob(m.introduce_var, "mutation.introduce_var");
    prob(m.split_var, "mutation.split_var");
    prob(m.merge_var, "mutation.merge_var");
    prob(m.del_triple, "mutation.del_triple");
    prob(m.expand_node, "mutation.expand_node");
    prob(m.add_edge, "mutation.add_edge");
    prob(m.increase_dist, "mutation.increase_dist");
    prob(m.simplify, "mutation.simplify");
    prob(m.fix_var, "mutation.fix_var");
    if (!(c.path_decay > 0.0)) throw std::invalid_argument("path_decay must be positive");
    size(c.population_size, "population_size");
    size(c.max_generations, "max_generations");
    size(c.max_runs, "max_runs");
    size(c.tournament_size, "tournament_size");
    size(c.max_path_length, "max_path_length");
    size(c.fix_var_samples, "fix_var_samples");
    size(c.fix_var_children, "fix_var_children");
    size(c.max_length, "max_length");
    size(c.max_vars, "max_vars");
    size(c.hof_size, "hof_size");
    size(c.workers, "workers");
    if (c.reintro_fresh + c.reintro_hof > c.population_size) {
        throw std::invalid_argument("reintro_fresh + reintro_hof exceed population_size");
    }
    if (c.min_remains < 0) throw std::invalid_argument("min_remains must be non-negative");
    if (c.fitness.overfit_factor < 0 || c.fitness.overfit_factor > 1) {
        throw std::invalid_argument("overfit_factor must lie in [0,1]");
    }
}

bool fit_to_live(const GraphPattern& gp, const EvolutionConfig& cfg) {
    return !gp.empty() && gp.size() <= cfg.max_length && gp.variable_count() <= cfg.max_vars && gp.is_complete() &&
           gp.is_connected();
}

// ---- hall of fame ----

namespace {
bool fitter(const Individual& a, const Individual& b) {
    auto c = *a.fitness <=> *b.fitness;
    if (c != 0) return c > 0;
    return a.key < b.key;
}
}  // namespace

void HallOfFame::update(const std::vector<Individual>& individuals, const EvolutionConfig& cfg) {
    bool changed = false;
    for (const auto& ind : individuals) {
        if (!ind.evaluated() || !fit_to_live(ind.pattern, cfg)) continue;
        auto it = std::find_if(entries_.begin(), entries_.end(), [&](const Individual& e) { return e.key == ind.key; });
        if (it == entries_.end()) {
            entries_.push_back(ind);
            changed = true;
        } else if (*ind.fitness > *it->fitness) {
            *it = ind;
            changed = true;
        }
    }
    if (!changed) return;
    std::stable_sort(entries_.begin(), entries_.end(), fitter);
    if (entries_.size() > capacity_) entries_.resize(capacity_);
}

std::optional<FitnessTuple> HallOfFame::best() const {
    if (entries_.empty()) return std::nullopt;
    return entries_.front().fitness;
}

// ---- initial population ----

GraphPattern path_pattern(std::size_t length, const std::vector<bool>& flips) {
    if (length == 0) throw std::invalid_argument("path length must be positive");
    std::vector<Node> nodes{kSource};
    for (std::size_t i = 1; i < length; ++i) nodes.push_back(Variable{"n" + std::to_string(i)});
    nodes.push_back(kTarget);
    std::vector<TriplePattern> triples;
    for (std::size_t i = 0; i < length; ++i) {
        Node p = Variable{"p" + std::to_string(i + 1)};
        bool flip = i < flips.size() && flips[i];
        triples.push_back(flip ? TriplePattern{nodes[i + 1], p, nodes[i]} : TriplePattern{nodes[i], p, nodes[i + 1]});
    }
    return GraphPattern(std::move(triples));
}

std::vector<Individual> init_population(const SearchContext& ctx, Rng& rng, std::optional<std::size_t> count) {
    const auto& cfg = ctx.cfg;
    const std::size_t n = count.value_or(cfg.population_size);
    const auto fragments = static_cast<std::size_t>(std::floor(cfg.fragment_fraction * static_cast<double>(n)));
    std::vector<Individual> out;
    out.reserve(n);

    for (std::size_t i = 0; i < fragments; ++i) {
        Node r = rng.chance(0.5) ? Node{kSource} : Node{kTarget};
        Node p = Variable{"p1"}, v = Variable{"v1"};
        out.emplace_back(GraphPattern{rng.chance(0.5) ? TriplePattern{v, p, r} : TriplePattern{r, p, v}});
    }

    std::vector<double> length_weights;
    for (std::size_t l = 1; l <= cfg.max_path_length; ++l) {
        length_weights.push_back(std::pow(cfg.path_decay, static_cast<double>(l)));
    }
    while (out.size() < n) {
        std::size_t l = rng.weighted(length_weights) + 1;
        std::vector<bool> flips;
        for (std::size_t i = 0; i < l; ++i) flips.push_back(rng.chance(cfg.edge_flip_prob));
        GraphPattern gp = path_pattern(l, flips);
        if (rng.chance(cfg.init_fix_var_prob)) {
            auto children = fix_var(ctx, gp, rng);
            if (!children.empty()) {
                for (auto& c : children) {
                    if (out.size() == n) break;
                    out.emplace_back(std::move(c));
                }
                continue;
            }
        }
        out.emplace_back(std::move(gp));
    }
    return out;
}

// ---- mating ----

std::pair<GraphPattern, GraphPattern> mate(const GraphPattern& a, const GraphPattern& b, Rng& rng,
                                           const EvolutionConfig& cfg) {
    auto child = [&](const GraphPattern& dom, const GraphPattern& rec) {
        GraphPattern c;
        std::vector<TriplePattern> dom_rest, rec_rest;
        for (const auto& t : dom) {
            if (contains_triple(rec, t)) {
                c.insert(t);
            } else {
                dom_rest.push_back(t);
            }
        }
        for (const auto& t : rec) {
            if (!contains_triple(dom, t)) rec_rest.push_back(t);
        }
        for (const auto& t : dom_rest) {
            if (rng.chance(cfg.p_dominant)) c.insert(t);
        }
        const bool rename = rng.chance(cfg.rename_prob);
        std::vector<TriplePattern> picked;
        for (const auto& t : rec_rest) {
            if (rng.chance(cfg.p_recessive)) picked.push_back(t);
        }
        if (rename && !picked.empty()) {
            FreshNames names{&dom, &rec};
            std::map<Variable, Variable> renamed;
            auto sub = [&](Node& n) {
                if (!is_var(n) || is_reserved(n)) return;
                auto [it, fresh] = renamed.try_emplace(var_of(n));
                if (fresh) it->second = names.next("r");
                n = it->second;
            };
            for (auto& t : picked) {
                sub(t.s);
                sub(t.p);
                sub(t.o);
            }
        }
        for (auto& t : picked) c.insert(std::move(t));
        return c;
    };
    GraphPattern c1 = child(a, b);
    GraphPattern c2 = child(b, a);
    return {std::move(c1), std::move(c2)};
}

// ---- mutations ----

namespace mutation {

bool introduce_var(GraphPattern& gp, Rng& rng) {
    auto terms = gp.fixed_terms();
    if (terms.empty()) return false;
    const Term& t = rng.pick(terms);
    gp = gp.replace(Node{t}, Node{FreshNames{&gp}.next("v")});
    return true;
}

bool split_var(GraphPattern& gp, Rng& rng) {
    std::vector<Variable> candidates;
    for (const auto& v : free_variables(gp)) {
        if (gp.occurrences(Node{v}) >= 2) candidates.push_back(v);
    }
    if (candidates.empty()) return false;
    const Node v = rng.pick(candidates);
    FreshNames names{&gp};
    const Node a = names.next("v"), b = names.next("v");
    const std::size_t occ = gp.occurrences(v);
    std::vector<bool> side;
    do {
        side.clear();
        for (std::size_t i = 0; i < occ; ++i) side.push_back(rng.chance(0.5));
    } while (std::all_of(side.begin(), side.end(), [&](bool x) { return x == side[0]; }));
    std::size_t k = 0;
    auto sub = [&](const Node& n) { return n == v ? (side[k++] ? b : a) : n; };
    std::vector<TriplePattern> out;
    for (const auto& t : gp) {
        Node s = sub(t.s);
        Node p = sub(t.p);
        Node o = sub(t.o);
        out.push_back({std::move(s), std::move(p), std::move(o)});
    }
    gp = GraphPattern(std::move(out));
    return true;
}

bool merge_var(GraphPattern& gp, Rng& rng) {
    auto vars = free_variables(gp);
    if (vars.size() < 2) return false;
    std::size_t i = rng.index(vars.size());
    std::size_t j = rng.index(vars.size() - 1);
    if (j >= i) ++j;
    gp = gp.replace(Node{vars[j]}, Node{vars[i]});
    return true;
}

bool del_triple(GraphPattern& gp, Rng& rng) {
    if (gp.empty()) return false;
    TriplePattern t = gp.triples()[rng.index(gp.size())];
    gp.erase(t);
    return true;
}

bool expand_node(GraphPattern& gp, Rng& rng) {
    auto nodes = gp.nodes();
    if (nodes.empty()) return false;
    const Node n = rng.pick(nodes);
    bool outgoing = rng.chance(0.5);
    if (literal(n)) outgoing = false;
    FreshNames names{&gp};
    Node p = names.next("p"), x = names.next("v");
    gp.insert(outgoing ? TriplePattern{n, p, x} : TriplePattern{x, p, n});
    return true;
}

bool add_edge(GraphPattern& gp, Rng& rng) {
    auto nodes = gp.nodes();
    if (nodes.size() < 2) return false;
    std::size_t i = rng.index(nodes.size());
    std::size_t j = rng.index(nodes.size() - 1);
    if (j >= i) ++j;
    Node s = nodes[i], o = nodes[j];
    if (rng.chance(0.5)) std::swap(s, o);
    if (literal(s)) std::swap(s, o);
    if (literal(s)) return false;
    for (const auto& t : gp) {
        if (t.s == s && t.o == o) return false;
    }
    gp.insert({s, FreshNames{&gp}.next("p"), o});
    return true;
}

bool increase_dist(GraphPattern& gp, Rng& rng) {
    std::vector<Variable> present;
    for (const auto& r : {kSource, kTarget}) {
        if (gp.contains(r)) present.push_back(r);
    }
    if (present.empty()) return false;
    const Node r = rng.pick(present);
    FreshNames names{&gp};
    Node n = names.next("n"), p = names.next("p");
    GraphPattern out = gp.replace(r, n);
    out.insert(rng.chance(0.5) ? TriplePattern{r, p, n} : TriplePattern{n, p, r});
    gp = std::move(out);
    return true;
}

bool simplify(GraphPattern& gp) {
    GraphPattern s = bgpl::simplify(gp);
    if (s == gp) return false;
    gp = std::move(s);
    return true;
}

}  // namespace mutation

// ---- fix-var ----

std::vector<std::size_t> sample_pairs(const CoverageLedger& ledger, std::size_t m, Rng& rng) {
    std::vector<std::size_t> remaining(ledger.size());
    for (std::size_t i = 0; i < remaining.size(); ++i) remaining[i] = i;
    std::vector<std::size_t> out;
    while (out.size() < m && !remaining.empty()) {
        std::vector<double> w;
        w.reserve(remaining.size());
        bool any = false;
        for (std::size_t i : remaining) {
            w.push_back(std::max(0.0, 1.0 - ledger[i]));
            any = any || w.back() > 0;
        }
        std::size_t k = any ? rng.weighted(w) : rng.index(remaining.size());
        out.push_back(remaining[k]);
        remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(k));
    }
    return out;
}

FixVarCandidates fix_var_candidates(const SearchContext& ctx, const GraphPattern& gp, const Variable& v,
                                    const std::vector<std::size_t>& pairs) {
    FixVarCandidates out;
    out.var = v;
    out.pairs = pairs;
    if (pairs.empty()) return out;
    ValuesTable values{{kSource, kTarget}, {}};
    for (std::size_t i : pairs) values.rows.push_back({ctx.gt[i].source, ctx.gt[i].target});
    const std::size_t limit = ctx.endpoint.config().result_limit * pairs.size();
    EvalResult r = ctx.endpoint.run_select(gp, {kSource, kTarget, v}, values, limit);
    out.status = r.status;
    std::map<Term, std::size_t> counts;
    for (const auto& row : r.rows) {
        if (!row[2].is_blank()) ++counts[row[2]];
    }
    out.counts.assign(counts.begin(), counts.end());
    return out;
}

std::vector<GraphPattern> fix_var(const SearchContext& ctx, const GraphPattern& gp, Rng& rng) {
    auto vars = free_variables(gp);
    if (vars.empty() || ctx.gt.empty()) return {};
    const Variable v = rng.pick(vars);
    auto pairs = sample_pairs(ctx.ledger, ctx.cfg.fix_var_samples, rng);
    FixVarCandidates cands = fix_var_candidates(ctx, gp, v, pairs);
    if (cands.status != EvalStatus::Complete) return {};

    bool as_subject = false, as_predicate = false;
    for (const auto& t : gp) {
        as_subject = as_subject || t.s == Node{v};
        as_predicate = as_predicate || t.p == Node{v};
    }
    std::vector<Term> terms;
    std::vector<double> weights;
    for (const auto& [t, n] : cands.counts) {
        if (as_subject && t.is_literal()) continue;
        if (as_predicate && !t.is_iri()) continue;
        terms.push_back(t);
        weights.push_back(static_cast<double>(n));
    }
    std::vector<GraphPattern> children;
    while (children.size() < ctx.cfg.fix_var_children && !terms.empty()) {
        std::size_t k = rng.weighted(weights);
        children.push_back(gp.replace(Node{v}, Node{terms[k]}));
        terms.erase(terms.begin() + static_cast<std::ptrdiff_t>(k));
        weights.erase(weights.begin() + static_cast<std::ptrdiff_t>(k));
    }
    return children;
}

std::vector<GraphPattern> mutate(const SearchContext& ctx, const GraphPattern& input, Rng& rng) {
    const auto& m = ctx.cfg.mutation;
    GraphPattern gp = input;
    if (rng.chance(m.introduce_var)) mutation::introduce_var(gp, rng);
    if (rng.chance(m.split_var)) mutation::split_var(gp, rng);
    if (rng.chance(m.merge_var)) mutation::merge_var(gp, rng);
    if (rng.chance(m.del_triple)) mutation::del_triple(gp, rng);
    if (rng.chance(m.expand_node)) mutation::expand_node(gp, rng);
    if (rng.chance(m.add_edge)) mutation::add_edge(gp, rng);
    if (rng.chance(m.increase_dist)) mutation::increase_dist(gp, rng);
    if (rng.chance(m.simplify)) mutation::simplify(gp);
    if (rng.chance(m.fix_var) && !gp.empty()) {
        auto children = fix_var(ctx, gp, rng);
        if (!children.empty()) return children;
    }
    return {std::move(gp)};
}

// ---- selection ----

std::size_t tournament(const std::vector<Individual>& pool, std::size_t k, Rng& rng) {
    std::size_t best = rng.index(pool.size());
    for (std::size_t i = 1; i < k; ++i) {
        std::size_t c = rng.index(pool.size());
        if (*pool[c].fitness > *pool[best].fitness) best = c;
    }
    return best;
}

std::vector<Individual> select_next(const std::vector<Individual>& pool, const HallOfFame& hof,
                                    const std::vector<Individual>& fresh, const EvolutionConfig& cfg, Rng& rng) {
    const std::size_t n = cfg.population_size;
    const std::size_t n_fresh = std::min({cfg.reintro_fresh, fresh.size(), n});
    const std::size_t n_hof = std::min(cfg.reintro_hof, hof.size());
    const std::size_t n_tour = n > n_fresh + n_hof ? n - n_fresh - n_hof : 0;
    std::vector<Individual> next;
    next.reserve(n);
    if (!pool.empty()) {
        for (std::size_t i = 0; i < n_tour; ++i) next.push_back(pool[tournament(pool, cfg.tournament_size, rng)]);
    }
    for (std::size_t i = 0; i < n_fresh; ++i) next.push_back(fresh[i]);
    for (std::size_t i = 0; i < n_hof && next.size() < n; ++i) next.push_back(hof.entries()[i]);
    if (next.size() > n) next.resize(n);
    return next;
}

// ---- evaluation ----

std::shared_ptr<const PatternEvaluation> Evaluator::lookup(const std::string& key) {
    std::lock_guard lock(mutex_);
    auto it = memo_.find(key);
    return it == memo_.end() ? nullptr : it->second;
}

void Evaluator::evaluate(std::vector<Individual>& individuals, const CoverageLedger& ledger) {
    struct Job {
        std::string key;
        const GraphPattern* pattern;
        std::shared_ptr<const PatternEvaluation> result;
    };
    std::vector<Job> jobs;
    std::set<std::string> queued;
    for (auto& ind : individuals) {
        if (ind.evaluated()) continue;
        if (ind.key.empty()) ind.key = canonical_key(ind.pattern);
        if (!fit_to_live(ind.pattern, cfg_) || lookup(ind.key) || !queued.insert(ind.key).second) continue;
        jobs.push_back({ind.key, &ind.pattern, nullptr});
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto work = [&] {
        for (std::size_t i = next++; i < jobs.size(); i = next++) {
            try {
                jobs[i].result = std::make_shared<const PatternEvaluation>(evaluate_pattern(ep_, *jobs[i].pattern, gt_));
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
                next = jobs.size();
            }
        }
    };
    const std::size_t threads = std::min(cfg_.workers, jobs.size());
    if (threads <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    if (error) std::rethrow_exception(error);
    {
        std::lock_guard lock(mutex_);
        for (auto& j : jobs) memo_.emplace(j.key, std::move(j.result));
    }

    for (auto& ind : individuals) {
        if (ind.evaluated()) continue;
        auto e = lookup(ind.key);
        if (!e) {
            // Not queried: every metric stays 0.
            auto zero = std::make_shared<PatternEvaluation>();
            zero->pv.assign(gt_.size(), 0.0);
            zero->covered.assign(gt_.size(), false);
            zero->result_len.assign(gt_.size(), 0);
            zero->complete = ind.pattern.is_complete();
            e = std::move(zero);
        }
        ind.evaluation = e;
        ind.fitness = fitness(ind.pattern, *e, ledger, cfg_.fitness);
    }
}

Evaluated Evaluator::evaluate(const GraphPattern& gp, const CoverageLedger& ledger) {
    std::vector<Individual> one{Individual(gp)};
    evaluate(one, ledger);
    return {*one[0].evaluation, *one[0].fitness};
}

// ---- driver ----

namespace {

GenerationRecord record_generation(std::size_t g, const std::vector<Individual>& pop, const HallOfFame& hof,
                                   const EvolutionConfig& cfg, Clock::time_point t0) {
    GenerationRecord rec;
    rec.generation = g;
    rec.population = pop.size();
    for (const auto& ind : pop) rec.unfit += !fit_to_live(ind.pattern, cfg);
    rec.hof_best = hof.best();
    std::vector<const Individual*> order;
    for (const auto& ind : pop) order.push_back(&ind);
    std::stable_sort(order.begin(), order.end(), [](const Individual* a, const Individual* b) { return fitter(*a, *b); });
    std::set<std::string> keys;
    for (const auto* ind : order) {
        if (!keys.insert(ind->key).second) continue;
        if (rec.best.size() < cfg.snapshot_size) {
            rec.best.push_back({ind->pattern.to_string(), ind->key, *ind->fitness, ind->evaluation->pv});
        }
    }
    rec.distinct = keys.size();
    rec.wall_s = seconds_since(t0);
    return rec;
}

}  // namespace

HallOfFame run_evolution(const SearchContext& ctx, Evaluator& evaluator, Rng& rng, RunRecord& record) {
    const auto& cfg = ctx.cfg;
    HallOfFame hof(cfg.hof_size);
    auto t0 = Clock::now();

    std::vector<Individual> population = init_population(ctx, rng);
    evaluator.evaluate(population, ctx.ledger);
    hof.update(population, cfg);
    record.generations.push_back(record_generation(0, population, hof, cfg, t0));

    for (std::size_t g = 1; g <= cfg.max_generations; ++g) {
        t0 = Clock::now();
        std::vector<Individual> offspring = population;

        for (std::size_t i = 0; i + 1 < offspring.size(); i += 2) {
            if (!rng.chance(cfg.mating_prob)) continue;
            auto [c1, c2] = mate(offspring[i].pattern, offspring[i + 1].pattern, rng, cfg);
            // An unfit child leaves its dominant parent in place.
            if (fit_to_live(c1, cfg) && c1 != offspring[i].pattern) offspring[i].set_pattern(std::move(c1));
            if (fit_to_live(c2, cfg) && c2 != offspring[i + 1].pattern) offspring[i + 1].set_pattern(std::move(c2));
        }

        std::vector<Individual> extra;
        for (auto& ind : offspring) {
            auto mutants = mutate(ctx, ind.pattern, rng);
            bool replaced = false;
            for (auto& m : mutants) {
                if (m == ind.pattern || !fit_to_live(m, cfg)) continue;
                if (!replaced) {
                    ind.set_pattern(std::move(m));
                    replaced = true;
                } else {
                    extra.emplace_back(std::move(m));
                }
            }
        }
        for (auto& e : extra) offspring.push_back(std::move(e));

        evaluator.evaluate(offspring, ctx.ledger);
        hof.update(offspring, cfg);

        std::vector<Individual> fresh;
        if (cfg.reintro_fresh > 0) {
            fresh = init_population(ctx, rng, cfg.reintro_fresh);
            evaluator.evaluate(fresh, ctx.ledger);
            hof.update(fresh, cfg);
        }
        population = select_next(offspring, hof, fresh, cfg, rng);
        record.generations.push_back(record_generation(g, population, hof, cfg, t0));
    }
    return hof;
}

LearnResult learn(Endpoint& ep, const GroundTruth& gt, const EvolutionConfig& cfg, const LearnOptions& opts) {
    validate(cfg);
    LearnResult result;
    result.ledger = opts.ledger.value_or(CoverageLedger(gt.size()));
    if (result.ledger.size() != gt.size()) throw std::invalid_argument("ledger size differs from ground truth size");
    result.patterns = opts.previous;
    std::set<std::string> accepted_keys;
    for (const auto& p : result.patterns) accepted_keys.insert(p.key);

    std::vector<Term> sources;
    for (const auto& p : gt) sources.push_back(p.source);
    std::sort(sources.begin(), sources.end());
    sources.erase(std::unique(sources.begin(), sources.end()), sources.end());

    Evaluator evaluator(ep, gt, cfg);
    for (std::size_t run = opts.first_run; run <= cfg.max_runs; ++run) {
        auto t0 = Clock::now();
        RunRecord rec;
        rec.run = run;
        rec.remains_before = result.ledger.remains();
        try {
            Rng rng(run_seed(cfg.seed, run));
            SearchContext ctx{ep, gt, result.ledger, cfg};
            HallOfFame hof = run_evolution(ctx, evaluator, rng, rec);

            EquivalenceCheck verify;
            if (cfg.verify_simplify) verify = projection_verifier(ep, sources);
            for (const auto& entry : hof.entries()) {
                if (!(entry.fitness->score > cfg.accept_score)) continue;
                AcceptedPattern a{entry.pattern, entry.key, *entry.evaluation, *entry.fitness, run};
                GraphPattern s = simplify(entry.pattern, verify);
                if (s != entry.pattern && fit_to_live(s, cfg)) {
                    Evaluated e = evaluator.evaluate(s, result.ledger);
                    if (e.fitness.score > cfg.accept_score) a = {s, canonical_key(s), e.evaluation, e.fitness, run};
                }
                if (!accepted_keys.insert(a.key).second) continue;
                rec.accepted.push_back(std::move(a));
            }
        } catch (const EndpointUnreachable& e) {
            result.aborted = true;
            result.error = e.what();
            break;
        }

        std::vector<const std::vector<double>*> pvs;
        for (const auto& a : rec.accepted) pvs.push_back(&a.evaluation.pv);
        result.ledger.update(pvs);
        rec.remains_after = result.ledger.remains();
        rec.wall_s = seconds_since(t0);
        for (const auto& a : rec.accepted) result.patterns.push_back(a);
        result.runs.push_back(std::move(rec));
        if (opts.on_run) opts.on_run(result.runs.back(), result);
        if (result.ledger.remains() < cfg.min_remains) break;
    }
    return result;
}

}  // namespace bgpl
