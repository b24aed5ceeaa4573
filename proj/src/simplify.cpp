#include "bgpl/simplify.hpp"

#include <map>
#include <set>

namespace bgpl {

namespace {

bool is_slot(const Node& n) { return is_var(n) || term_of(n).is_blank(); }

bool fresh(const GraphPattern& gp, const Node& n) {
    return is_slot(n) && !is_reserved(n) && gp.occurrences(n) == 1;
}

// (a): some other triple agrees with t wherever t does not hold a fresh variable.
bool subsumed(const GraphPattern& gp, const TriplePattern& t) {
    const Node* tn[3] = {&t.s, &t.p, &t.o};
    for (const auto& u : gp) {
        if (u == t) continue;
        const Node* un[3] = {&u.s, &u.p, &u.o};
        bool ok = true;
        for (int k = 0; k < 3 && ok; ++k) ok = *tn[k] == *un[k] || fresh(gp, *tn[k]);
        if (ok) return true;
    }
    return false;
}

// (b): components over shared variables only; fixed terms do not connect.
bool detached(const GraphPattern& gp, const TriplePattern& t) {
    std::map<Node, Node> parent;
    auto find = [&](Node n) {
        while (parent.at(n) != n) n = parent.at(n);
        return n;
    };
    for (const auto& u : gp) {
        for (const Node* n : {&u.s, &u.p, &u.o}) {
            if (is_slot(*n)) parent.emplace(*n, *n);
        }
    }
    for (const auto& u : gp) {
        std::optional<Node> first;
        for (const Node* n : {&u.s, &u.p, &u.o}) {
            if (!is_slot(*n)) continue;
            if (!first) {
                first = find(*n);
            } else {
                Node r = find(*n);
                if (r != *first) parent[r] = *first;
            }
        }
    }
    std::set<Node> anchored;
    for (const Node& r : {Node{kSource}, Node{kTarget}}) {
        if (parent.count(r)) anchored.insert(find(r));
    }
    for (const Node* n : {&t.s, &t.p, &t.o}) {
        if (is_slot(*n) && anchored.count(find(*n))) return false;
    }
    return true;
}

// (c): a dangling edge with fresh predicate and fresh far end.
bool unrestricting_leaf(const GraphPattern& gp, const TriplePattern& t) {
    if (!fresh(gp, t.p)) return false;
    return (fresh(gp, t.o) && t.o != t.p) || (fresh(gp, t.s) && t.s != t.p);
}

using Rule = bool (*)(const GraphPattern&, const TriplePattern&);

}  // namespace

GraphPattern simplify(const GraphPattern& input, const EquivalenceCheck& verify) {
    GraphPattern gp = input;
    const bool keep_complete = input.is_complete();
    const bool keep_connected = input.is_connected();
    const Rule rules[] = {subsumed, detached, unrestricting_leaf};
    std::set<TriplePattern> rejected;  // verification failures for the current pattern

    bool changed = true;
    while (changed) {
        changed = false;
        for (Rule rule : rules) {
            for (const auto& t : gp) {
                if (rejected.count(t) || !rule(gp, t)) continue;
                GraphPattern next = gp;
                next.erase(t);
                if (next.empty()) continue;
                if (keep_complete && !next.is_complete()) continue;
                if (keep_connected && !next.is_connected()) continue;
                if (verify && !verify(gp, next)) {
                    rejected.insert(t);
                    continue;
                }
                gp = std::move(next);
                rejected.clear();
                changed = true;
                break;
            }
            if (changed) break;
        }
    }
    return gp;
}

EquivalenceCheck projection_verifier(std::shared_ptr<Endpoint> ep, std::optional<std::vector<Term>> sources) {
    auto check = projection_verifier(*ep, std::move(sources));
    return [ep = std::move(ep), check = std::move(check)](const GraphPattern& a, const GraphPattern& b) {
        return check(a, b);
    };
}

EquivalenceCheck projection_verifier(Endpoint& endpoint, std::optional<std::vector<Term>> sources) {
    return [ep = &endpoint, sources = std::move(sources)](const GraphPattern& a, const GraphPattern& b) {
        std::optional<ValuesTable> values;
        if (sources) {
            ValuesTable vt{{kSource}, {}};
            for (const auto& s : *sources) vt.rows.push_back({s});
            values = std::move(vt);
        }
        EvalResult ra = ep->run_select(a, {kSource, kTarget}, values);
        EvalResult rb = ep->run_select(b, {kSource, kTarget}, values);
        if (ra.timed_out() || rb.timed_out()) return false;
        std::set<std::vector<Term>> sa(ra.rows.begin(), ra.rows.end()), sb(rb.rows.begin(), rb.rows.end());
        return sa == sb;
    };
}

}  // namespace bgpl
