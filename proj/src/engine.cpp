#include "bgpl/engine.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <map>
#include <set>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace bgpl {

const char* to_string(EvalStatus s) {
    switch (s) {
        case EvalStatus::Complete: return "complete";
        case EvalStatus::SoftTimeout: return "soft_timeout";
        case EvalStatus::HardTimeout: return "hard_timeout";
    }
    return "?";
}

Binding EvalResult::binding(std::size_t row) const {
    Binding b;
    for (std::size_t c = 0; c < columns.size(); ++c) b.emplace(columns[c], rows.at(row)[c]);
    return b;
}

namespace {

constexpr TermId kMissing = kUnbound - 1;

bool is_slot_node(const Node& n) { return !is_fixed(n); }

double estimate(const TripleStore& store, const TriplePattern& t, const std::set<Node>& bound) {
    std::array<const Node*, 3> pos{&t.s, &t.p, &t.o};
    std::array<TermId, 3> ids{kUnbound, kUnbound, kUnbound};
    double est = 0.0;
    for (int i = 0; i < 3; ++i) {
        const Node& n = *pos[i];
        if (is_fixed(n)) {
            auto id = store.lookup(term_of(n));
            if (!id) return 0.0;
            ids[i] = *id;
        }
    }
    est = static_cast<double>(store.match_ids(ids[0], ids[1], ids[2]).size());
    for (int i = 0; i < 3; ++i) {
        if (!is_fixed(*pos[i]) && bound.count(*pos[i])) {
            est /= static_cast<double>(std::max<std::size_t>(1, store.distinct_in_position(i)));
        }
    }
    return est;
}

bool shares_slot(const TriplePattern& t, const std::set<Node>& bound) {
    for (const Node* n : {&t.s, &t.p, &t.o}) {
        if (is_slot_node(*n) && bound.count(*n)) return true;
    }
    return false;
}

bool has_slot(const TriplePattern& t) { return is_slot_node(t.s) || is_slot_node(t.p) || is_slot_node(t.o); }

struct Position {
    bool is_slot;
    TermId value;  // term id when fixed, slot index otherwise
};

struct VecHash {
    std::size_t operator()(const std::vector<TermId>& v) const noexcept {
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (TermId x : v) {
            h ^= x;
            h *= 0x100000001b3ULL;
        }
        return static_cast<std::size_t>(h);
    }
};

class Evaluator {
public:
    Evaluator(const TripleStore& store, const SelectQuery& q, const EvalOptions& opts)
        : store_(store), query_(q), opts_(opts) {}

    EvalResult run() {
        auto start = std::chrono::steady_clock::now();
        EvalResult result;
        result.columns = query_.projection;
        if (opts_.hard_timeout_s <= 0.0) {
            result.status = EvalStatus::HardTimeout;
            return result;
        }
        if (opts_.soft_timeout_s <= 0.0) {
            result.status = EvalStatus::SoftTimeout;
            return result;
        }
        compile();
        hard_units_ = to_units(opts_.hard_timeout_s);
        soft_units_ = to_units(opts_.soft_timeout_s);
        start_ = start;

        if (query_.values) {
            std::vector<std::size_t> value_slots;
            for (const auto& v : query_.values->vars) value_slots.push_back(slot_of_.at(Node{v}));
            for (const auto& row : query_.values->rows) {
                if (row.size() != value_slots.size()) throw std::invalid_argument("VALUES row arity mismatch");
                std::fill(slots_.begin(), slots_.end(), kUnbound);
                bool consistent = true;
                for (std::size_t i = 0; i < row.size(); ++i) {
                    TermId id = intern(row[i]);
                    TermId& slot = slots_[value_slots[i]];
                    if (slot != kUnbound && slot != id) consistent = false;
                    slot = id;
                }
                if (!charge()) break;
                if (consistent) search(0);
                if (stop_ != Stop::None) break;
            }
        } else {
            std::fill(slots_.begin(), slots_.end(), kUnbound);
            search(0);
        }

        result.work = work_;
        if (stop_ == Stop::Hard) {
            result.status = EvalStatus::HardTimeout;
        } else {
            result.status = stop_ == Stop::Soft ? EvalStatus::SoftTimeout : EvalStatus::Complete;
            result.rows.reserve(rows_.size());
            for (const auto& r : rows_) {
                std::vector<Term> decoded;
                decoded.reserve(r.size());
                for (TermId id : r) decoded.push_back(decode(id));
                result.rows.push_back(std::move(decoded));
            }
        }
        if (opts_.clock == ClockMode::Work) {
            result.elapsed_s = static_cast<double>(work_) * kSecondsPerWorkUnit;
        } else {
            result.elapsed_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        }
        return result;
    }

private:
    enum class Stop { None, Soft, Hard, Limit };

    static std::uint64_t to_units(double seconds) {
        double units = seconds / kSecondsPerWorkUnit;
        if (!(units < 1.8e19)) return std::numeric_limits<std::uint64_t>::max();
        return static_cast<std::uint64_t>(units);
    }

    void compile() {
        const auto& gp = query_.pattern;
        if (gp.empty() && !query_.values) throw std::invalid_argument("degenerate query: empty pattern without VALUES");
        auto add_slot = [&](const Node& n) {
            if (!slot_of_.count(n)) {
                std::size_t idx = slot_of_.size();
                slot_of_.emplace(n, idx);
            }
        };
        std::vector<Variable> prebound;
        if (query_.values) {
            for (const auto& v : query_.values->vars) {
                add_slot(v);
                prebound.push_back(v);
            }
        }
        for (const auto& t : gp) {
            for (const Node* n : {&t.s, &t.p, &t.o}) {
                if (is_slot_node(*n)) add_slot(*n);
            }
        }
        for (const auto& v : query_.projection) {
            auto it = slot_of_.find(Node{v});
            if (it == slot_of_.end()) {
                throw std::invalid_argument("projection variable ?" + v.name + " not in pattern or VALUES");
            }
            projection_slots_.push_back(it->second);
        }
        slots_.assign(slot_of_.size(), kUnbound);

        std::vector<bool> bound(slot_of_.size(), false);
        for (const auto& v : prebound) bound[slot_of_.at(Node{v})] = true;
        for (const auto& t : join_plan(store_, gp, prebound)) {
            std::array<Position, 3> pos{};
            std::array<const Node*, 3> nodes{&t.s, &t.p, &t.o};
            for (int i = 0; i < 3; ++i) {
                if (is_slot_node(*nodes[i])) {
                    pos[i] = {true, static_cast<TermId>(slot_of_.at(*nodes[i]))};
                } else {
                    auto id = store_.lookup(term_of(*nodes[i]));
                    pos[i] = {false, id ? *id : kMissing};
                }
            }
            plan_.push_back(pos);
            existential_.push_back(std::all_of(projection_slots_.begin(), projection_slots_.end(),
                                               [&](std::size_t s) { return bound[s]; }));
            for (int i = 0; i < 3; ++i) {
                if (pos[i].is_slot) bound[pos[i].value] = true;
            }
        }
        existential_.push_back(true);
    }

    TermId intern(const Term& t) {
        if (auto id = store_.lookup(t)) return *id;
        auto it = external_ids_.find(t);
        if (it != external_ids_.end()) return it->second;
        TermId id = static_cast<TermId>(store_.term_count() + external_.size());
        external_.push_back(t);
        external_ids_.emplace(t, id);
        return id;
    }

    const Term& decode(TermId id) const {
        if (id < store_.term_count()) return store_.term(id);
        return external_.at(id - store_.term_count());
    }

    bool charge() {
        ++work_;
        if (opts_.clock == ClockMode::Work) {
            if (work_ >= hard_units_) {
                stop_ = Stop::Hard;
                return false;
            }
            if (work_ >= soft_units_) {
                stop_ = Stop::Soft;
                return false;
            }
            return true;
        }
        if ((work_ & 0xFF) == 0) {
            double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
            if (elapsed >= opts_.hard_timeout_s) {
                stop_ = Stop::Hard;
                return false;
            }
            if (elapsed >= opts_.soft_timeout_s) {
                stop_ = Stop::Soft;
                return false;
            }
        }
        return true;
    }

    void emit() {
        std::vector<TermId> row;
        row.reserve(projection_slots_.size());
        for (std::size_t s : projection_slots_) row.push_back(slots_[s]);
        if (seen_.insert(row).second) {
            rows_.push_back(std::move(row));
            if (query_.limit && rows_.size() >= *query_.limit) stop_ = Stop::Limit;
        }
    }

    bool search(std::size_t depth) {
        if (stop_ != Stop::None) return false;
        if (depth == plan_.size()) {
            emit();
            return true;
        }
        const auto& pos = plan_[depth];
        std::array<TermId, 3> ids{};
        for (int i = 0; i < 3; ++i) ids[i] = pos[i].is_slot ? slots_[pos[i].value] : pos[i].value;
        if (!charge()) return false;
        bool found = false;
        for (const IdTriple& t : store_.match_ids(ids[0], ids[1], ids[2])) {
            if (!charge()) return found;
            std::array<TermId, 3> vals{t.s, t.p, t.o};
            std::array<std::size_t, 3> newly{};
            std::size_t n_new = 0;
            bool ok = true;
            for (int i = 0; i < 3 && ok; ++i) {
                if (!pos[i].is_slot || ids[i] != kUnbound) continue;
                TermId& slot = slots_[pos[i].value];
                if (slot == kUnbound) {
                    slot = vals[i];
                    newly[n_new++] = pos[i].value;
                } else if (slot != vals[i]) {
                    ok = false;
                }
            }
            bool hit = ok && search(depth + 1);
            for (std::size_t k = 0; k < n_new; ++k) slots_[newly[k]] = kUnbound;
            if (hit) {
                found = true;
                if (existential_[depth]) return true;
            }
            if (stop_ != Stop::None) return found;
        }
        return found;
    }

    const TripleStore& store_;
    const SelectQuery& query_;
    const EvalOptions& opts_;
    std::map<Node, std::size_t> slot_of_;
    std::vector<std::size_t> projection_slots_;
    std::vector<std::array<Position, 3>> plan_;
    std::vector<bool> existential_;
    std::vector<TermId> slots_;
    std::vector<Term> external_;
    std::unordered_map<Term, TermId> external_ids_;
    std::unordered_set<std::vector<TermId>, VecHash> seen_;
    std::vector<std::vector<TermId>> rows_;
    std::uint64_t work_ = 0;
    std::uint64_t hard_units_ = 0;
    std::uint64_t soft_units_ = 0;
    std::chrono::steady_clock::time_point start_;
    Stop stop_ = Stop::None;
};

}  // namespace

std::vector<TriplePattern> join_plan(const TripleStore& store, const GraphPattern& gp,
                                     const std::vector<Variable>& prebound) {
    std::vector<TriplePattern> remaining(gp.begin(), gp.end());
    std::vector<TriplePattern> plan;
    std::set<Node> bound;
    for (const auto& v : prebound) bound.insert(v);
    // With nothing bound yet, start in the component of ?source (else ?target)
    // so that unrelated components end up last.
    std::set<Node> anchor;
    if (gp.contains(kSource)) {
        anchor.insert(kSource);
    } else if (gp.contains(kTarget)) {
        anchor.insert(kTarget);
    }
    while (!remaining.empty()) {
        const std::set<Node>& reach = bound.empty() ? anchor : bound;
        std::vector<std::size_t> candidates;
        for (std::size_t i = 0; i < remaining.size(); ++i) {
            if (!has_slot(remaining[i]) || shares_slot(remaining[i], reach)) candidates.push_back(i);
        }
        if (candidates.empty()) {
            for (std::size_t i = 0; i < remaining.size(); ++i) candidates.push_back(i);
        }
        std::size_t best = candidates.front();
        double best_est = estimate(store, remaining[best], bound);
        for (std::size_t k = 1; k < candidates.size(); ++k) {
            double e = estimate(store, remaining[candidates[k]], bound);
            if (e < best_est) {
                best = candidates[k];
                best_est = e;
            }
        }
        const TriplePattern& chosen = remaining[best];
        for (const Node* n : {&chosen.s, &chosen.p, &chosen.o}) {
            if (is_slot_node(*n)) bound.insert(*n);
        }
        plan.push_back(chosen);
        remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(best));
    }
    return plan;
}

EvalResult select(const TripleStore& store, const SelectQuery& query, const EvalOptions& opts) {
    return Evaluator(store, query, opts).run();
}

AskResult ask(const TripleStore& store, const GraphPattern& gp, const Binding& binding, const EvalOptions& opts) {
    SelectQuery q;
    q.pattern = gp;
    q.limit = 1;
    if (!binding.empty()) {
        ValuesTable vt;
        vt.rows.emplace_back();
        for (const auto& [var, term] : binding) {
            vt.vars.push_back(var);
            vt.rows.back().push_back(term);
        }
        q.values = std::move(vt);
    }
    EvalResult r = select(store, q, opts);
    return {!r.rows.empty(), r.status, r.elapsed_s};
}

}  // namespace bgpl
