#include "bgpl/fitness.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <set>
#include <stdexcept>

namespace bgpl {

namespace {

template <typename T>
std::strong_ordering cmp_max(T a, T b) {
    if (a < b) return std::strong_ordering::less;
    if (b < a) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

template <typename T>
std::strong_ordering cmp_min(T a, T b) {
    return cmp_max(b, a);
}

}  // namespace

std::strong_ordering FitnessTuple::operator<=>(const FitnessTuple& o) const {
    if (auto c = cmp_max(remains, o.remains); c != 0) return c;
    if (auto c = cmp_max(score, o.score); c != 0) return c;
    if (auto c = cmp_max(gain, o.gain); c != 0) return c;
    if (auto c = cmp_max(f1, o.f1); c != 0) return c;
    if (auto c = cmp_min(avg_result_len, o.avg_result_len); c != 0) return c;
    if (auto c = cmp_max(gt_matches, o.gt_matches); c != 0) return c;
    if (auto c = cmp_min(pattern_length, o.pattern_length); c != 0) return c;
    if (auto c = cmp_min(pattern_vars, o.pattern_vars); c != 0) return c;
    if (auto c = cmp_min(timeout_penalty, o.timeout_penalty); c != 0) return c;
    return cmp_min(query_time_s, o.query_time_s);
}

CoverageLedger::CoverageLedger(std::vector<double> best) : best_(std::move(best)) {
    for (double v : best_) {
        if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument("ledger entries must lie in [0, 1]");
    }
}

double CoverageLedger::remains() const {
    double r = 0.0;
    for (double v : best_) r += 1.0 - v;
    return r;
}

void CoverageLedger::update(const std::vector<const std::vector<double>*>& pvs) {
    for (const auto* pv : pvs) {
        if (pv->size() != best_.size()) throw std::invalid_argument("precision vector size differs from ledger");
        for (std::size_t i = 0; i < best_.size(); ++i) best_[i] = std::max(best_[i], (*pv)[i]);
    }
}

double timeout_penalty(EvalStatus s) {
    switch (s) {
        case EvalStatus::Complete: return 0.0;
        case EvalStatus::SoftTimeout: return 0.5;
        case EvalStatus::HardTimeout: return 1.0;
    }
    return 1.0;
}

PatternEvaluation evaluate_pattern(Endpoint& ep, const GraphPattern& gp, const GroundTruth& gt) {
    PatternEvaluation e;
    const std::size_t n = gt.size();
    e.pv.assign(n, 0.0);
    e.covered.assign(n, false);
    e.result_len.assign(n, 0);
    e.complete = gp.is_complete();
    if (!e.complete || n == 0) return e;

    std::vector<std::pair<Term, Term>> pairs;
    pairs.reserve(n);
    for (const auto& p : gt) pairs.push_back({p.source, p.target});
    CoverageResult cov = ep.run_ask_coverage(gp, pairs);

    ValuesTable sources{{kSource}, {}};
    std::set<Term> seen;
    for (const auto& p : gt) {
        if (seen.insert(p.source).second) sources.rows.push_back({p.source});
    }
    EvalResult pred = ep.run_select(gp, {kSource, kTarget}, sources);

    std::map<Term, std::set<Term>> predicted;
    for (const auto& row : pred.rows) predicted[row[0]].insert(row[1]);

    e.covered = cov.covered;
    e.status = std::max(cov.status, pred.status);
    e.query_time_s = cov.elapsed_s + pred.elapsed_s;

    double len_sum = 0.0;
    std::set<Term> srcs, tgts;
    for (std::size_t i = 0; i < n; ++i) {
        auto it = predicted.find(gt[i].source);
        std::size_t len = it == predicted.end() ? 0 : it->second.size();
        e.result_len[i] = len;
        len_sum += static_cast<double>(len);
        if (len > 0 && it->second.count(gt[i].target)) e.pv[i] = 1.0 / static_cast<double>(len);
        if (e.covered[i]) {
            ++e.gt_matches;
            srcs.insert(gt[i].source);
            tgts.insert(gt[i].target);
        }
    }
    e.matched_sources = srcs.size();
    e.matched_targets = tgts.size();
    e.recall = static_cast<double>(e.gt_matches) / static_cast<double>(n);
    e.avg_result_len = len_sum / static_cast<double>(n);
    e.precision = e.avg_result_len > 0 ? 1.0 / e.avg_result_len : 0.0;
    e.f1 = e.precision > 0 && e.recall > 0 ? 2 * e.precision * e.recall / (e.precision + e.recall) : 0.0;
    return e;
}

double gain(const PatternEvaluation& e, const CoverageLedger& ledger) {
    if (!e.complete || e.status != EvalStatus::Complete) return 0.0;
    if (ledger.size() != e.pv.size()) throw std::invalid_argument("ledger size differs from ground truth");
    double g = 0.0;
    for (std::size_t i = 0; i < e.pv.size(); ++i) g += std::max(0.0, e.pv[i] - ledger[i]);
    return g;
}

double score(double g, const PatternEvaluation& e, const FitnessConfig& cfg) {
    bool overfit = e.matched_sources < cfg.overfit_min_sources || e.matched_targets < cfg.overfit_min_targets;
    return overfit ? g * cfg.overfit_factor : g;
}

FitnessTuple fitness(const GraphPattern& gp, const PatternEvaluation& e, const CoverageLedger& ledger,
                     const FitnessConfig& cfg) {
    FitnessTuple f;
    f.remains = ledger.remains();
    f.gain = gain(e, ledger);
    f.score = score(f.gain, e, cfg);
    f.f1 = e.f1;
    f.avg_result_len = e.avg_result_len;
    f.gt_matches = e.gt_matches;
    f.pattern_length = gp.size();
    f.pattern_vars = gp.variable_count();
    f.timeout_penalty = timeout_penalty(e.status);
    f.query_time_s = e.query_time_s;
    return f;
}

Evaluated evaluate(Endpoint& ep, const GraphPattern& gp, const GroundTruth& gt, const CoverageLedger& ledger,
                   const FitnessConfig& cfg) {
    Evaluated out;
    out.evaluation = evaluate_pattern(ep, gp, gt);
    out.fitness = fitness(gp, out.evaluation, ledger, cfg);
    return out;
}

std::string to_string(const FitnessTuple& f) {
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "(remains=%.3f score=%.3f gain=%.3f f1=%.3f avg_len=%.3f matches=%zu len=%zu vars=%zu "
                  "timeout=%.1f time=%.4fs)",
                  f.remains, f.score, f.gain, f.f1, f.avg_result_len, f.gt_matches, f.pattern_length,
                  f.pattern_vars, f.timeout_penalty, f.query_time_s);
    return buf;
}

}  // namespace bgpl
