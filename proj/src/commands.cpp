#include "bgpl/commands.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <stdexcept>

#include "bgpl/gt_file.hpp"
#include "bgpl/report.hpp"

namespace bgpl {

namespace fs = std::filesystem;

namespace {

bool configured(const EndpointConfig& cfg) {
    return cfg.backend == BackendKind::Remote ? !cfg.url.empty() : !cfg.store_path.empty();
}

std::string format(const char* fmt, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, fmt, v);
    return buf;
}

json term_json(const Term& t) { return t.is_iri() ? t.value : to_ntriples(t); }

fs::path patterns_file(const fs::path& p) { return fs::is_directory(p) ? p / "patterns.json" : p; }

// Endpoint settings from the command line, falling back to the ones the
// patterns were learned with.
EndpointConfig endpoint_for(const Settings& settings, const PatternSet& set, bool fallback) {
    EndpointConfig cfg = settings.endpoint;
    apply_environment(cfg);
    if (configured(cfg) || !fallback) return cfg;
    Settings stored = settings;
    for (const char* key : {"endpoint.backend", "endpoint.store", "endpoint.url", "endpoint.user"}) {
        if (set.config.contains(key)) set_config(stored, key, set.config.at(key).get<std::string>());
    }
    return stored.endpoint;
}

Portfolio portfolio_for(const PatternSet& set, std::size_t k) {
    Portfolio p = Portfolio::from(set.patterns);
    if (k == 0) p.select_all();
    else reduce_queries(p, k);
    return p;
}

void emit(const json& j, const fs::path& output, std::ostream& out) {
    if (output.empty()) out << dump(j);
    else write_json(output, j);
}

// Runs a command body, mapping the failure classes onto exit codes.
template <typename F>
int guarded(std::ostream& err, F&& body) {
    try {
        return body();
    } catch (const GroundTruthError& e) {
        for (const auto& d : e.diagnostics()) err << "ground truth: " << d << "\n";
        return kExitBadGroundTruth;
    } catch (const EndpointUnreachable& e) {
        err << "endpoint unreachable: " << e.what() << "\n";
        return kExitUnreachable;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitError;
    }
}

}  // namespace

OpenedEndpoint open_endpoint(EndpointConfig cfg) {
    apply_environment(cfg);
    if (!configured(cfg)) throw std::invalid_argument("no store (--store) or endpoint URL (--endpoint) configured");
    validate(cfg);
    OpenedEndpoint o;
    if (cfg.backend == BackendKind::Local) {
        o.store = std::make_shared<const TripleStore>(load_file(cfg.store_path));
        o.endpoint = Endpoint::local(o.store, cfg);
    } else {
        o.endpoint = Endpoint::open(cfg);
    }
    return o;
}

json to_json(const MetricReport& m, const std::string& kind) {
    return {{"name", m.name}, {"kind", kind}, {"recall_at", m.recall_at}, {"map", m.map}, {"ndcg", m.ndcg}, {"pairs", m.pairs}};
}

int cmd_learn(const LearnArgs& args, std::ostream& out, std::ostream& err) {
    return guarded(err, [&]() -> int {
        validate(args.settings);
        const auto& cfg = args.settings.evolution;
        const GroundTruth full = load_ground_truth(args.ground_truth);

        PatternSet set;
        set.gt_total = full.size();
        set.test_ratio = args.settings.harness.test_ratio;
        set.split_seed = args.settings.harness.split_seed;
        set.gt = set.test_ratio > 0 ? split(full, set.test_ratio, set.split_seed).train : full;
        set.config = config_json(args.settings);
        set.ledger = CoverageLedger(set.gt.size());

        LearnOptions opts;
        const fs::path state = args.out_dir / "patterns.json";
        if (args.resume && fs::exists(state)) {
            PatternSet prev = pattern_set_from_json(read_json(state));
            if (prev.gt != set.gt) throw std::invalid_argument("cannot resume: the ground truth differs from " + state.string());
            set.patterns = prev.patterns;
            set.ledger = prev.ledger;
            set.next_run = prev.next_run;
            opts.ledger = prev.ledger;
            opts.previous = prev.patterns;
            opts.first_run = prev.next_run;
            out << "resuming at run " << prev.next_run << " with " << prev.patterns.size() << " patterns\n";
        }
        fs::create_directories(args.out_dir);

        auto save = [&] {
            write_json(state, to_json(set));
            write_json(args.out_dir / "ledger.json", to_json(set.ledger));
        };

        if (opts.first_run > cfg.max_runs || (opts.first_run > 1 && set.ledger.remains() < cfg.min_remains)) {
            out << "nothing to do: learning already finished\n";
            save();
            write_report(args.out_dir, args.out_dir);
            return kExitOk;
        }

        auto opened = open_endpoint(args.settings.endpoint);
        opts.on_run = [&](const RunRecord& run, const LearnResult& r) {
            write_json(run_log_path(args.out_dir, run.run), run_log(run, args.settings, r.ledger));
            set.patterns = r.patterns;
            set.ledger = r.ledger;
            set.next_run = run.run + 1;
            save();
            out << "run " << run.run << ": " << run.accepted.size() << " patterns accepted, remains "
                << format("%.3f", run.remains_before) << " -> " << format("%.3f", run.remains_after) << "\n";
        };
        LearnResult result = learn(*opened.endpoint, set.gt, cfg, opts);
        set.aborted = result.aborted;
        set.error = result.error;
        save();
        write_report(args.out_dir, args.out_dir);
        if (result.aborted) {
            err << "endpoint unreachable: " << result.error << "\n";
            return kExitUnreachable;
        }
        out << set.patterns.size() << " patterns, remains " << format("%.3f", set.ledger.remains()) << "\n";
        return kExitOk;
    });
}

int cmd_predict(const PredictArgs& args, std::ostream& out, std::ostream& err) {
    return guarded(err, [&]() -> int {
        validate(args.settings);
        PatternSet set = pattern_set_from_json(read_json(patterns_file(args.patterns)));
        std::vector<Term> sources = load_sources(args.sources);
        Portfolio portfolio = portfolio_for(set, args.k.value_or(args.settings.harness.predict_k));
        auto opened = open_endpoint(endpoint_for(args.settings, set, args.endpoint_from_patterns));
        auto predictions = predict(*opened.endpoint, portfolio, sources);

        std::vector<FusionStrategy> strategies = args.strategies;
        if (strategies.empty()) strategies.assign(kFusionStrategies.begin(), kFusionStrategies.end());
        json names = json::array();
        for (auto s : strategies) names.push_back(to_string(s));
        json rows = json::array();
        for (const auto& p : predictions) {
            json ranked = json::object();
            for (auto s : strategies) {
                json list = json::array();
                for (const auto& [term, value] : p[s]) {
                    if (args.top && list.size() >= *args.top) break;
                    list.push_back({term_json(term), value});
                }
                ranked[to_string(s)] = list;
            }
            rows.push_back({{"source", term_json(p.source)}, {"ranked", ranked}});
        }
        json doc{{"format", "bgpl-predictions/1"},
                 {"k", portfolio.k},
                 {"variant", portfolio.variant},
                 {"loss", portfolio.loss},
                 {"representatives", portfolio.representatives},
                 {"strategies", names},
                 {"predictions", rows}};
        emit(doc, args.output, out);
        return kExitOk;
    });
}

int cmd_evaluate(const EvaluateArgs& args, std::ostream& out, std::ostream& err) {
    return guarded(err, [&]() -> int {
        validate(args.settings);
        PatternSet set = pattern_set_from_json(read_json(patterns_file(args.patterns)));
        const GroundTruth full = load_ground_truth(args.ground_truth);
        const double ratio = args.test_ratio.value_or(set.test_ratio);
        const std::uint64_t seed = args.split_seed.value_or(set.split_seed);
        if (!(ratio > 0 && ratio < 1)) {
            throw std::invalid_argument("no held-out pairs: learn with split.test_ratio > 0 or pass --test-ratio");
        }
        Split s = split(full, ratio, seed);
        if (s.train != set.gt) err << "warning: the patterns were not learned on the training part of this split\n";
        Portfolio portfolio = portfolio_for(set, args.k.value_or(args.settings.harness.predict_k));
        auto opened = open_endpoint(endpoint_for(args.settings, set, args.endpoint_from_patterns));

        std::vector<MetricReport> rows = evaluate_portfolio(*opened.endpoint, portfolio, s.test);
        json jrows = json::array();
        for (const auto& r : rows) jrows.push_back(to_json(r, "fusion"));
        std::string baselines_note;
        if (args.baselines) {
            auto store = opened.store;
            if (!args.baseline_store.empty()) store = std::make_shared<const TripleStore>(load_file(args.baseline_store));
            if (store) {
                auto base = evaluate_baselines(BaselinePredictor(*store), s.test);
                for (const auto& r : base) jrows.push_back(to_json(r, "baseline"));
                rows.insert(rows.end(), base.begin(), base.end());
            } else {
                baselines_note = "skipped: graph baselines need a local store or --baseline-store";
                err << "baselines " << baselines_note << "\n";
            }
        }
        out << format_table(rows);
        json doc{{"format", "bgpl-evaluation/1"},
                 {"split", {{"test_ratio", ratio}, {"seed", seed}, {"train", s.train.size()}, {"test", s.test.size()}}},
                 {"k", portfolio.k},
                 {"variant", portfolio.variant},
                 {"loss", portfolio.loss},
                 {"rows", jrows}};
        if (!baselines_note.empty()) doc["baselines"] = baselines_note;
        if (!args.output.empty()) write_json(args.output, doc);
        return kExitOk;
    });
}

int cmd_report(const ReportArgs& args, std::ostream& out, std::ostream& err) {
    return guarded(err, [&]() -> int {
        fs::path dest = args.out_dir.empty() ? args.learn_dir : args.out_dir;
        write_report(args.learn_dir, dest);
        out << "wrote " << (dest / "report.html").string() << "\n";
        return kExitOk;
    });
}

}  // namespace bgpl
