#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <optional>

#include "bgpl/commands.hpp"

using namespace bgpl;

namespace {

// Settings sources shared by the commands: config file, per-key flags and --set.
struct SettingsOptions {
    std::string config_path;
    std::string store;
    std::string endpoint;
    std::vector<std::string> sets;
    std::map<std::string, std::string> keys;

    void attach(CLI::App* app) {
        app->add_option("-c,--config", config_path, "key = value configuration file")->check(CLI::ExistingFile);
        app->add_option("--store", store, "RDF file (N-Triples or Turtle, optionally gzipped) for the local backend");
        app->add_option("--endpoint", endpoint, "SPARQL endpoint URL (selects the remote backend)");
        app->add_option("--set", sets, "KEY=VALUE override, repeatable");
        for (const auto& key : config_keys()) {
            app->add_option("--" + key, keys[key], config_help(key))->group("Configuration keys");
        }
    }

    Settings build(CLI::App* app) const {
        Settings s;
        if (!config_path.empty()) apply_config_file(s, config_path);
        for (const auto& key : config_keys()) {
            if (app->count("--" + key) > 0) set_config(s, key, keys.at(key));
        }
        for (const auto& kv : sets) {
            auto eq = kv.find('=');
            if (eq == std::string::npos) throw std::invalid_argument("--set expects KEY=VALUE, got '" + kv + "'");
            set_config(s, kv.substr(0, eq), kv.substr(eq + 1));
        }
        if (!store.empty()) {
            s.endpoint.backend = BackendKind::Local;
            s.endpoint.store_path = store;
        }
        if (!endpoint.empty()) {
            s.endpoint.backend = BackendKind::Remote;
            s.endpoint.url = endpoint;
        }
        return s;
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Learns SPARQL graph patterns for source-target pairs and predicts targets with them."};
    app.require_subcommand(1);

    auto* learn = app.add_subcommand("learn", "learn patterns for a ground truth file");
    SettingsOptions learn_settings;
    LearnArgs learn_args;
    std::string learn_gt, learn_out;
    learn->add_option("ground_truth", learn_gt, "tab-separated source/target pairs")->required();
    learn->add_option("-o,--out", learn_out, "output directory")->required();
    learn->add_flag("--resume", learn_args.resume, "continue a previous invocation in the output directory");
    learn_settings.attach(learn);

    auto* predict = app.add_subcommand("predict", "rank targets for new sources");
    SettingsOptions predict_settings;
    PredictArgs predict_args;
    std::string predict_patterns, predict_sources, predict_output;
    std::vector<std::string> strategies;
    std::optional<std::size_t> predict_k, top;
    predict->add_option("patterns", predict_patterns, "patterns.json or a learn directory")->required();
    predict->add_option("sources", predict_sources, "one source IRI per line")->required();
    predict->add_option("-k", predict_k, "patterns kept for prediction (0 keeps all)");
    predict->add_option("--strategy", strategies, "fusion strategies to report (default: all)");
    predict->add_option("--top", top, "length of each ranked list");
    predict->add_option("-o,--output", predict_output, "write the JSON here instead of stdout");
    predict_settings.attach(predict);

    auto* evaluate = app.add_subcommand("evaluate", "score learned patterns and baselines on held-out pairs");
    SettingsOptions evaluate_settings;
    EvaluateArgs evaluate_args;
    std::string evaluate_patterns, evaluate_gt, evaluate_output, baseline_store;
    std::optional<double> test_ratio;
    std::optional<std::uint64_t> split_seed;
    std::optional<std::size_t> evaluate_k;
    bool no_baselines = false;
    evaluate->add_option("patterns", evaluate_patterns, "patterns.json or a learn directory")->required();
    evaluate->add_option("ground_truth", evaluate_gt, "the full ground truth file")->required();
    evaluate->add_option("--test-ratio", test_ratio, "held-out share (default: as learned)");
    evaluate->add_option("--split-seed", split_seed, "split seed (default: as learned)");
    evaluate->add_option("-k", evaluate_k, "patterns kept for prediction (0 keeps all)");
    evaluate->add_flag("--no-baselines", no_baselines, "skip the graph-measure baselines");
    evaluate->add_option("--baseline-store", baseline_store, "RDF file for the baselines when the endpoint is remote")
        ->check(CLI::ExistingFile);
    evaluate->add_option("-o,--output", evaluate_output, "write the evaluation JSON here");
    evaluate_settings.attach(evaluate);

    auto* report = app.add_subcommand("report", "render report.html and report.json for a learn directory");
    ReportArgs report_args;
    std::string report_dir, report_out;
    report->add_option("learn_dir", report_dir, "learn output directory")->required()->check(CLI::ExistingDirectory);
    report->add_option("-o,--out", report_out, "output directory (default: the learn directory)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (*learn) {
            learn_args.settings = learn_settings.build(learn);
            learn_args.ground_truth = learn_gt;
            learn_args.out_dir = learn_out;
            return cmd_learn(learn_args, std::cout, std::cerr);
        }
        if (*predict) {
            predict_args.settings = predict_settings.build(predict);
            predict_args.patterns = predict_patterns;
            predict_args.sources = predict_sources;
            predict_args.k = predict_k;
            predict_args.top = top;
            predict_args.output = predict_output;
            for (const auto& name : strategies) {
                auto s = parse_fusion_strategy(name);
                if (!s) throw std::invalid_argument("unknown fusion strategy '" + name + "'");
                predict_args.strategies.push_back(*s);
            }
            return cmd_predict(predict_args, std::cout, std::cerr);
        }
        if (*evaluate) {
            evaluate_args.settings = evaluate_settings.build(evaluate);
            evaluate_args.patterns = evaluate_patterns;
            evaluate_args.ground_truth = evaluate_gt;
            evaluate_args.test_ratio = test_ratio;
            evaluate_args.split_seed = split_seed;
            evaluate_args.k = evaluate_k;
            evaluate_args.baselines = !no_baselines;
            evaluate_args.baseline_store = baseline_store;
            evaluate_args.output = evaluate_output;
            return cmd_evaluate(evaluate_args, std::cout, std::cerr);
        }
        report_args.learn_dir = report_dir;
        report_args.out_dir = report_out;
        return cmd_report(report_args, std::cout, std::cerr);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
}
