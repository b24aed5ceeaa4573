#include "bgpl/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "bgpl/sparql.hpp"

namespace bgpl {

namespace {

std::string escape(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&#39;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string fixed(double v, int digits = 3) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

std::string sparql_of(const std::string& pattern_text) {
    try {
        return to_sparql_select(parse_pattern(pattern_text));
    } catch (const std::exception&) {
        return pattern_text;
    }
}

const char* kStyle = R"(body{font-family:sans-serif;margin:1.5em;color:#222}
table{border-collapse:collapse;margin:.5em 0}
th,td{border:1px solid #ccc;padding:2px 6px;font-size:13px;text-align:left;vertical-align:top}
pre{margin:0;font-size:12px;white-space:pre-wrap}
table.grid td{width:10px;height:14px;padding:0;border:1px solid #eee}
table.grid th{font-weight:normal;white-space:nowrap}
.note{color:#666}
)";

std::string cell(const json& v) {
    const double p = std::clamp(v.get<double>(), 0.0, 1.0);
    return "<td data-precision=\"" + v.dump() + "\" style=\"background:rgba(8,48,107," + fixed(p) + ")\"></td>";
}

void grid(std::string& out, const std::string& title, const json& rows, const json& labels) {
    out += "<h3>" + escape(title) + "</h3>\n<table class=\"grid\">\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out += "<tr data-row=\"" + std::to_string(i) + "\"><th>" + escape(labels[i].get<std::string>()) + "</th>";
        for (const auto& v : rows[i]) out += cell(v);
        out += "</tr>\n";
    }
    out += "</table>\n";
}

const char* kFitnessFields[] = {"score", "gain", "f1", "avg_result_len", "gt_matches",
                                "pattern_length", "pattern_vars", "timeout_penalty", "query_time_s", "remains"};

std::string fitness_cells(const json& f) {
    std::string out;
    for (const char* k : kFitnessFields) {
        const json& v = f.at(k);
        out += "<td>" + (v.is_number_integer() || v.is_number_unsigned() ? v.dump() : fixed(v.get<double>())) + "</td>";
    }
    return out;
}

std::string fitness_header() {
    std::string out;
    for (const char* k : kFitnessFields) out += std::string("<th>") + k + "</th>";
    return out;
}

}  // namespace

json report_json(const PatternSet& set, const std::vector<json>& run_logs) {
    json patterns = json::array();
    json accumulated = json::array();
    std::vector<double> acc(set.gt.size(), 0.0);
    for (std::size_t i = 0; i < set.patterns.size(); ++i) {
        const auto& a = set.patterns[i];
        patterns.push_back({{"index", i},
                            {"run", a.run},
                            {"key", a.key},
                            {"pattern", a.pattern.to_string()},
                            {"sparql", to_sparql_select(a.pattern)},
                            {"fitness", to_json(a.fitness)},
                            {"pv", a.evaluation.pv}});
        for (std::size_t j = 0; j < acc.size(); ++j) acc[j] = std::max(acc[j], a.evaluation.pv[j]);
        accumulated.push_back(acc);
    }
    json runs = json::array();
    for (const auto& log : run_logs) {
        json accepted = json::array();
        for (const auto& a : log.at("accepted")) accepted.push_back(a.at("key"));
        json generations = json::array();
        for (const auto& g : log.at("generations")) {
            json best = json::array();
            for (const auto& b : g.at("best")) {
                best.push_back({{"pattern", b.at("pattern")},
                                {"sparql", sparql_of(b.at("pattern").get<std::string>())},
                                {"key", b.at("key")},
                                {"fitness", b.at("fitness")}});
            }
            generations.push_back({{"generation", g.at("generation")},
                                   {"population", g.at("population")},
                                   {"distinct", g.at("distinct")},
                                   {"unfit", g.at("unfit")},
                                   {"hof_best", g.at("hof_best")},
                                   {"best", best}});
        }
        runs.push_back({{"run", log.at("run")},
                        {"remains_before", log.at("remains_before")},
                        {"remains_after", log.at("remains_after")},
                        {"accepted", accepted},
                        {"generations", generations},
                        {"wall_s", log.value("wall_s", 0.0)}});
    }
    return {{"format", "bgpl-report/1"},
            {"ground_truth", to_json(set.gt)},
            {"remains", set.ledger.remains()},
            {"aborted", set.aborted},
            {"patterns", patterns},
            {"accumulated", accumulated},
            {"runs", runs}};
}

std::string report_html(const json& report) {
    const json& gt = report.at("ground_truth");
    const json& patterns = report.at("patterns");
    std::string out;
    out += "<!DOCTYPE html>\n<html lang=\"en\">\n<head>\n<meta charset=\"utf-8\">\n<title>Learned graph patterns</title>\n";
    out += "<style>\n" + std::string(kStyle) + "</style>\n</head>\n<body>\n<h1>Learned graph patterns</h1>\n";
    out += "<p>" + std::to_string(patterns.size()) + " patterns, " + std::to_string(gt.size()) +
           " ground truth pairs, remains " + fixed(report.at("remains").get<double>()) + ".</p>\n";
    if (report.at("aborted").get<bool>()) out += "<p class=\"note\">Learning was aborted; results are partial.</p>\n";

    if (patterns.empty()) {
        out += "<p class=\"no-patterns\">No patterns were learned.</p>\n";
    } else {
        out += "<h2>Patterns</h2>\n<table class=\"patterns\">\n<tr><th>#</th><th>run</th>" + fitness_header() +
               "<th>SPARQL</th></tr>\n";
        for (const auto& p : patterns) {
            out += "<tr id=\"pattern-" + p.at("index").dump() + "\"><td>" + p.at("index").dump() + "</td><td>" +
                   p.at("run").dump() + "</td>" + fitness_cells(p.at("fitness")) + "<td><pre>" +
                   escape(p.at("sparql").get<std::string>()) + "</pre></td></tr>\n";
        }
        out += "</table>\n";

        out += "<h2>Precision coverage</h2>\n<p class=\"note\">One column per ground truth pair; darker cells mean "
               "higher precision.</p>\n";
        out += "<table class=\"pairs\">\n<tr><th>#</th><th>source</th><th>target</th></tr>\n";
        for (std::size_t j = 0; j < gt.size(); ++j) {
            out += "<tr><td>" + std::to_string(j) + "</td><td>" + escape(gt[j][0].get<std::string>()) + "</td><td>" +
                   escape(gt[j][1].get<std::string>()) + "</td></tr>\n";
        }
        out += "</table>\n";
        json pv_rows = json::array(), labels = json::array(), acc_labels = json::array();
        for (const auto& p : patterns) {
            pv_rows.push_back(p.at("pv"));
            labels.push_back("#" + p.at("index").dump());
            acc_labels.push_back("up to #" + p.at("index").dump());
        }
        out += "<div class=\"grid-per-pattern\">\n";
        grid(out, "Per pattern", pv_rows, labels);
        out += "</div>\n<div class=\"grid-accumulated\">\n";
        grid(out, "Accumulated", report.at("accumulated"), acc_labels);
        out += "</div>\n";
    }

    const json& runs = report.at("runs");
    if (!runs.empty()) out += "<h2>Runs</h2>\n";
    for (const auto& r : runs) {
        out += "<section class=\"run\" id=\"run-" + r.at("run").dump() + "\">\n<h3>Run " + r.at("run").dump() +
               "</h3>\n<p>remains " + fixed(r.at("remains_before").get<double>()) + " &rarr; " +
               fixed(r.at("remains_after").get<double>()) + ", " + std::to_string(r.at("accepted").size()) +
               " patterns accepted.</p>\n";
        for (const auto& g : r.at("generations")) {
            out += "<details><summary>Generation " + g.at("generation").dump() + " (" + g.at("distinct").dump() +
                   " distinct, " + g.at("unfit").dump() + " unfit)</summary>\n<table>\n<tr>" + fitness_header() +
                   "<th>SPARQL</th></tr>\n";
            for (const auto& b : g.at("best")) {
                out += "<tr>" + fitness_cells(b.at("fitness")) + "<td><pre>" + escape(b.at("sparql").get<std::string>()) +
                       "</pre></td></tr>\n";
            }
            out += "</table>\n</details>\n";
        }
        out += "</section>\n";
    }
    out += "</body>\n</html>\n";
    return out;
}

void write_report(const std::filesystem::path& learn_dir, const std::filesystem::path& out_dir) {
    PatternSet set = pattern_set_from_json(read_json(learn_dir / "patterns.json"));
    json report = report_json(set, read_run_logs(learn_dir));
    write_json(out_dir / "report.json", report);
    std::filesystem::create_directories(out_dir);
    std::ofstream html(out_dir / "report.html", std::ios::binary | std::ios::trunc);
    if (!html) throw std::runtime_error("cannot write " + (out_dir / "report.html").string());
    html << report_html(report);
}

}  // namespace bgpl
