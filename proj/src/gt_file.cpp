#include "bgpl/gt_file.hpp"

#include <cctype>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>

namespace bgpl {

namespace {

std::string join(const std::vector<std::string>& lines) {
    std::string out;
    for (const auto& l : lines) out += (out.empty() ? "" : "\n") + l;
    return out;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_tabs(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        auto tab = line.find('\t', start);
        out.push_back(trim(line.substr(start, tab - start)));
        if (tab == std::string_view::npos) break;
        start = tab + 1;
    }
    while (!out.empty() && out.back().empty()) out.pop_back();
    return out;
}

bool starts_with_ci(std::string_view s, std::string_view prefix) {
    if (s.size() < prefix.size()) return false;
    for (std::size_t i = 0; i < prefix.size(); ++i) {
        if (std::tolower(static_cast<unsigned char>(s[i])) != prefix[i]) return false;
    }
    return true;
}

struct Reader {
    std::map<std::string, std::string> prefixes;
    std::vector<std::string> errors;
    bool rows_started = false;

    // Returns true when the line was a prefix declaration.
    bool declaration(std::string_view line, std::size_t row) {
        bool turtle = line.substr(0, 7) == "@prefix";
        if (!turtle && !starts_with_ci(line, "prefix")) return false;
        const std::size_t kw = turtle ? 7 : 6;
        if (line.size() == kw || (line[kw] != ' ' && line[kw] != '\t')) return false;
        std::string_view rest = trim(line.substr(kw));
        auto colon = rest.find(':');
        auto open = rest.find('<');
        auto close = rest.rfind('>');
        if (colon == std::string_view::npos || open == std::string_view::npos || close == std::string_view::npos ||
            colon > open || close < open) {
            errors.push_back("row " + std::to_string(row) + ": malformed prefix declaration");
            return true;
        }
        std::string_view tail = trim(rest.substr(close + 1));
        if (turtle ? tail != "." : !(tail.empty() || tail == ".")) {
            errors.push_back("row " + std::to_string(row) + ": malformed prefix declaration");
            return true;
        }
        if (rows_started) {
            errors.push_back("row " + std::to_string(row) + ": prefix declaration after the first pair");
            return true;
        }
        std::string name(trim(rest.substr(0, colon)));
        std::string iri(rest.substr(open + 1, close - open - 1));
        if (!is_absolute_iri(iri)) {
            errors.push_back("row " + std::to_string(row) + ": prefix IRI is not absolute: " + iri);
            return true;
        }
        prefixes[name] = iri;
        return true;
    }

    std::optional<Term> cell(std::string_view text, std::size_t row, int column) {
        std::string iri;
        if (text.size() >= 2 && text.front() == '<' && text.back() == '>') {
            iri = std::string(text.substr(1, text.size() - 2));
        } else if (auto colon = text.find(':'); colon != std::string_view::npos &&
                                                prefixes.count(std::string(text.substr(0, colon)))) {
            iri = prefixes.at(std::string(text.substr(0, colon))) + std::string(text.substr(colon + 1));
        } else {
            // A bare cell must look like a full IRI; "x:y" is most likely an undeclared prefix.
            bool full = text.find("://") != std::string_view::npos || text.substr(0, 4) == "urn:";
            if (colon != std::string_view::npos && !full) {
                errors.push_back("row " + std::to_string(row) + ": column " + std::to_string(column) +
                                 " uses an undeclared prefix: " + std::string(text.substr(0, colon)));
                return std::nullopt;
            }
            iri = std::string(text);
        }
        if (!is_absolute_iri(iri)) {
            errors.push_back("row " + std::to_string(row) + ": column " + std::to_string(column) +
                             " is not an absolute IRI: " + std::string(text));
            return std::nullopt;
        }
        return Term::iri(std::move(iri));
    }

    template <typename F>
    void each_row(std::string_view text, F&& on_row) {
        std::size_t row = 0;
        std::size_t pos = 0;
        while (pos <= text.size()) {
            auto nl = text.find('\n', pos);
            std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
            pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
            ++row;
            std::string_view t = trim(line);
            if (t.empty() || t.front() == '#') continue;
            if (declaration(t, row)) continue;
            rows_started = true;
            on_row(split_tabs(line), row);
        }
    }
};

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

GroundTruthError::GroundTruthError(std::vector<std::string> diagnostics)
    : std::runtime_error(join(diagnostics)), diagnostics_(std::move(diagnostics)) {}

GroundTruth parse_ground_truth(std::string_view text) {
    Reader r;
    GroundTruth gt;
    std::map<GroundTruthPair, std::size_t> seen;
    r.each_row(text, [&](const std::vector<std::string_view>& cells, std::size_t row) {
        if (cells.size() != 2) {
            r.errors.push_back("row " + std::to_string(row) + ": expected 2 tab-separated columns, found " +
                               std::to_string(cells.size()));
            return;
        }
        auto s = r.cell(cells[0], row, 1);
        auto t = r.cell(cells[1], row, 2);
        if (!s || !t) return;
        GroundTruthPair p{*s, *t};
        auto [it, fresh] = seen.emplace(p, row);
        if (!fresh) {
            r.errors.push_back("row " + std::to_string(row) + ": duplicate of row " + std::to_string(it->second));
            return;
        }
        gt.push_back(std::move(p));
    });
    if (r.errors.empty() && gt.empty()) r.errors.push_back("no ground truth pairs");
    if (!r.errors.empty()) throw GroundTruthError(std::move(r.errors));
    return gt;
}

GroundTruth load_ground_truth(const std::filesystem::path& path) { return parse_ground_truth(read_file(path)); }

std::vector<Term> parse_sources(std::string_view text) {
    Reader r;
    std::vector<Term> out;
    std::set<Term> seen;
    r.each_row(text, [&](const std::vector<std::string_view>& cells, std::size_t row) {
        if (cells.empty()) return;
        auto s = r.cell(cells[0], row, 1);
        if (s && seen.insert(*s).second) out.push_back(*s);
    });
    if (!r.errors.empty()) throw GroundTruthError(std::move(r.errors));
    return out;
}

std::vector<Term> load_sources(const std::filesystem::path& path) { return parse_sources(read_file(path)); }

std::string format_ground_truth(const GroundTruth& gt) {
    std::string out;
    for (const auto& p : gt) out += to_ntriples(p.source) + "\t" + to_ntriples(p.target) + "\n";
    return out;
}

}  // namespace bgpl
