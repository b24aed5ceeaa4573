#include "bgpl/config.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

namespace bgpl {

namespace {

using json = nlohmann::json;

struct Entry {
    std::string key;
    std::string help;
    std::function<json(const Settings&)> get;
    std::function<void(Settings&, std::string_view)> set;
};

[[noreturn]] void bad_value(std::string_view what, std::string_view value) {
    throw std::invalid_argument("expected " + std::string(what) + ", got '" + std::string(value) + "'");
}

template <typename T>
T parse_int(std::string_view v) {
    T out{};
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || p != v.data() + v.size() || v.empty()) bad_value("an integer", v);
    return out;
}

double parse_double(std::string_view v) {
    double out = 0;
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || p != v.data() + v.size() || v.empty()) bad_value("a number", v);
    return out;
}

bool parse_bool(std::string_view v) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    bad_value("a boolean", v);
}

// `ref` maps a (const or mutable) Settings to the field.
template <typename T, typename Ref>
Entry field(std::string key, std::string help, Ref ref) {
    Entry e{std::move(key), std::move(help), nullptr, nullptr};
    e.get = [ref](const Settings& s) { return json(ref(s)); };
    e.set = [ref](Settings& s, std::string_view v) {
        if constexpr (std::is_same_v<T, bool>) ref(s) = parse_bool(v);
        else if constexpr (std::is_same_v<T, double>) ref(s) = parse_double(v);
        else if constexpr (std::is_same_v<T, std::string>) ref(s) = std::string(v);
        else ref(s) = parse_int<T>(v);
    };
    return e;
}

#define EVO(name, type, help) \
    field<type>(#name, help, [](auto& s) -> auto& { return s.evolution.name; })
#define MUT(name, help) \
    field<double>("mutation." #name, help, [](auto& s) -> auto& { return s.evolution.mutation.name; })
#define FIT(name, type, help) \
    field<type>("fitness." #name, help, [](auto& s) -> auto& { return s.evolution.fitness.name; })
#define EP(key, name, type, help) \
    field<type>("endpoint." key, help, [](auto& s) -> auto& { return s.endpoint.name; })

std::vector<Entry> build() {
    std::vector<Entry> t{
        EVO(population_size, std::size_t, "individuals per generation"),
        EVO(max_generations, std::size_t, "generations per run"),
        EVO(max_runs, std::size_t, "upper bound on runs"),
        EVO(mating_prob, double, "probability that a consecutive pair mates"),
        EVO(p_dominant, double, "keep probability of a dominant parent's triple"),
        EVO(p_recessive, double, "keep probability of a recessive parent's triple"),
        EVO(rename_prob, double, "probability of renaming a recessive parent's variables"),
        MUT(introduce_var, "introduce-variable mutation probability"),
        MUT(split_var, "split-variable mutation probability"),
        MUT(merge_var, "merge-variables mutation probability"),
        MUT(del_triple, "delete-triple mutation probability"),
        MUT(expand_node, "expand-node mutation probability"),
        MUT(add_edge, "add-edge mutation probability"),
        MUT(increase_dist, "increase-distance mutation probability"),
        MUT(simplify, "simplify mutation probability"),
        MUT(fix_var, "fix-variable mutation probability"),
        EVO(tournament_size, std::size_t, "tournament size"),
        EVO(max_path_length, std::size_t, "longest initial path"),
        EVO(path_decay, double, "initial path length weight base"),
        EVO(edge_flip_prob, double, "probability of reversing an initial path edge"),
        EVO(fragment_fraction, double, "share of single-triple fragments in the initial population"),
        EVO(init_fix_var_prob, double, "probability of grounding an initial path"),
        EVO(fix_var_samples, std::size_t, "GT pairs sampled per fix-var mutation"),
        EVO(fix_var_children, std::size_t, "children per fix-var mutation"),
        EVO(max_length, std::size_t, "maximum triples per pattern"),
        EVO(max_vars, std::size_t, "maximum variables per pattern"),
        EVO(hof_size, std::size_t, "hall of fame capacity"),
        EVO(reintro_fresh, std::size_t, "fresh individuals per generation"),
        EVO(reintro_hof, std::size_t, "hall of fame individuals per generation"),
        EVO(accept_score, double, "score a pattern must exceed to be accepted"),
        EVO(min_remains, double, "stop once remains drops below this"),
        EVO(verify_simplify, bool, "check simplified patterns against the endpoint"),
        EVO(seed, std::uint64_t, "random seed"),
        EVO(workers, std::size_t, "concurrent fitness evaluations"),
        EVO(snapshot_size, std::size_t, "individuals logged per generation"),
        FIT(overfit_factor, double, "score factor for patterns matching too few sources or targets"),
        FIT(overfit_min_sources, std::size_t, "distinct sources below which a pattern is punished"),
        FIT(overfit_min_targets, std::size_t, "distinct targets below which a pattern is punished"),
    };
    Entry backend{"endpoint.backend", "local or remote", nullptr, nullptr};
    backend.get = [](const Settings& s) { return json(s.endpoint.backend == BackendKind::Remote ? "remote" : "local"); };
    backend.set = [](Settings& s, std::string_view v) {
        if (v == "local") s.endpoint.backend = BackendKind::Local;
        else if (v == "remote") s.endpoint.backend = BackendKind::Remote;
        else bad_value("local or remote", v);
    };
    t.push_back(std::move(backend));
    t.push_back(EP("store", store_path, std::string, "RDF file loaded by the local backend"));
    t.push_back(EP("url", url, std::string, "SPARQL endpoint URL of the remote backend"));
    t.push_back(EP("user", user, std::string, "basic auth user"));
    t.push_back(EP("password", password, std::string, "basic auth password"));
    t.push_back(EP("max_inflight", max_inflight, std::size_t, "concurrent requests, 0 for the backend default"));
    t.push_back(EP("soft_timeout_s", soft_timeout_s, double, "partial-result timeout"));
    t.push_back(EP("hard_timeout_s", hard_timeout_s, double, "abort timeout"));
    t.push_back(EP("cache_capacity", cache_capacity, std::size_t, "cached results, 0 disables the cache"));
    t.push_back(EP("cache_ttl_s", cache_ttl_s, double, "cache lifetime, negative for the backend default"));
    t.push_back(EP("batch_size", batch_size, std::size_t, "VALUES rows per request"));
    t.push_back(EP("retries", retries, int, "connection retries"));
    t.push_back(EP("retry_backoff_s", retry_backoff_s, double, "initial retry backoff"));
    Entry clock{"endpoint.clock", "work or wall: how the local backend measures query time", nullptr, nullptr};
    clock.get = [](const Settings& s) { return json(s.endpoint.local_clock == ClockMode::Wall ? "wall" : "work"); };
    clock.set = [](Settings& s, std::string_view v) {
        if (v == "wall") s.endpoint.local_clock = ClockMode::Wall;
        else if (v == "work") s.endpoint.local_clock = ClockMode::Work;
        else bad_value("work or wall", v);
    };
    t.push_back(std::move(clock));
    t.push_back(EP("result_limit", result_limit, std::size_t, "row limit of fix-var and prediction queries"));
    t.push_back(field<double>("split.test_ratio", "share of the ground truth held out for evaluation",
                              [](auto& s) -> auto& { return s.harness.test_ratio; }));
    t.push_back(field<std::uint64_t>("split.seed", "seed of the held-out split",
                                     [](auto& s) -> auto& { return s.harness.split_seed; }));
    t.push_back(field<std::size_t>("predict.k", "patterns kept for prediction, 0 keeps all",
                                   [](auto& s) -> auto& { return s.harness.predict_k; }));
    return t;
}

#undef EVO
#undef MUT
#undef FIT
#undef EP

const std::vector<Entry>& table() {
    static const std::vector<Entry> t = build();
    return t;
}

const Entry& entry(const std::string& key) {
    static const std::map<std::string, const Entry*> index = [] {
        std::map<std::string, const Entry*> m;
        for (const auto& e : table()) m[e.key] = &e;
        return m;
    }();
    auto it = index.find(key);
    if (it == index.end()) throw std::invalid_argument("unknown config key '" + key + "'");
    return *it->second;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

}  // namespace

const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys = [] {
        std::vector<std::string> k;
        for (const auto& e : table()) k.push_back(e.key);
        return k;
    }();
    return keys;
}

const std::string& config_help(const std::string& key) { return entry(key).help; }

void set_config(Settings& s, const std::string& key, std::string_view value) {
    const Entry& e = entry(key);
    try {
        e.set(s, trim(value));
    } catch (const std::invalid_argument& ex) {
        throw std::invalid_argument(key + ": " + ex.what());
    }
}

std::string get_config(const Settings& s, const std::string& key) {
    json v = entry(key).get(s);
    return v.is_string() ? v.get<std::string>() : v.dump();
}

void apply_config_text(Settings& s, std::string_view text) {
    std::size_t line_no = 0, pos = 0;
    while (pos <= text.size()) {
        auto nl = text.find('\n', pos);
        std::string_view line = trim(text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos));
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        if (line.empty() || line.front() == '#') continue;
        auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw std::invalid_argument("config line " + std::to_string(line_no) + ": expected key = value");
        }
        try {
            set_config(s, std::string(trim(line.substr(0, eq))), line.substr(eq + 1));
        } catch (const std::invalid_argument& ex) {
            throw std::invalid_argument("config line " + std::to_string(line_no) + ": " + ex.what());
        }
    }
}

void apply_config_file(Settings& s, const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot read config " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    apply_config_text(s, ss.str());
}

void validate(const Settings& s) {
    validate(s.evolution);
    validate(s.endpoint);
    if (!(s.harness.test_ratio >= 0.0 && s.harness.test_ratio < 1.0)) {
        throw std::invalid_argument("split.test_ratio must lie in [0,1)");
    }
}

nlohmann::json config_json(const Settings& s) {
    json j = json::object();
    for (const auto& e : table()) {
        if (e.key == "endpoint.password") continue;
        j[e.key] = e.get(s);
    }
    return j;
}

void apply_config_json(Settings& s, const nlohmann::json& j) {
    for (const auto& [key, value] : j.items()) set_config(s, key, value.is_string() ? value.get<std::string>() : value.dump());
}

}  // namespace bgpl
