#include "bgpl/endpoint.hpp"

#include <httplib.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <json.hpp>
#include <regex>
#include <set>
#include <thread>

#include "bgpl/canon.hpp"
#include "bgpl/sparql.hpp"

namespace bgpl {

using json = nlohmann::json;

std::size_t EndpointConfig::effective_max_inflight() const {
    if (max_inflight > 0) return max_inflight;
    return backend == BackendKind::Remote ? 1 : 16;
}

double EndpointConfig::effective_cache_ttl_s() const {
    if (cache_ttl_s >= 0) return cache_ttl_s;
    return backend == BackendKind::Remote ? 3600.0 : kNoTimeout;
}

void validate(const EndpointConfig& cfg) {
    if (cfg.batch_size < 1) throw std::invalid_argument("batch_size must be >= 1");
    if (cfg.retries < 0) throw std::invalid_argument("retries must be >= 0");
    if (cfg.result_limit < 1) throw std::invalid_argument("result_limit must be >= 1");
    if (!(cfg.soft_timeout_s >= 0) || !(cfg.hard_timeout_s >= 0)) {
        throw std::invalid_argument("timeouts must be non-negative");
    }
    if (cfg.backend == BackendKind::Remote && cfg.url.empty()) {
        throw std::invalid_argument("remote backend needs an endpoint URL");
    }
}

void apply_environment(EndpointConfig& cfg) {
    if (const char* url = std::getenv("BGPL_SPARQL_ENDPOINT"); url && *url) {
        cfg.backend = BackendKind::Remote;
        cfg.url = url;
    }
}

EvalResult LocalBackend::execute(const SelectQuery& q, const EvalOptions& opts) { return select(*store_, q, opts); }

// ---------------------------------------------------------------------------
// SPARQL JSON results

namespace {

json term_json(const Term& t) {
    json j;
    j["value"] = t.value;
    switch (t.kind) {
        case TermKind::Iri: j["type"] = "uri"; break;
        case TermKind::Blank: j["type"] = "bnode"; break;
        case TermKind::Literal:
            j["type"] = "literal";
            if (!t.language.empty()) j["xml:lang"] = t.language;
            if (!t.datatype.empty()) j["datatype"] = t.datatype;
            break;
    }
    return j;
}

Term json_term(const json& j) {
    std::string type = j.at("type").get<std::string>();
    std::string value = j.at("value").get<std::string>();
    if (type == "uri") return Term::iri(value);
    if (type == "bnode") return Term::blank(value);
    if (type == "literal" || type == "typed-literal") {
        std::string lang = j.contains("xml:lang") ? j["xml:lang"].get<std::string>() : "";
        std::string dt = j.contains("datatype") ? j["datatype"].get<std::string>() : "";
        return Term::literal(value, dt, lang);
    }
    throw std::runtime_error("unknown RDF term type in results: " + type);
}

}  // namespace

std::string to_sparql_results_json(const EvalResult& r, bool ask) {
    json doc;
    if (ask) {
        doc["head"] = json::object();
        doc["boolean"] = !r.rows.empty();
        return doc.dump();
    }
    json vars = json::array();
    for (const auto& v : r.columns) vars.push_back(v.name);
    doc["head"]["vars"] = vars;
    json bindings = json::array();
    for (const auto& row : r.rows) {
        json b = json::object();
        for (std::size_t i = 0; i < row.size(); ++i) b[r.columns[i].name] = term_json(row[i]);
        bindings.push_back(b);
    }
    doc["results"]["bindings"] = bindings;
    return doc.dump();
}

EvalResult parse_sparql_results_json(std::string_view body, const std::vector<Variable>& projection) {
    json doc = json::parse(body.begin(), body.end());
    EvalResult r;
    r.columns = projection;
    if (doc.contains("boolean")) {
        if (doc["boolean"].get<bool>()) r.rows.emplace_back();
        return r;
    }
    std::set<std::vector<Term>> seen;
    for (const auto& b : doc.at("results").at("bindings")) {
        std::vector<Term> row;
        row.reserve(projection.size());
        for (const auto& v : projection) {
            if (!b.contains(v.name)) throw std::runtime_error("unbound variable ?" + v.name + " in results");
            row.push_back(json_term(b[v.name]));
        }
        if (seen.insert(row).second) r.rows.push_back(std::move(row));
    }
    return r;
}

// ---------------------------------------------------------------------------
// Remote backend

RemoteBackend::RemoteBackend(EndpointConfig cfg) : cfg_(std::move(cfg)) {
    static const std::regex url_re(R"(^(https?://[^/?#]+)([^#]*)$)", std::regex::icase);
    std::smatch m;
    if (!std::regex_match(cfg_.url, m, url_re)) throw std::invalid_argument("invalid endpoint URL: " + cfg_.url);
    scheme_host_port_ = m[1];
    path_ = m[2].length() ? std::string(m[2]) : "/";
}

EvalResult RemoteBackend::execute(const SelectQuery& q, const EvalOptions& opts) {
    const std::string text = to_sparql(q);
    std::string last_error;
    for (int attempt = 0; attempt <= cfg_.retries; ++attempt) {
        if (attempt > 0) {
            auto wait = cfg_.retry_backoff_s * std::pow(2.0, attempt - 1);
            std::this_thread::sleep_for(std::chrono::duration<double>(wait));
        }
        httplib::Client cli(scheme_host_port_);
        double hard = std::isfinite(opts.hard_timeout_s) ? opts.hard_timeout_s : 3600.0;
        auto as_duration = [](double s) {
            return std::chrono::duration_cast<std::chrono::microseconds>(std::chrono::duration<double>(s));
        };
        cli.set_connection_timeout(as_duration(std::min(hard, 10.0)));
        cli.set_read_timeout(as_duration(hard));
        cli.set_write_timeout(as_duration(hard));
        if (!cfg_.user.empty()) cli.set_basic_auth(cfg_.user, cfg_.password);
        httplib::Headers headers{{"Accept", "application/sparql-results+json"}};
        httplib::Params params{{"query", text}};

        auto start = std::chrono::steady_clock::now();
        auto res = cli.Post(path_, headers, params);
        double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

        EvalResult out;
        out.columns = q.projection;
        out.elapsed_s = elapsed;
        if (!res) {
            if (elapsed >= hard * 0.95) {
                out.status = EvalStatus::HardTimeout;
                return out;
            }
            last_error = httplib::to_string(res.error());
            continue;
        }
        if (res->status < 200 || res->status >= 300) {
            out.status = EvalStatus::HardTimeout;
            return out;
        }
        try {
            EvalResult parsed = parse_sparql_results_json(res->body, q.projection);
            out.rows = std::move(parsed.rows);
        } catch (const std::exception&) {
            out.status = EvalStatus::HardTimeout;
            return out;
        }
        if (q.limit && out.rows.size() > *q.limit) out.rows.resize(*q.limit);
        if (elapsed >= opts.soft_timeout_s || res->has_header("X-SQL-State")) out.status = EvalStatus::SoftTimeout;
        return out;
    }
    throw EndpointUnreachable("SPARQL endpoint " + cfg_.url + " unreachable after " +
                              std::to_string(cfg_.retries + 1) + " attempts: " + last_error);
}

// ---------------------------------------------------------------------------
// Facade

Endpoint::Endpoint(EndpointConfig cfg, std::shared_ptr<Backend> backend)
    : cfg_(std::move(cfg)), backend_(std::move(backend)) {
    validate(cfg_);
    eval_opts_.soft_timeout_s = cfg_.soft_timeout_s;
    eval_opts_.hard_timeout_s = cfg_.hard_timeout_s;
    eval_opts_.clock = backend_->remote() ? ClockMode::Wall : cfg_.local_clock;
}

std::shared_ptr<Endpoint> Endpoint::local(std::shared_ptr<const TripleStore> store, EndpointConfig cfg) {
    cfg.backend = BackendKind::Local;
    return std::make_shared<Endpoint>(std::move(cfg), std::make_shared<LocalBackend>(std::move(store)));
}

std::shared_ptr<Endpoint> Endpoint::open(EndpointConfig cfg) {
    validate(cfg);
    if (cfg.backend == BackendKind::Remote) {
        auto backend = std::make_shared<RemoteBackend>(cfg);
        return std::make_shared<Endpoint>(std::move(cfg), std::move(backend));
    }
    auto store = std::make_shared<const TripleStore>(load_file(cfg.store_path));
    return local(std::move(store), std::move(cfg));
}

EndpointStats Endpoint::stats() const {
    EndpointStats s;
    s.backend_requests = backend_requests_.load();
    s.cache_hits = cache_hits_.load();
    s.cache_misses = cache_misses_.load();
    {
        std::lock_guard lk(slot_mutex_);
        s.peak_inflight = peak_inflight_;
    }
    return s;
}

void Endpoint::clear_cache() {
    std::lock_guard lk(cache_mutex_);
    lru_.clear();
    index_.clear();
}

bool Endpoint::cache_get(const std::string& key, EvalResult& out) {
    if (cfg_.cache_capacity == 0) return false;
    std::lock_guard lk(cache_mutex_);
    auto it = index_.find(key);
    if (it == index_.end()) return false;
    double ttl = cfg_.effective_cache_ttl_s();
    if (std::isfinite(ttl)) {
        double age = std::chrono::duration<double>(std::chrono::steady_clock::now() - it->second->inserted).count();
        if (age > ttl) {
            lru_.erase(it->second);
            index_.erase(it);
            return false;
        }
    }
    lru_.splice(lru_.begin(), lru_, it->second);
    out = it->second->value;
    return true;
}

void Endpoint::cache_put(const std::string& key, const EvalResult& value) {
    if (cfg_.cache_capacity == 0) return;
    std::lock_guard lk(cache_mutex_);
    auto it = index_.find(key);
    if (it != index_.end()) return;
    lru_.push_front({key, value, std::chrono::steady_clock::now()});
    index_.emplace(key, lru_.begin());
    while (lru_.size() > cfg_.cache_capacity) {
        index_.erase(lru_.back().key);
        lru_.pop_back();
    }
}

EvalResult Endpoint::request(const SelectQuery& q) {
    {
        std::unique_lock lk(slot_mutex_);
        slot_cv_.wait(lk, [&] { return inflight_ < cfg_.effective_max_inflight(); });
        ++inflight_;
        peak_inflight_ = std::max(peak_inflight_, inflight_);
    }
    struct Release {
        Endpoint* self;
        ~Release() {
            {
                std::lock_guard lk(self->slot_mutex_);
                --self->inflight_;
            }
            self->slot_cv_.notify_one();
        }
    } release{this};
    ++backend_requests_;
    return backend_->execute(q, eval_opts_);
}

EvalResult Endpoint::execute_batched(const SelectQuery& q) {
    if (!q.values || q.values->rows.size() <= cfg_.batch_size) return request(q);

    EvalResult merged;
    merged.columns = q.projection;
    std::set<std::vector<Term>> seen;
    const auto& rows = q.values->rows;
    for (std::size_t begin = 0; begin < rows.size(); begin += cfg_.batch_size) {
        std::size_t end = std::min(rows.size(), begin + cfg_.batch_size);
        SelectQuery chunk{q.pattern, q.projection, ValuesTable{q.values->vars, {}}, q.limit};
        chunk.values->rows.assign(rows.begin() + static_cast<std::ptrdiff_t>(begin),
                                  rows.begin() + static_cast<std::ptrdiff_t>(end));
        EvalResult part = request(chunk);
        merged.elapsed_s += part.elapsed_s;
        merged.work += part.work;
        if (part.status == EvalStatus::HardTimeout) {
            merged.status = EvalStatus::HardTimeout;
            merged.rows.clear();
            return merged;
        }
        if (part.status == EvalStatus::SoftTimeout) merged.status = EvalStatus::SoftTimeout;
        for (auto& row : part.rows) {
            if (q.limit && merged.rows.size() >= *q.limit) break;
            if (seen.insert(row).second) merged.rows.push_back(std::move(row));
        }
    }
    return merged;
}

EvalResult Endpoint::run_select(const GraphPattern& gp, const std::vector<Variable>& projection,
                                const std::optional<ValuesTable>& values, std::optional<std::size_t> limit) {
    // Evaluate the canonical form so that the result depends only on the cache key.
    CanonicalForm cf = canonicalize(gp);
    auto map_var = [&](const Variable& v) {
        auto it = cf.mapping.find(Node{v});
        if (it != cf.mapping.end()) return it->second;
        if (is_reserved(v) || gp.contains(v)) return v;
        return Variable{"x_" + v.name};  // only in VALUES; cannot clash with ?cN
    };
    SelectQuery q;
    q.pattern = cf.pattern;
    q.limit = limit;
    for (const auto& v : projection) q.projection.push_back(map_var(v));
    if (values) {
        ValuesTable vt;
        for (const auto& v : values->vars) vt.vars.push_back(map_var(v));
        vt.rows = values->rows;
        q.values = std::move(vt);
    }

    std::string key = cf.key;
    key += "\x1f";
    for (const auto& v : q.projection) key += "?" + v.name + " ";
    key += "\x1f";
    if (q.values) {
        std::uint64_t h = fnv1a("values");
        for (const auto& v : q.values->vars) h = fnv1a("?" + v.name + " ", h);
        for (const auto& row : q.values->rows) {
            for (const auto& t : row) h = fnv1a(to_ntriples(t) + " ", h);
            h = fnv1a("\n", h);
        }
        key += std::to_string(q.values->rows.size()) + ":" + std::to_string(h);
    }
    key += "\x1f";
    if (limit) key += std::to_string(*limit);

    EvalResult out;
    if (cache_get(key, out)) {
        ++cache_hits_;
    } else {
        ++cache_misses_;
        out = execute_batched(q);
        cache_put(key, out);
    }
    out.columns = projection;
    return out;
}

CoverageResult Endpoint::run_ask_coverage(const GraphPattern& gp, const std::vector<std::pair<Term, Term>>& pairs) {
    CoverageResult c;
    c.covered.assign(pairs.size(), false);
    if (pairs.empty()) return c;
    ValuesTable vt{{kSource, kTarget}, {}};
    vt.rows.reserve(pairs.size());
    for (const auto& [s, t] : pairs) vt.rows.push_back({s, t});
    EvalResult r = run_select(gp, {kSource, kTarget}, vt);
    c.status = r.status;
    c.elapsed_s = r.elapsed_s;
    if (r.status == EvalStatus::HardTimeout) return c;
    std::set<std::pair<Term, Term>> hits;
    for (const auto& row : r.rows) hits.insert({row[0], row[1]});
    for (std::size_t i = 0; i < pairs.size(); ++i) c.covered[i] = hits.count(pairs[i]) > 0;
    return c;
}

}  // namespace bgpl
