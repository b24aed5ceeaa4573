#pragma once

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <list>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "bgpl/engine.hpp"

namespace bgpl {

enum class BackendKind { Local, Remote };

struct EndpointConfig {
    BackendKind backend = BackendKind::Local;
    std::string store_path;  // Local
    std::string url;         // Remote
    std::string user;        // optional basic auth
    std::string password;
    /// 0 selects the backend default: 1 for Remote, 16 for Local.
    std::size_t max_inflight = 0;
    double soft_timeout_s = 2.0;
    double hard_timeout_s = 10.0;
    std::size_t cache_capacity = 100000;  // 0 disables caching
    /// Negative selects the backend default: unbounded for Local, 3600 s for Remote.
    double cache_ttl_s = -1.0;
    std::size_t batch_size = 384;
    int retries = 3;
    double retry_backoff_s = 0.5;
    /// Clock used by the Local backend.
    ClockMode local_clock = ClockMode::Work;
    /// Row limit of fix-var and prediction queries.
    std::size_t result_limit = 1024;

    std::size_t effective_max_inflight() const;
    double effective_cache_ttl_s() const;
};

/// Throws std::invalid_argument on out-of-range settings.
void validate(const EndpointConfig& cfg);

/// Applies BGPL_SPARQL_ENDPOINT (switches to the Remote backend with that URL).
void apply_environment(EndpointConfig& cfg);

/// Raised when a remote endpoint cannot be reached after all retries.
class EndpointUnreachable : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// One request against a store or a server. Implementations must be thread-safe.
class Backend {
public:
    virtual ~Backend() = default;
    virtual EvalResult execute(const SelectQuery& q, const EvalOptions& opts) = 0;
    virtual bool remote() const = 0;
};

class LocalBackend : public Backend {
public:
    explicit LocalBackend(std::shared_ptr<const TripleStore> store) : store_(std::move(store)) {}
    EvalResult execute(const SelectQuery& q, const EvalOptions& opts) override;
    bool remote() const override { return false; }
    const TripleStore& store() const { return *store_; }

private:
    std::shared_ptr<const TripleStore> store_;
};

/// SPARQL 1.1 protocol client: POST, form-encoded `query`, JSON results.
/// Non-2xx answers and read timeouts become HardTimeout; connection failures
/// are retried with exponential backoff and then raise EndpointUnreachable.
/// A response taking longer than the soft timeout, or carrying Virtuoso's
/// partial-result header, is reported as SoftTimeout with its rows.
class RemoteBackend : public Backend {
public:
    explicit RemoteBackend(EndpointConfig cfg);
    EvalResult execute(const SelectQuery& q, const EvalOptions& opts) override;
    bool remote() const override { return true; }

private:
    EndpointConfig cfg_;
    std::string scheme_host_port_;
    std::string path_;
};

/// SPARQL JSON results for a SELECT (columns/rows) or ASK (empty projection).
std::string to_sparql_results_json(const EvalResult& r, bool ask = false);
/// Parses SPARQL JSON results; rows follow `projection`. For ASK documents a
/// true answer yields one empty row. Throws std::runtime_error on malformed input.
EvalResult parse_sparql_results_json(std::string_view body, const std::vector<Variable>& projection);

struct CoverageResult {
    std::vector<bool> covered;
    EvalStatus status = EvalStatus::Complete;
    double elapsed_s = 0.0;
};

struct EndpointStats {
    std::uint64_t backend_requests = 0;
    std::uint64_t cache_hits = 0;
    std::uint64_t cache_misses = 0;
    std::size_t peak_inflight = 0;
};

/// Query facade shared by all workers: batching of VALUES tables, an in-flight
/// limit per backend and an LRU cache keyed by canonical pattern form.
class Endpoint {
public:
    Endpoint(EndpointConfig cfg, std::shared_ptr<Backend> backend);

    /// Local backend over an already loaded store.
    static std::shared_ptr<Endpoint> local(std::shared_ptr<const TripleStore> store, EndpointConfig cfg = {});
    /// Backend chosen by cfg.backend (loads cfg.store_path for Local).
    static std::shared_ptr<Endpoint> open(EndpointConfig cfg);

    /// SELECT DISTINCT projection WHERE { VALUES ... gp } LIMIT limit, with the
    /// VALUES rows split into batch_size chunks and merged. A hard timeout in
    /// any chunk makes the whole result a HardTimeout without rows.
    EvalResult run_select(const GraphPattern& gp, const std::vector<Variable>& projection,
                          const std::optional<ValuesTable>& values = std::nullopt,
                          std::optional<std::size_t> limit = std::nullopt);

    /// Per-pair coverage of a complete pattern via one batched
    /// SELECT ?source ?target with the pairs as VALUES.
    CoverageResult run_ask_coverage(const GraphPattern& gp, const std::vector<std::pair<Term, Term>>& pairs);

    const EndpointConfig& config() const { return cfg_; }
    bool remote() const { return backend_->remote(); }
    EndpointStats stats() const;
    void clear_cache();

private:
    struct CacheEntry {
        std::string key;
        EvalResult value;
        std::chrono::steady_clock::time_point inserted;
    };

    EvalResult execute_batched(const SelectQuery& q);
    EvalResult request(const SelectQuery& q);
    bool cache_get(const std::string& key, EvalResult& out);
    void cache_put(const std::string& key, const EvalResult& value);

    EndpointConfig cfg_;
    std::shared_ptr<Backend> backend_;
    EvalOptions eval_opts_;

    std::mutex cache_mutex_;
    std::list<CacheEntry> lru_;
    std::unordered_map<std::string, std::list<CacheEntry>::iterator> index_;

    mutable std::mutex slot_mutex_;
    std::condition_variable slot_cv_;
    std::size_t inflight_ = 0;
    std::size_t peak_inflight_ = 0;

    std::atomic<std::uint64_t> backend_requests_{0};
    std::atomic<std::uint64_t> cache_hits_{0};
    std::atomic<std::uint64_t> cache_misses_{0};
};

}  // namespace bgpl
