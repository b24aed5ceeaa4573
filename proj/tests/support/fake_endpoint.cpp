#include "fake_endpoint.hpp"

#include <httplib.h>

#include <chrono>

#include "bgpl/endpoint.hpp"
#include "bgpl/sparql.hpp"

namespace bgpl::fake {

FakeSparqlServer::FakeSparqlServer(std::shared_ptr<const TripleStore> store)
    : store_(std::move(store)), server_(std::make_unique<httplib::Server>()) {
    auto handler = [this](const httplib::Request& req, httplib::Response& res) {
        ++requests;
        int now = ++concurrent;
        int peak = peak_concurrent.load();
        while (now > peak && !peak_concurrent.compare_exchange_weak(peak, now)) {
        }
        if (int d = delay_ms.load()) std::this_thread::sleep_for(std::chrono::milliseconds(d));
        if (fail_next.load() > 0) {
            --fail_next;
            res.status = 503;
            res.set_content("overloaded", "text/plain");
            --concurrent;
            return;
        }
        try {
            ParsedQuery pq = parse_sparql(req.get_param_value("query"));
            EvalOptions opts;
            opts.soft_timeout_s = opts.hard_timeout_s = kNoTimeout;
            EvalResult r = select(*store_, pq.query, opts);
            res.set_content(to_sparql_results_json(r, pq.is_ask), "application/sparql-results+json");
        } catch (const std::exception& e) {
            res.status = 400;
            res.set_content(e.what(), "text/plain");
        }
        --concurrent;
    };
    server_->Post("/sparql", handler);
    server_->Get("/sparql", handler);
    port_ = server_->bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_->listen_after_bind(); });
    server_->wait_until_ready();
}

FakeSparqlServer::~FakeSparqlServer() {
    server_->stop();
    if (thread_.joinable()) thread_.join();
}

std::string FakeSparqlServer::url() const { return "http://127.0.0.1:" + std::to_string(port_) + "/sparql"; }

}  // namespace bgpl::fake
