#pragma once

#include <memory>
#include <string>

#include "metricsvis/service.hpp"

namespace httplib {
class Server;
}

namespace metricsvis {

/// HTTP front end for a Service. Routes:
///
///   POST /sessions                                   {"dataset": id}
///   GET  /sessions/{id}
///   GET  /sessions/{id}/matrix?sort_axis=&sort_key=&direction=&pins=&binning=
///   GET  /sessions/{id}/cells/{category_id}/{employee_id}
///   GET  /sessions/{id}/groups?by=shift|district|cluster&k_top=&k=&seed=
///   GET  /sessions/{id}/dandelion?by=&k_top=&transform=log|linear
///   GET  /sessions/{id}/radar/{group_id}?by=&k_top=&transform=
///   GET  /sessions/{id}/projection?perplexity=&iterations=&learning_rate=&seed=&k=
///   GET  /sessions/{id}/clusters?k=&seed=
///   GET  /sessions/{id}/weights
///   GET  /sessions/{id}/weights/export
///   GET  /sessions/{id}/weights/{category_id}/histogram
///   PUT  /sessions/{id}/weights/{category_id}            {"weight": number}
///   PUT  /sessions/{id}/weights/{category_id}/included   {"included": bool}
///   GET  /sessions/{id}/context
///   PUT  /sessions/{id}/context   {"time_range": {"start","end"}, "behaviors": [...], "record_types": [...]}
///
/// Every GET accepts `version` and `context_version`; a mismatch answers 409.
/// Errors are `{"error": kind, "message": text}` plus any extra fields.
class HttpServer {
public:
    explicit HttpServer(Service& service);
    ~HttpServer();

    HttpServer(const HttpServer&) = delete;
    HttpServer& operator=(const HttpServer&) = delete;

    /// Blocks until stop(). Returns false if the address cannot be bound.
    bool listen(const std::string& host, int port);

    /// Binds an ephemeral port and returns it (or -1); call
    /// listen_after_bind() to serve.
    int bind_to_any_port(const std::string& host);
    bool listen_after_bind();

    void stop();
    bool is_running() const;
    void wait_until_ready() const;

private:
    void install_routes();

    Service& service_;
    std::unique_ptr<httplib::Server> server_;
};

}  // namespace metricsvis
