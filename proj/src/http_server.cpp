#include "metricsvis/http_server.hpp"

#include "httplib.h"

namespace metricsvis {

using nlohmann::json;

namespace {

constexpr const char* kJson = "application/json";

Query query_of(const httplib::Request& req) {
    Query q;
    for (const auto& [k, v] : req.params) q[k] = v;
    return q;
}

json body_of(const httplib::Request& req) {
    if (req.body.empty()) return json::object();
    try {
        return json::parse(req.body);
    } catch (const json::parse_error&) {
        throw InvalidParams("request body is not valid JSON");
    }
}

void send_error(httplib::Response& res, int status, const std::string& kind, const std::string& message,
                const json& extra = json::object()) {
    json body = {{"error", kind}, {"message", message}};
    body.update(extra);
    res.status = status;
    res.set_content(body.dump(), kJson);
}

/// Runs a handler and converts engine errors into JSON error responses.
template <typename Fn>
httplib::Server::Handler guarded(Fn fn) {
    return [fn = std::move(fn)](const httplib::Request& req, httplib::Response& res) {
        try {
            fn(req, res);
        } catch (const ApiError& e) {
            send_error(res, e.status(), e.kind(), e.what(), e.extra());
        } catch (const Error& e) {
            send_error(res, http_status_for(e), e.kind(), e.what());
        } catch (const std::exception& e) {
            send_error(res, 500, "internal_error", e.what());
        }
    };
}

void send_json(httplib::Response& res, const json& body, int status = 200) {
    res.status = status;
    res.set_content(body.dump(), kJson);
}

}  // namespace

HttpServer::HttpServer(Service& service) : service_(service), server_(std::make_unique<httplib::Server>()) {
    install_routes();
}

HttpServer::~HttpServer() {
    stop();
}

void HttpServer::install_routes() {
    auto& srv = *server_;
    Service& svc = service_;

    srv.Get("/health", [](const httplib::Request&, httplib::Response& res) {
        res.set_content(R"({"status":"ok"})", kJson);
    });

    srv.Post("/sessions", guarded([&svc](const httplib::Request& req, httplib::Response& res) {
        send_json(res, svc.create_session(body_of(req)), 201);
    }));
    srv.Get(R"(/sessions/([^/]+))", guarded([&svc](const httplib::Request& req, httplib::Response& res) {
        send_json(res, svc.session_state(req.matches[1]));
    }));
    srv.Get(R"(/sessions/([^/]+)/matrix)", guarded([&svc](const httplib::Request& req, httplib::Response& res) {
        send_json(res, svc.matrix(req.matches[1], query_of(req)));
    }));
    srv.Get(R"(/sessions/([^/]+)/cells/([^/]+)/([^/]+))",
            guarded([&svc](const httplib::Request& req, httplib::Response& res) {
                send_json(res, svc.cell(req.matches[1], req.matches[2], req.matches[3], query_of(req)));
            }));
    srv.Get(R"(/sessions/([^/]+)/groups)", guarded([&svc](const httplib::Request& req, httplib::Response& res) {
        send_json(res, svc.groups(req.matches[1], query_of(req)));
    }));
    srv.Get(R"(/sessions/([^/]+)/dandelion)", guarded([&svc](const httplib::Request& req, httplib::Response& res) {
        send_json(res, svc.dandelion(req.matches[1], query_of(req)));
    }));
    srv.Get(R"(/sessions/([^/]+)/radar/([^/]+))", guarded([&svc](const httplib::Request& req, httplib::Response& res) {
        send_json(res, svc.radar(req.matches[1], req.matches[2], query_of(req)));
    }));
    srv.Get(R"(/sessions/([^/]+)/projection)", guarded([&svc](const httplib::Request& req, httplib::Response& res) {
        send_json(res, svc.projection(req.matches[1], query_of(req)));
    }));
    srv.Get(R"(/sessions/([^/]+)/clusters)", guarded([&svc](const httplib::Request& req, httplib::Response& res) {
        send_json(res, svc.clusters(req.matches[1], query_of(req)));
    }));
    srv.Get(R"(/sessions/([^/]+)/weights)", guarded([&svc](const httplib::Request& req, httplib::Response& res) {
        send_json(res, svc.weights(req.matches[1], query_of(req)));
    }));
    srv.Get(R"(/sessions/([^/]+)/weights/export)",
            guarded([&svc](const httplib::Request& req, httplib::Response& res) {
                res.set_content(svc.export_weights(req.matches[1]), kJson);
            }));
    srv.Get(R"(/sessions/([^/]+)/weights/([^/]+)/histogram)",
            guarded([&svc](const httplib::Request& req, httplib::Response& res) {
                send_json(res, svc.histogram(req.matches[1], req.matches[2], query_of(req)));
            }));
    srv.Put(R"(/sessions/([^/]+)/weights/([^/]+)/included)",
            guarded([&svc](const httplib::Request& req, httplib::Response& res) {
                send_json(res, svc.put_included(req.matches[1], req.matches[2], body_of(req)));
            }));
    srv.Put(R"(/sessions/([^/]+)/weights/([^/]+))",
            guarded([&svc](const httplib::Request& req, httplib::Response& res) {
                send_json(res, svc.put_weight(req.matches[1], req.matches[2], body_of(req)));
            }));
    srv.Get(R"(/sessions/([^/]+)/context)", guarded([&svc](const httplib::Request& req, httplib::Response& res) {
        send_json(res, svc.context(req.matches[1], query_of(req)));
    }));
    srv.Put(R"(/sessions/([^/]+)/context)", guarded([&svc](const httplib::Request& req, httplib::Response& res) {
        send_json(res, svc.put_context(req.matches[1], body_of(req)));
    }));
}

bool HttpServer::listen(const std::string& host, int port) {
    return server_->listen(host, port);
}

int HttpServer::bind_to_any_port(const std::string& host) {
    return server_->bind_to_any_port(host);
}

bool HttpServer::listen_after_bind() {
    return server_->listen_after_bind();
}

void HttpServer::stop() {
    if (server_) server_->stop();
}

bool HttpServer::is_running() const {
    return server_->is_running();
}

void HttpServer::wait_until_ready() const {
    server_->wait_until_ready();
}

}  // namespace metricsvis
