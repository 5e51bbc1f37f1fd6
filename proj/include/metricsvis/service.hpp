#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <string>

#include "json.hpp"
#include "metricsvis/errors.hpp"
#include "metricsvis/synthetic.hpp"

namespace metricsvis {

/// Error carrying the HTTP status it should be reported with.
class ApiError : public Error {
public:
    ApiError(int status, std::string kind, const std::string& message, nlohmann::json extra = nlohmann::json::object());
    int status() const noexcept { return status_; }
    const nlohmann::json& extra() const noexcept { return extra_; }

private:
    int status_;
    nlohmann::json extra_;
};

/// Maps engine errors onto HTTP statuses (404 for unknown ids, 409 for stale
/// versions, 400 otherwise).
int http_status_for(const Error& error);

using Query = std::map<std::string, std::string>;

struct ServiceConfig {
    std::string dataset_id = "default";
    std::uint64_t seed = 0;  ///< default seed for clustering and projection
};

class Session;

/// Session registry and endpoint logic, independent of the transport.
/// Every view call takes the session's state under a shared lock, so views
/// computed for one request all come from the same (context, profile)
/// pair; mutations take it exclusively and drop the derived-artifact cache.
class Service {
public:
    Service(Dataset dataset, ServiceConfig config = {});
    ~Service();

    Service(const Service&) = delete;
    Service& operator=(const Service&) = delete;

    nlohmann::json create_session(const nlohmann::json& body);
    nlohmann::json session_state(const std::string& session_id) const;

    nlohmann::json matrix(const std::string& session_id, const Query& query) const;
    nlohmann::json cell(const std::string& session_id, const std::string& category_id, const std::string& employee_id,
                        const Query& query) const;
    nlohmann::json groups(const std::string& session_id, const Query& query) const;
    nlohmann::json dandelion(const std::string& session_id, const Query& query) const;
    nlohmann::json radar(const std::string& session_id, const std::string& group_id, const Query& query) const;
    nlohmann::json projection(const std::string& session_id, const Query& query) const;
    nlohmann::json clusters(const std::string& session_id, const Query& query) const;
    nlohmann::json weights(const std::string& session_id, const Query& query) const;
    std::string export_weights(const std::string& session_id) const;
    nlohmann::json histogram(const std::string& session_id, const std::string& category_id, const Query& query) const;
    nlohmann::json context(const std::string& session_id, const Query& query) const;

    nlohmann::json put_weight(const std::string& session_id, const std::string& category_id,
                              const nlohmann::json& body);
    nlohmann::json put_included(const std::string& session_id, const std::string& category_id,
                                const nlohmann::json& body);
    nlohmann::json put_context(const std::string& session_id, const nlohmann::json& body);

    const ServiceConfig& config() const { return config_; }

private:
    std::shared_ptr<Session> find(const std::string& session_id) const;

    std::shared_ptr<const Dataset> dataset_;
    ServiceConfig config_;
    mutable std::shared_mutex registry_mutex_;
    std::map<std::string, std::shared_ptr<Session>> sessions_;
    std::uint64_t next_session_ = 1;
};

}  // namespace metricsvis
