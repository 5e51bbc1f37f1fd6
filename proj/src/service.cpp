#include "metricsvis/service.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "metricsvis/analysis.hpp"
#include "metricsvis/groups.hpp"
#include "metricsvis/matrix.hpp"
#include "metricsvis/views.hpp"

namespace metricsvis {

using nlohmann::json;

ApiError::ApiError(int status, std::string kind, const std::string& message, json extra)
    : Error(std::move(kind), message), status_(status), extra_(std::move(extra)) {}

int http_status_for(const Error& error) {
    if (const auto* api = dynamic_cast<const ApiError*>(&error)) return api->status();
    const auto& kind = error.kind();
    if (kind == "unknown_category" || kind == "unknown_employee" || kind == "unknown_key") return 404;
    return 400;
}

class Session {
public:
    Session(std::string id, std::shared_ptr<const Dataset> dataset)
        : id_(std::move(id)),
          dataset_(std::move(dataset)),
          profile_(dataset_->profile),
          context_(EvaluationContext::covering(dataset_->records, profile_.version())) {}

    const std::string& id() const { return id_; }
    const Dataset& dataset() const { return *dataset_; }

    std::shared_mutex& state_mutex() const { return state_mutex_; }

    // The accessors below require state_mutex() to be held.
    const WeightProfile& profile() const { return profile_; }
    const EvaluationContext& context() const { return context_; }
    long context_version() const { return context_version_; }

    void set_profile(WeightProfile profile) {
        profile_ = std::move(profile);
        context_ = context_.with_profile_version(profile_.version());
        drop_cache();
    }

    void set_context(EvaluationContext context) {
        context_ = std::move(context);
        ++context_version_;
        drop_cache();
    }

    /// Memoizes a derived artifact for the current state. Callers hold the
    /// state lock (shared or exclusive) so the state cannot change while the
    /// artifact is computed.
    template <typename T, typename Fn>
    std::shared_ptr<const T> cached(const std::string& name, Fn&& compute) const {
        const std::string key = "p" + std::to_string(profile_.version()) + ":c" + std::to_string(context_version_) +
                                ":" + name;
        {
            std::lock_guard lock(cache_mutex_);
            auto it = cache_.find(key);
            if (it != cache_.end()) return std::static_pointer_cast<const T>(it->second);
        }
        auto value = std::make_shared<const T>(compute());
        std::lock_guard lock(cache_mutex_);
        auto [it, inserted] = cache_.emplace(key, value);
        return std::static_pointer_cast<const T>(it->second);
    }

private:
    void drop_cache() {
        std::lock_guard lock(cache_mutex_);
        cache_.clear();
    }

    std::string id_;
    std::shared_ptr<const Dataset> dataset_;
    mutable std::shared_mutex state_mutex_;
    WeightProfile profile_;
    EvaluationContext context_;
    long context_version_ = 1;

    mutable std::mutex cache_mutex_;
    mutable std::map<std::string, std::shared_ptr<const void>> cache_;
};

namespace {

std::optional<std::string> param(const Query& query, const std::string& name) {
    auto it = query.find(name);
    if (it == query.end() || it->second.empty()) return std::nullopt;
    return it->second;
}

template <typename T>
std::optional<T> numeric_param(const Query& query, const std::string& name) {
    auto text = param(query, name);
    if (!text) return std::nullopt;
    T value{};
    if constexpr (std::is_floating_point_v<T>) {
        std::size_t used = 0;
        try {
            value = static_cast<T>(std::stod(*text, &used));
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != text->size() || !std::isfinite(value)) {
            throw InvalidParams("query parameter '" + name + "' is not a number");
        }
    } else {
        auto [ptr, ec] = std::from_chars(text->data(), text->data() + text->size(), value);
        if (ec != std::errc() || ptr != text->data() + text->size()) {
            throw InvalidParams("query parameter '" + name + "' is not a non-negative integer");
        }
    }
    return value;
}

/// 409 when the client names a version other than the current one.
void check_versions(const Session& s, const Query& query) {
    const auto version = numeric_param<long>(query, "version");
    const auto context_version = numeric_param<long>(query, "context_version");
    if ((version && *version != s.profile().version()) ||
        (context_version && *context_version != s.context_version())) {
        throw ApiError(409, "version_conflict",
                       "stale version; current profile version is " + std::to_string(s.profile().version()) +
                           ", context version " + std::to_string(s.context_version()),
                       {{"current_version", s.profile().version()},
                        {"current_context_version", s.context_version()}});
    }
}

void check_body_version(const Session& s, const json& body) {
    if (!body.contains("version")) return;
    if (!body["version"].is_number_integer()) throw InvalidParams("version must be an integer");
    check_versions(s, {{"version", std::to_string(body["version"].get<long>())}});
}

json envelope(const Session& s, json payload) {
    payload["session_id"] = s.id();
    payload["version"] = s.profile().version();
    payload["context_version"] = s.context_version();
    return payload;
}

std::shared_ptr<const std::vector<ActivityRecord>> filtered(const Session& s) {
    return s.cached<std::vector<ActivityRecord>>("records",
                                                 [&] { return filter_records(s.dataset().records, s.context()); });
}

std::shared_ptr<const ScoreMatrix> matrix_of(const Session& s) {
    return s.cached<ScoreMatrix>("matrix", [&] {
        return build_matrix(*filtered(s), s.dataset().employees, s.profile(), s.context());
    });
}

std::shared_ptr<const FeatureTable> features_of(const Session& s) {
    return s.cached<FeatureTable>("features", [&] { return build_features(*matrix_of(s)); });
}

Direction direction_param(const Query& query) {
    const auto d = param(query, "direction").value_or("desc");
    if (d == "desc" || d == "descending") return Direction::descending;
    if (d == "asc" || d == "ascending") return Direction::ascending;
    throw InvalidParams("direction must be 'asc' or 'desc'");
}

Axis axis_param(const std::string& text) {
    if (text == "employees") return Axis::employees;
    if (text == "categories") return Axis::categories;
    throw InvalidParams("sort_axis must be 'employees' or 'categories'");
}

std::vector<std::string> split_ids(const std::string& text) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto comma = text.find(',', pos);
        auto item = text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        if (!item.empty()) out.push_back(std::move(item));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

std::size_t k_top_param(const Query& query) {
    const auto k = numeric_param<std::size_t>(query, "k_top").value_or(kDefaultTopK);
    if (k == 0) throw InvalidParams("k_top must be at least 1");
    return k;
}

AxisTransform transform_param(const Query& query) {
    const auto t = param(query, "transform").value_or("log");
    if (t == "log") return AxisTransform::log;
    if (t == "linear") return AxisTransform::linear;
    throw InvalidParams("transform must be 'log' or 'linear'");
}

std::shared_ptr<const ClusterResult> clusters_of(const Session& s, const Query& query, std::uint64_t default_seed) {
    const auto n = s.dataset().employees.size();
    const auto k = numeric_param<std::size_t>(query, "k").value_or(std::min(kDefaultClusters, n));
    const auto seed = numeric_param<std::uint64_t>(query, "seed").value_or(default_seed);
    return s.cached<ClusterResult>("clusters:" + std::to_string(k) + ":" + std::to_string(seed),
                                   [&] { return kmeans(*features_of(s), k, seed); });
}

std::shared_ptr<const std::vector<GroupSummary>> groups_of(const Session& s, const Query& query,
                                                           std::uint64_t default_seed) {
    const auto by = param(query, "by").value_or("shift");
    if (by == "shift" || by == "district") {
        const auto key = by == "shift" ? GroupKey::shift : GroupKey::district;
        return s.cached<std::vector<GroupSummary>>("groups:" + by, [&] {
            return group_by_assignment(*filtered(s), s.dataset().employees, key);
        });
    }
    if (by == "cluster") {
        auto clusters = clusters_of(s, query, default_seed);
        return s.cached<std::vector<GroupSummary>>(
            "groups:cluster:" + std::to_string(clusters->k) + ":" + std::to_string(clusters->seed),
            [&] { return group_by_clusters(*clusters, *filtered(s), s.dataset().employees); });
    }
    throw InvalidParams("by must be 'shift', 'district', or 'cluster'");
}

}  // namespace

Service::Service(Dataset dataset, ServiceConfig config)
    : dataset_(std::make_shared<const Dataset>(std::move(dataset))), config_(std::move(config)) {}

Service::~Service() = default;

std::shared_ptr<Session> Service::find(const std::string& session_id) const {
    std::shared_lock lock(registry_mutex_);
    auto it = sessions_.find(session_id);
    if (it == sessions_.end()) throw ApiError(404, "unknown_session", "no session '" + session_id + "'");
    return it->second;
}

json Service::create_session(const json& body) {
    std::string dataset = config_.dataset_id;
    if (body.is_object() && body.contains("dataset")) {
        if (!body["dataset"].is_string()) throw InvalidParams("dataset must be a string");
        dataset = body["dataset"].get<std::string>();
    }
    if (dataset != config_.dataset_id) throw ApiError(404, "unknown_dataset", "no dataset '" + dataset + "'");

    std::unique_lock lock(registry_mutex_);
    const auto id = "s" + std::to_string(next_session_++);
    auto session = std::make_shared<Session>(id, dataset_);
    sessions_.emplace(id, session);
    lock.unlock();
    return session_state(id);
}

json Service::session_state(const std::string& session_id) const {
    auto s = find(session_id);
    std::shared_lock lock(s->state_mutex());
    return envelope(*s, {{"dataset", config_.dataset_id},
                         {"context", views::context_view(s->context())},
                         {"employee_count", s->dataset().employees.size()},
                         {"record_count", s->dataset().records.size()}});
}

json Service::matrix(const std::string& session_id, const Query& query) const {
    auto s = find(session_id);
    std::shared_lock lock(s->state_mutex());
    check_versions(*s, query);
    auto m = matrix_of(*s);

    MatrixOrdering ordering = sort_by_total(*m, Axis::employees, Direction::descending);
    ordering = sort_by_total(*m, Axis::categories, Direction::descending, ordering);
    if (auto axis_text = param(query, "sort_axis")) {
        const auto axis = axis_param(*axis_text);
        const auto direction = direction_param(query);
        if (auto key = param(query, "sort_key")) {
            ordering = sort_by_key(*m, axis, *key, direction, ordering);
        } else {
            ordering = sort_by_total(*m, axis, direction, ordering);
        }
    }
    if (auto pins = param(query, "pins")) ordering = pin_selection(ordering, split_ids(*pins));

    auto mode = BinningMode::equal_interval;
    if (auto b = param(query, "binning")) {
        if (*b == "quantile") {
            mode = BinningMode::quantile;
        } else if (*b != "equal_interval") {
            throw InvalidParams("binning must be 'equal_interval' or 'quantile'");
        }
    }
    std::optional<ColorScale> scale;
    try {
        scale = build_color_scale(*m, mode);
    } catch (const DegenerateScale&) {
        // no positive cell: every bin is blank
    }
    return envelope(*s, views::matrix_view(*m, ordering, scale));
}

json Service::cell(const std::string& session_id, const std::string& category_id, const std::string& employee_id,
                   const Query& query) const {
    auto s = find(session_id);
    std::shared_lock lock(s->state_mutex());
    check_versions(*s, query);
    return envelope(*s, views::cell_view(cell_detail(*matrix_of(*s), category_id, employee_id), category_id,
                                         employee_id));
}

json Service::groups(const std::string& session_id, const Query& query) const {
    auto s = find(session_id);
    std::shared_lock lock(s->state_mutex());
    check_versions(*s, query);
    auto groups = groups_of(*s, query, config_.seed);
    return envelope(*s, {{"by", param(query, "by").value_or("shift")},
                         {"groups", views::groups_view(*groups, *matrix_of(*s), k_top_param(query))},
                         {"grand_total", matrix_of(*s)->grand_total()}});
}

json Service::dandelion(const std::string& session_id, const Query& query) const {
    auto s = find(session_id);
    std::shared_lock lock(s->state_mutex());
    check_versions(*s, query);
    auto groups = groups_of(*s, query, config_.seed);
    auto payload = views::dandelion_view(build_dandelion(*groups, k_top_param(query), transform_param(query)));
    payload["by"] = param(query, "by").value_or("shift");
    return envelope(*s, std::move(payload));
}

json Service::radar(const std::string& session_id, const std::string& group_id, const Query& query) const {
    auto s = find(session_id);
    std::shared_lock lock(s->state_mutex());
    check_versions(*s, query);
    auto groups = groups_of(*s, query, config_.seed);
    const auto transform = transform_param(query);
    auto it = std::find_if(groups->begin(), groups->end(), [&](const auto& g) { return g.group_id == group_id; });
    if (it == groups->end()) throw ApiError(404, "unknown_group", "no group '" + group_id + "'");

    const auto spec = build_dandelion(*groups, k_top_param(query), transform);
    auto members = s->cached<MemberCounts>("members", [&] { return count_by_member(*filtered(*s)); });
    auto payload = views::radar_view(build_stacked_radar(*it, *members, spec.axes, transform));
    payload["by"] = param(query, "by").value_or("shift");
    return envelope(*s, std::move(payload));
}

json Service::projection(const std::string& session_id, const Query& query) const {
    auto s = find(session_id);
    std::shared_lock lock(s->state_mutex());
    check_versions(*s, query);
    const auto n = static_cast<double>(s->dataset().employees.size());
    ProjectionParams params;
    params.perplexity = numeric_param<double>(query, "perplexity").value_or(std::min(params.perplexity, std::max(1.0, (n - 1.0) / 3.0)));
    params.iterations = numeric_param<std::size_t>(query, "iterations").value_or(params.iterations);
    params.learning_rate = numeric_param<double>(query, "learning_rate").value_or(params.learning_rate);
    const auto seed = numeric_param<std::uint64_t>(query, "seed").value_or(config_.seed);

    char key[128];
    std::snprintf(key, sizeof(key), "projection:%.17g:%zu:%.17g:%llu", params.perplexity, params.iterations,
                  params.learning_rate, static_cast<unsigned long long>(seed));
    auto result = s->cached<ProjectionResult>(key, [&] { return project(*features_of(*s), params, seed); });
    auto payload = views::projection_view(*result);
    if (param(query, "k")) payload["clusters"] = views::clusters_view(*clusters_of(*s, query, config_.seed));
    return envelope(*s, std::move(payload));
}

json Service::clusters(const std::string& session_id, const Query& query) const {
    auto s = find(session_id);
    std::shared_lock lock(s->state_mutex());
    check_versions(*s, query);
    return envelope(*s, views::clusters_view(*clusters_of(*s, query, config_.seed)));
}

json Service::weights(const std::string& session_id, const Query& query) const {
    auto s = find(session_id);
    std::shared_lock lock(s->state_mutex());
    check_versions(*s, query);
    return envelope(*s, views::profile_view(s->profile()));
}

std::string Service::export_weights(const std::string& session_id) const {
    auto s = find(session_id);
    std::shared_lock lock(s->state_mutex());
    return export_weight_profile(s->profile());
}

json Service::histogram(const std::string& session_id, const std::string& category_id, const Query& query) const {
    auto s = find(session_id);
    std::shared_lock lock(s->state_mutex());
    check_versions(*s, query);
    return envelope(*s, views::histogram_view(rating_histogram(s->profile(), category_id)));
}

json Service::context(const std::string& session_id, const Query& query) const {
    auto s = find(session_id);
    std::shared_lock lock(s->state_mutex());
    check_versions(*s, query);
    return envelope(*s, {{"context", views::context_view(s->context())}});
}

json Service::put_weight(const std::string& session_id, const std::string& category_id, const json& body) {
    auto s = find(session_id);
    if (!body.is_object() || !body.contains("weight") || !body["weight"].is_number()) {
        throw InvalidParams("body must be {\"weight\": number}");
    }
    std::unique_lock lock(s->state_mutex());
    check_body_version(*s, body);
    s->set_profile(set_weight(s->profile(), category_id, body["weight"].get<double>()));
    const auto& e = s->profile().entry(category_id);
    return envelope(*s, {{"category_id", category_id}, {"weight", e.weight}, {"included", e.included}});
}

json Service::put_included(const std::string& session_id, const std::string& category_id, const json& body) {
    auto s = find(session_id);
    if (!body.is_object() || !body.contains("included") || !body["included"].is_boolean()) {
        throw InvalidParams("body must be {\"included\": boolean}");
    }
    std::unique_lock lock(s->state_mutex());
    check_body_version(*s, body);
    s->set_profile(set_included(s->profile(), category_id, body["included"].get<bool>()));
    const auto& e = s->profile().entry(category_id);
    return envelope(*s, {{"category_id", category_id}, {"weight", e.weight}, {"included", e.included}});
}

json Service::put_context(const std::string& session_id, const json& body) {
    auto s = find(session_id);
    std::unique_lock lock(s->state_mutex());
    check_body_version(*s, body);
    if (body.is_object() && body.contains("context_version")) {
        if (!body["context_version"].is_number_integer()) throw InvalidParams("context_version must be an integer");
        check_versions(*s, {{"context_version", std::to_string(body["context_version"].get<long>())}});
    }
    s->set_context(views::parse_context(body, s->context()));
    return envelope(*s, {{"context", views::context_view(s->context())}});
}

}  // namespace metricsvis
