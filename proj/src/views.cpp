#include "metricsvis/views.hpp"

#include "metricsvis/errors.hpp"

namespace metricsvis::views {

json context_view(const EvaluationContext& ctx) {
    json behaviors = json::array();
    for (auto b : ctx.behaviors()) behaviors.push_back(to_string(b));
    json types = json::array();
    for (auto t : ctx.record_types()) types.push_back(to_string(t));
    return {{"time_range",
             {{"start", format_timestamp(ctx.time_range().start)}, {"end", format_timestamp(ctx.time_range().end)}}},
            {"behaviors", behaviors},
            {"record_types", types},
            {"weight_profile_version", ctx.weight_profile_version()}};
}

namespace {

Timestamp timestamp_field(const json& node, const char* name) {
    if (!node.contains(name) || !node[name].is_string()) {
        throw InvalidParams(std::string("time_range.") + name + " must be an ISO-8601 string");
    }
    auto ts = parse_timestamp(node[name].get<std::string>());
    if (!ts) throw InvalidParams(std::string("time_range.") + name + " is not a valid UTC timestamp");
    return *ts;
}

template <typename Enum, typename Parse>
std::set<Enum> enum_set(const json& node, const char* name, Parse parse) {
    if (!node.is_array()) throw InvalidParams(std::string(name) + " must be an array");
    std::set<Enum> out;
    for (const auto& v : node) {
        if (!v.is_string()) throw InvalidParams(std::string(name) + " entries must be strings");
        auto parsed = parse(v.get<std::string>());
        if (!parsed) throw InvalidParams("unknown " + std::string(name) + " value '" + v.get<std::string>() + "'");
        out.insert(*parsed);
    }
    return out;
}

}  // namespace

EvaluationContext parse_context(const json& body, const EvaluationContext& current) {
    if (!body.is_object()) throw InvalidParams("context body must be an object");
    TimeRange range = current.time_range();
    if (body.contains("time_range")) {
        const auto& tr = body["time_range"];
        if (!tr.is_object()) throw InvalidParams("time_range must be an object");
        range = {timestamp_field(tr, "start"), timestamp_field(tr, "end")};
    }
    auto behaviors = body.contains("behaviors")
                         ? enum_set<Behavior>(body["behaviors"], "behaviors", parse_behavior)
                         : current.behaviors();
    auto types = body.contains("record_types")
                     ? enum_set<RecordType>(body["record_types"], "record_types", parse_record_type)
                     : current.record_types();
    return EvaluationContext(range, std::move(behaviors), std::move(types), current.weight_profile_version());
}

json matrix_view(const ScoreMatrix& matrix, const MatrixOrdering& ordering, const std::optional<ColorScale>& scale) {
    json categories = json::array();
    for (std::size_t c = 0; c < matrix.categories.size(); ++c) {
        categories.push_back({{"category_id", matrix.categories[c]},
                              {"weight", matrix.weights[c]},
                              {"included", static_cast<bool>(matrix.included[c])},
                              {"total", matrix.category_totals[c]}});
    }
    json employees = json::array();
    for (std::size_t e = 0; e < matrix.employees.size(); ++e) {
        employees.push_back({{"employee_id", matrix.employees[e]}, {"total", matrix.employee_totals[e]}});
    }
    json cells = json::array();
    for (std::size_t c = 0; c < matrix.categories.size(); ++c) {
        for (std::size_t e = 0; e < matrix.employees.size(); ++e) {
            if (matrix.counts[c][e] == 0) continue;
            const double s = matrix.scores[c][e];
            cells.push_back({{"category_id", matrix.categories[c]},
                             {"employee_id", matrix.employees[e]},
                             {"count", matrix.counts[c][e]},
                             {"score", s},
                             {"bin", scale ? scale->bin(s) : kBlankBin}});
        }
    }
    json color = nullptr;
    if (scale) {
        color = {{"mode", to_string(scale->mode)},
                 {"boundaries", scale->bin_boundaries},
                 {"palette", std::vector<std::string>(scale->palette.begin(), scale->palette.end())},
                 {"degenerate", scale->degenerate},
                 {"t_min", scale->t_min},
                 {"t_max", scale->t_max}};
    }
    return {{"employees", employees},
            {"categories", categories},
            {"employee_order", ordering.employee_order},
            {"category_order", ordering.category_order},
            {"pinned", ordering.pinned},
            {"cells", cells},
            {"color_scale", color},
            {"blank_bin", kBlankBin},
            {"grand_total", matrix.grand_total()},
            {"total_count", matrix.total_count()},
            {"context", context_view(matrix.context)}};
}

json cell_view(const CellDetail& cell, std::string_view category_id, std::string_view employee_id) {
    return {{"category_id", category_id},
            {"employee_id", employee_id},
            {"score", cell.score},
            {"count", cell.count},
            {"weight", cell.weight}};
}

json profile_view(const WeightProfile& profile) {
    json entries = json::object();
    for (const auto& [id, e] : profile.entries()) {
        const auto mean = mean_rating(e.ratings);
        entries[id] = {{"weight", e.weight},
                       {"included", e.included},
                       {"edited", e.edited},
                       {"rating_count", e.ratings.size()},
                       {"mean_rating", mean ? json(*mean) : json(nullptr)}};
    }
    return {{"source", to_string(profile.source())}, {"entries", entries}};
}

json histogram_view(const RatingHistogram& histogram) {
    return {{"category_id", histogram.category_id},
            {"counts", histogram.counts},
            {"total", histogram.total()},
            {"mean", histogram.mean ? json(*histogram.mean) : json(nullptr)}};
}

json groups_view(const std::vector<GroupSummary>& groups, const ScoreMatrix& matrix, std::size_t k_top) {
    json out = json::array();
    for (const auto& g : groups) {
        out.push_back({{"group_id", g.group_id},
                       {"member_ids", g.member_ids},
                       {"category_counts", g.category_counts},
                       {"top_categories", top_categories(g, k_top)},
                       {"total_count", g.total_count()},
                       {"weighted_total", weighted_total(g, matrix)}});
    }
    return out;
}

json dandelion_view(const DandelionSpec& spec) {
    json glyphs = json::array();
    for (const auto& g : spec.glyphs) {
        json lengths = json::object();
        for (std::size_t a = 0; a < spec.axes.size(); ++a) lengths[spec.axes[a]] = g.axis_lengths[a];
        glyphs.push_back({{"group_id", g.group_id},
                          {"axis_counts", g.axis_counts},
                          {"axis_lengths", g.axis_lengths},
                          {"lengths_by_category", lengths}});
    }
    return {{"axes", spec.axes},
            {"axis_angles", spec.axis_angles},
            {"glyphs", glyphs},
            {"rotation_offset", spec.rotation_offset},
            {"transform", to_string(spec.transform)},
            {"k_top", spec.k},
            {"over_soft_cap", spec.over_soft_cap}};
}

json radar_view(const StackedRadarSpec& spec) {
    json ribbons = json::array();
    for (const auto& r : spec.ribbons) {
        ribbons.push_back({{"employee_id", r.employee_id}, {"counts", r.counts}, {"fractions", r.fractions}});
    }
    return {{"group_id", spec.group_id},
            {"axes", spec.axes},
            {"axis_totals", spec.axis_totals},
            {"axis_lengths", spec.axis_lengths},
            {"member_order", spec.member_order},
            {"ribbons", ribbons},
            {"inner_radius_fraction", spec.inner_radius_fraction},
            {"rotation_offset", spec.rotation_offset},
            {"transform", to_string(spec.transform)}};
}

json clusters_view(const ClusterResult& clusters) {
    json assignments = json::object();
    for (std::size_t i = 0; i < clusters.employee_ids.size(); ++i) {
        assignments[clusters.employee_ids[i]] = clusters.labels[i];
    }
    return {{"k", clusters.k},
            {"seed", clusters.seed},
            {"restarts", clusters.options.restarts},
            {"max_iterations", clusters.options.max_iterations},
            {"tolerance", clusters.options.tolerance},
            {"assignments", assignments},
            {"cluster_sizes", clusters.cluster_sizes()},
            {"categories", clusters.categories},
            {"centroids", clusters.centroids},
            {"inertia", clusters.inertia},
            {"iterations", clusters.iterations}};
}

json projection_view(const ProjectionResult& projection) {
    json coords = json::object();
    for (std::size_t i = 0; i < projection.employee_ids.size(); ++i) {
        coords[projection.employee_ids[i]] = {projection.coordinates[i][0], projection.coordinates[i][1]};
    }
    return {{"coordinates", coords},
            {"seed", projection.seed},
            {"parameters",
             {{"perplexity", projection.params.perplexity},
              {"iterations", projection.params.iterations},
              {"learning_rate", projection.params.learning_rate}}}};
}

}  // namespace metricsvis::views
