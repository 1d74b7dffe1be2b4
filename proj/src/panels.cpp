#include "scholia/panels.hpp"

#include <cstdlib>
#include <set>

#include "scholia/stats.hpp"

namespace scholia {

using nlohmann::json;

backend backend::from_env() {
    backend b;
    auto endpoint = endpoint_config::from_env();
    endpoint.validate();
    b.sparql = std::make_shared<sparql_client>(endpoint);
    b.api = std::make_shared<entity_api_client>(entity_api_config::from_env());
    b.rules = aspect_rules::from_env();
    if (const char* editor = std::getenv("SCHOLIA_EDITOR_URL"); editor && *editor) {
        b.editor_url = editor;
    }
    return b;
}

namespace {

json cell_schema() {
    return {{"type", "object"},
            {"required", {"type", "value"}},
            {"properties",
             {{"type", {{"enum", {"uri", "literal", "bnode"}}}},
              {"value", {{"type", "string"}}},
              {"datatype", {{"type", "string"}}},
              {"xml:lang", {{"type", "string"}}},
              {"id", {{"type", "string"}, {"pattern", "^[QP][1-9][0-9]*$"}}}}},
            {"additionalProperties", false}};
}

json rows_schema(const panel_info& info) {
    json props = json::object();
    for (auto col : info.columns) {
        props[std::string(col)] = cell_schema();
    }
    return {{"type", "array"},
            {"items", {{"type", "object"}, {"properties", props}, {"additionalProperties", false}}}};
}

json year_values_schema(const char* measure, const char* measure_type) {
    return {{"type", "array"},
            {"items",
             {{"type", "object"},
              {"required", {"year", measure}},
              {"properties",
               {{"year", {{"type", "integer"}}},
                {measure, {{"type", measure_type}, {"minimum", 0}}}}}}}};
}

} // namespace

json term_json(const rdf_term& term) {
    json out;
    switch (term.kind) {
    case rdf_term::type::iri: out["type"] = "uri"; break;
    case rdf_term::type::literal: out["type"] = "literal"; break;
    case rdf_term::type::bnode: out["type"] = "bnode"; break;
    }
    out["value"] = term.value;
    if (!term.datatype.empty()) {
        out["datatype"] = term.datatype;
    }
    if (!term.lang.empty()) {
        out["xml:lang"] = term.lang;
    }
    if (term.is_iri()) {
        if (auto id = term.as_entity()) {
            out["id"] = id->str();
        }
    }
    return out;
}

json panel_result_schema(const panel_info& info) {
    json props = {
        {"aspect", {{"const", std::string(to_segment(info.owner))}}},
        {"panel", {{"const", std::string(info.name)}}},
        {"subject", {{"type", "string"}, {"pattern", "^Q[1-9][0-9]*$"}}},
        {"kind", {{"const", std::string(to_string(info.kind))}}},
        {"schema", {{"type", "object"}}},
        {"columns", {{"type", "array"}, {"items", {{"type", "string"}}}}},
        {"generated_query", {{"type", "string"}, {"minLength", 1}}},
        {"editor_url", {{"type", "string"}}},
        {"cache", {{"enum", {"hit", "miss"}}}},
    };
    json required = {"aspect", "panel", "subject", "kind", "schema", "columns",
                     "generated_query", "editor_url", "cache"};
    switch (info.kind) {
    case panel_kind::table:
        props["rows"] = rows_schema(info);
        required.push_back("rows");
        break;
    case panel_kind::graph:
        props["rows"] = rows_schema(info);
        props["nodes"] = {{"type", "array"},
                          {"items",
                           {{"type", "object"},
                            {"required", {"id", "label"}},
                            {"properties",
                             {{"id", {{"type", "string"}}}, {"label", {{"type", "string"}}}}}}}};
        props["edges"] = {{"type", "array"},
                          {"items",
                           {{"type", "object"},
                            {"required", {"source", "target"}},
                            {"properties",
                             {{"source", {{"type", "string"}}},
                              {"target", {{"type", "string"}}},
                              {"weight", {{"type", "number"}}}}}}}};
        required.push_back("rows");
        required.push_back("nodes");
        required.push_back("edges");
        break;
    case panel_kind::year_role_bars:
        props["years"] = {{"type", "array"}, {"items", {{"type", "integer"}}}};
        props["undated"] = {{"type", "integer"}, {"minimum", 0}};
        props["series"]
            = {{"type", "array"},
               {"minItems", 5},
               {"maxItems", 5},
               {"items",
                {{"type", "object"},
                 {"required", {"key", "values"}},
                 {"properties",
                  {{"key", {{"enum", {"first", "middle", "last", "solo", "unknown"}}}},
                   {"values", year_values_schema("count", "integer")}}}}}};
        required.push_back("years");
        required.push_back("series");
        required.push_back("undated");
        break;
    case panel_kind::year_author_bars:
        props["years"] = {{"type", "array"}, {"items", {{"type", "integer"}}}};
        props["missing_pages"] = {{"type", "integer"}, {"minimum", 0}};
        props["total"] = {{"type", "number"}, {"minimum", 0}};
        props["series"]
            = {{"type", "array"},
               {"items",
                {{"type", "object"},
                 {"required", {"key", "label", "values"}},
                 {"properties",
                  {{"key", {{"type", "string"}, {"pattern", "^Q[1-9][0-9]*$"}}},
                   {"label", {{"type", "string"}}},
                   {"values", year_values_schema("value", "number")}}}}}};
        required.push_back("years");
        required.push_back("series");
        required.push_back("total");
        break;
    case panel_kind::scatter:
        props["points"] = {{"type", "array"},
                           {"items",
                            {{"type", "object"},
                             {"required", {"x", "y", "venue", "label"}},
                             {"properties",
                              {{"x", {{"type", "integer"}, {"minimum", 0}}},
                               {"y", {{"type", "integer"}, {"minimum", 0}}},
                               {"venue", {{"type", "string"}, {"pattern", "^Q[1-9][0-9]*$"}}},
                               {"label", {{"type", "string"}}}}}}}};
        required.push_back("points");
        break;
    }
    return {{"$schema", "https://json-schema.org/draft/2020-12/schema"},
            {"title", std::string(to_segment(info.owner)) + "/" + std::string(info.name)},
            {"type", "object"},
            {"required", required},
            {"properties", props}};
}

json panel_catalog_json() {
    json panels = json::array();
    for (const auto& info : panel_catalog()) {
        json columns = json::array();
        for (auto c : info.columns) {
            columns.push_back(std::string(c));
        }
        panels.push_back({{"aspect", std::string(to_segment(info.owner))},
                          {"name", std::string(info.name)},
                          {"tier", info.tier},
                          {"kind", std::string(to_string(info.kind))},
                          {"columns", columns},
                          {"description", std::string(info.description)},
                          {"result_schema", panel_result_schema(info)}});
    }
    json aspects = json::array();
    for (auto a : all_aspects()) {
        aspects.push_back(std::string(to_segment(a)));
    }
    return {{"aspects", aspects}, {"panels", panels}};
}

std::string editor_link(std::string_view editor_url, const query_text& query) {
    return std::string(editor_url) + "#" + http::url_encode(query.text());
}

namespace {

json rows_json(const result_set& results) {
    json rows = json::array();
    for (const auto& row : results.rows) {
        json r = json::object();
        for (const auto& [var, term] : row) {
            r[var] = term_json(term);
        }
        rows.push_back(std::move(r));
    }
    return rows;
}

void add_role_series(json& doc, const result_set& results, entity_id subject) {
    auto records = stats::records_from_author_rows(results, subject);
    auto hist = stats::papers_per_year_by_role(records, subject);
    std::set<int> years;
    for (const auto& [key, _] : hist) {
        years.insert(key.first);
    }
    long undated = 0;
    for (const auto& r : records) {
        undated += r.publication_year ? 0 : 1;
    }
    json series = json::array();
    for (auto role : {stats::author_role::first, stats::author_role::middle,
                      stats::author_role::last, stats::author_role::solo,
                      stats::author_role::unknown}) {
        json values = json::array();
        for (int y : years) {
            auto it = hist.find({y, role});
            values.push_back({{"year", y}, {"count", it == hist.end() ? 0 : it->second}});
        }
        series.push_back({{"key", std::string(stats::to_string(role))}, {"values", values}});
    }
    doc["years"] = json(std::vector<int>(years.begin(), years.end()));
    doc["series"] = series;
    doc["undated"] = undated;
}

void add_author_series(json& doc, const stats::year_author_mass& mass,
                       const std::map<entity_id, std::string>& labels) {
    std::set<int> years;
    std::set<entity_id> authors;
    double total = 0;
    for (const auto& [key, v] : mass) {
        years.insert(key.first);
        authors.insert(key.second);
        total += v;
    }
    json series = json::array();
    for (auto a : authors) {
        json values = json::array();
        for (int y : years) {
            auto it = mass.find({y, a});
            values.push_back({{"year", y}, {"value", it == mass.end() ? 0.0 : it->second}});
        }
        auto label = labels.find(a);
        series.push_back({{"key", a.str()},
                          {"label", label == labels.end() ? a.str() : label->second},
                          {"values", values}});
    }
    doc["years"] = json(std::vector<int>(years.begin(), years.end()));
    doc["series"] = series;
    doc["total"] = total;
}

std::map<entity_id, std::string> author_labels(const result_set& results) {
    std::map<entity_id, std::string> out;
    for (const auto& row : results.rows) {
        const auto* a = find(row, "author");
        const auto* l = find(row, "authorLabel");
        if (a && l) {
            if (auto id = a->as_entity()) {
                out.emplace(*id, l->value);
            }
        }
    }
    return out;
}

void add_graph(json& doc, const panel_info& info, const result_set& results) {
    // The first two entity columns are the endpoints of an edge.
    std::vector<std::string> ends;
    for (auto c : info.columns) {
        if (!std::string_view(c).ends_with("Label") && ends.size() < 2
            && c != "works") {
            ends.emplace_back(c);
        }
    }
    json nodes = json::array();
    json edges = json::array();
    std::set<std::string> seen;
    for (const auto& row : results.rows) {
        std::vector<std::string> ids;
        for (const auto& end : ends) {
            const auto* t = find(row, end);
            auto id = t ? t->as_entity() : std::nullopt;
            if (!id) {
                break;
            }
            ids.push_back(id->str());
            if (seen.insert(id->str()).second) {
                const auto* l = find(row, end + "Label");
                nodes.push_back({{"id", id->str()}, {"label", l ? l->value : id->str()}});
            }
        }
        if (ids.size() == 2) {
            json e = {{"source", ids[0]}, {"target", ids[1]}};
            if (const auto* w = find(row, "works")) {
                e["weight"] = w->as_number().value_or(1);
            }
            edges.push_back(std::move(e));
        }
    }
    doc["nodes"] = nodes;
    doc["edges"] = edges;
}

} // namespace

json shape_panel(const panel_info& info, entity_id subject, const query_text& query,
                 const result_set& results, bool from_cache, std::string_view editor_url) {
    json columns = json::array();
    for (auto c : info.columns) {
        columns.push_back(std::string(c));
    }
    json doc = {{"aspect", std::string(to_segment(info.owner))},
                {"panel", std::string(info.name)},
                {"subject", subject.str()},
                {"kind", std::string(to_string(info.kind))},
                {"schema", {{"kind", std::string(to_string(info.kind))},
                            {"catalog", "/api/panels"},
                            {"tier", info.tier}}},
                {"columns", columns},
                {"generated_query", query.text()},
                {"editor_url", editor_link(editor_url, query)},
                {"cache", from_cache ? "hit" : "miss"}};
    switch (info.kind) {
    case panel_kind::table:
        doc["rows"] = rows_json(results);
        break;
    case panel_kind::graph:
        doc["rows"] = rows_json(results);
        add_graph(doc, info, results);
        break;
    case panel_kind::year_role_bars:
        add_role_series(doc, results, subject);
        break;
    case panel_kind::year_author_bars:
        if (info.name == "conorm-citations-raw") {
            add_author_series(doc,
                              stats::coauthor_normalized_citations(
                                  stats::citation_rows_from(results)),
                              author_labels(results));
        } else {
            auto records = stats::records_from_page_rows(results);
            std::set<entity_id> authors;
            for (const auto& r : records) {
                for (const auto& slot : r.authors) {
                    if (slot.item()) {
                        authors.insert(*slot.item());
                    }
                }
            }
            auto production = stats::normalized_page_production(records, authors);
            add_author_series(doc, production.pages, author_labels(results));
            doc["missing_pages"] = production.missing_pages;
        }
        break;
    case panel_kind::scatter: {
        json points = json::array();
        for (const auto& p : stats::publisher_scatter(stats::venue_counts_from(results))) {
            points.push_back({{"x", p.x}, {"y", p.y}, {"venue", p.venue.str()},
                              {"label", p.label}});
        }
        doc["points"] = points;
        break;
    }
    }
    return doc;
}

json run_panel(backend& b, aspect a, std::string_view panel, entity_id subject) {
    const auto* info = find_panel(a, panel);
    if (!info) {
        throw unknown_panel(std::string(to_segment(a)), std::string(panel));
    }
    if (!subject.is_item()) {
        throw precondition_error("panels need an item id, got " + subject.str());
    }
    panel_query_spec spec{a, std::string(panel), subject, b.language};
    auto query = build_panel_query(spec, b.registry);
    auto run = b.sparql->execute_traced(query);
    return shape_panel(*info, subject, query, run.results, run.from_cache, b.editor_url);
}

std::string to_csv(const result_set& results) {
    auto quote = [](const std::string& v) {
        if (v.find_first_of(",\"\r\n") == std::string::npos) {
            return v;
        }
        std::string out = "\"";
        for (char c : v) {
            if (c == '"') {
                out += "\"\"";
            } else {
                out.push_back(c);
            }
        }
        out.push_back('"');
        return out;
    };
    std::string out;
    for (std::size_t i = 0; i < results.variables.size(); ++i) {
        out += (i ? "," : "") + quote(results.variables[i]);
    }
    out += "\r\n";
    for (const auto& row : results.rows) {
        for (std::size_t i = 0; i < results.variables.size(); ++i) {
            const auto* t = find(row, results.variables[i]);
            out += (i ? "," : "") + quote(t ? t->value : std::string{});
        }
        out += "\r\n";
    }
    return out;
}

} // namespace scholia
