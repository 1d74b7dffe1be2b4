#pragma once

#include <memory>
#include <string>
#include <string_view>

#include <json.hpp>

#include "scholia/entity_api.hpp"
#include "scholia/query_gen.hpp"
#include "scholia/resolver.hpp"
#include "scholia/sparql_client.hpp"

namespace scholia {

/// Clients and configuration shared by the service and the command line.
struct backend {
    std::shared_ptr<sparql_client> sparql;
    std::shared_ptr<entity_api_client> api;
    property_registry registry;
    aspect_rules rules;
    /// The generated query is appended URL-encoded after '#'.
    std::string editor_url = "https://query.wikidata.org/";
    std::string language = "en";

    /// SCHOLIA_ENDPOINT, SCHOLIA_CACHE_TTL, SCHOLIA_API_URL,
    /// SCHOLIA_WIKI_API_URL, SCHOLIA_ASPECT_RULES, SCHOLIA_EDITOR_URL.
    static backend from_env();
};

/// JSON Schema (draft 2020-12 subset) of the api_panel response for a panel.
nlohmann::json panel_result_schema(const panel_info& info);

/// The catalog served at /api/panels.
nlohmann::json panel_catalog_json();

/// {"type": "uri"|"literal"|"bnode", "value", "datatype"?, "xml:lang"?, "id"?}
nlohmann::json term_json(const rdf_term& term);

/// Runs one panel and shapes the response: rows for tables and graphs,
/// per-year series for the bar charts, points for the scatter plot.
/// Throws unknown_panel and whatever the SPARQL client throws.
nlohmann::json run_panel(backend& b, aspect a, std::string_view panel, entity_id subject);

/// Shapes an already executed result set (used by run_panel and tests).
nlohmann::json shape_panel(const panel_info& info, entity_id subject, const query_text& query,
                           const result_set& results, bool from_cache,
                           std::string_view editor_url);

std::string editor_link(std::string_view editor_url, const query_text& query);

/// RFC 4180 CSV with a header row in projection order.
std::string to_csv(const result_set& results);

} // namespace scholia
