#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "scholia/model.hpp"
#include "scholia/sparql_client.hpp"

namespace scholia {

/// How a panel's rows are presented (and aggregated by the service).
enum class panel_kind {
    table,
    year_role_bars,   // stacked per-year bars keyed by author role
    year_author_bars, // stacked per-year bars keyed by author
    scatter,
    graph,
};

std::string_view to_string(panel_kind kind);

struct panel_query_spec {
    aspect subject_aspect;
    std::string panel;
    entity_id subject;
    std::string language = "en";
    int limit = 500;
};

struct panel_info {
    aspect owner;
    std::string_view name;
    int tier;
    panel_kind kind;
    /// Projection order of the generated SELECT.
    std::vector<std::string_view> columns;
    std::string_view description;
};

std::span<const panel_info> panel_catalog();
const panel_info* find_panel(aspect owner, std::string_view name);

/// Default depth and edge cap of the work/citation-graph panel.
inline constexpr int citation_graph_panel_depth = 2;
inline constexpr int citation_graph_panel_cap = 200;

/// Throws unknown_panel, or precondition_error for a bad language tag/limit.
query_text build_panel_query(const panel_query_spec& spec,
                             const property_registry& registry = {});

query_text build_count_scientific_articles(const property_registry& registry = {});
query_text build_count_citations(const property_registry& registry = {});
query_text build_external_resource_query(std::string_view url_prefix,
                                         const property_registry& registry = {});
query_text build_claims_supported_query(entity_id work, std::string_view language = "en",
                                        const property_registry& registry = {});
query_text build_citation_graph_query(entity_id work, int depth, int node_cap,
                                      std::string_view language = "en",
                                      const property_registry& registry = {});

/// Instance-of classes of one item (drives aspect guessing).
query_text build_instance_of_query(entity_id subject,
                                   const property_registry& registry = {});

/// Items whose `role` property (doi, orcid, twitter, github) equals `value`.
query_text build_external_id_query(std::string_view role, std::string_view value,
                                   const property_registry& registry = {});

/// SPARQL string literal with quotes and escapes.
std::string sparql_string_literal(std::string_view value);

/// Variable names in the top-level SELECT clause, in order.
std::vector<std::string> projection_of(std::string_view query);

} // namespace scholia
