#include <gtest/gtest.h>

#include <set>

#include "../support/sparql_grammar.hpp"
#include "scholia/query_gen.hpp"

using namespace scholia;
using scholia::testing::check_sparql;

namespace {

std::vector<std::string> as_strings(const std::vector<std::string_view>& v) {
    return {v.begin(), v.end()};
}

} // namespace

TEST(Catalog, WellFormed) {
    std::set<aspect> seen;
    std::set<std::pair<aspect, std::string_view>> names;
    for (const auto& p : panel_catalog()) {
        EXPECT_TRUE(p.tier == 1 || p.tier == 2) << p.name;
        EXPECT_FALSE(p.columns.empty()) << p.name;
        EXPECT_FALSE(p.description.empty()) << p.name;
        EXPECT_TRUE(names.insert({p.owner, p.name}).second) << "duplicate " << p.name;
        if (p.tier == 1) {
            seen.insert(p.owner);
        }
    }
    EXPECT_GE(seen.size(), 5u);
}

TEST(Catalog, KnownPanels) {
    ASSERT_NE(find_panel(aspect::author, "works-per-year-by-role"), nullptr);
    EXPECT_EQ(find_panel(aspect::author, "works-per-year-by-role")->kind, panel_kind::year_role_bars);
    EXPECT_EQ(find_panel(aspect::publisher, "works-vs-citations-scatter")->kind, panel_kind::scatter);
    EXPECT_EQ(find_panel(aspect::work, "citation-graph")->kind, panel_kind::graph);
    EXPECT_EQ(find_panel(aspect::work, "claims-supported")->tier, 1);
    EXPECT_EQ(find_panel(aspect::author, "no-such"), nullptr);
}

TEST(PanelQuery, EveryPanelParsesAndProjectsItsColumns) {
    for (const auto& p : panel_catalog()) {
        panel_query_spec spec{p.owner, std::string(p.name), item(8219)};
        auto q = build_panel_query(spec);
        auto report = check_sparql(q.text());
        EXPECT_TRUE(report.ok) << to_segment(p.owner) << "/" << p.name << ": " << report.message
                               << "\n" << q.text();
        EXPECT_EQ(projection_of(q.text()), as_strings(p.columns)) << p.name;
        EXPECT_NE(q.text().find("wd:Q8219"), std::string::npos) << p.name;
    }
}

TEST(PanelQuery, Deterministic) {
    panel_query_spec spec{aspect::organization, "page-production-raw", item(1269766)};
    EXPECT_EQ(build_panel_query(spec).text(), build_panel_query(spec).text());
}

TEST(PanelQuery, LanguageAndLimit) {
    panel_query_spec spec{aspect::author, "works-raw", item(8219), "da", 25};
    auto text = build_panel_query(spec).text();
    EXPECT_NE(text.find("\"da\""), std::string::npos);
    spec.language = "en\" } ; DROP";
    EXPECT_THROW(build_panel_query(spec), precondition_error);
    spec.language = "en";
    spec.limit = 0;
    EXPECT_THROW(build_panel_query(spec), precondition_error);
}

TEST(PanelQuery, UnknownPanel) {
    panel_query_spec spec{aspect::venue, "nope", item(1)};
    try {
        build_panel_query(spec);
        FAIL();
    } catch (const error& e) {
        EXPECT_EQ(e.kind(), "UnknownPanel");
    }
}

TEST(PanelQuery, RegistryOverrideChangesProperties) {
    property_registry r;
    r.set("author", property(123456));
    panel_query_spec spec{aspect::author, "works-raw", item(8219)};
    auto text = build_panel_query(spec, r).text();
    EXPECT_NE(text.find("P123456"), std::string::npos);
    EXPECT_EQ(text.find("P50 "), std::string::npos);
}

TEST(Builders, CountsMatchPublishedText) {
    EXPECT_EQ(normalize_whitespace(build_count_scientific_articles().text()),
              "select (count(?work) as ?count) where { ?work wdt:P31 wd:Q13442814 . }");
    EXPECT_EQ(normalize_whitespace(build_count_citations().text()),
              "select (count(?citedwork) as ?count) where { ?work wdt:P2860 ?citedwork . }");
}

TEST(Builders, AllParse) {
    for (const auto& q : {build_count_scientific_articles(), build_count_citations(),
                          build_external_resource_query("https://openfmri.org/dataset/"),
                          build_claims_supported_query(item(22253877)),
                          build_citation_graph_query(item(21143764), 1, 10),
                          build_citation_graph_query(item(21143764), 3, 1000),
                          build_instance_of_query(item(5)),
                          build_external_id_query("doi", "10.1371/JOURNAL.PONE.0006022"),
                          build_external_id_query("twitter", "utafrith")}) {
        auto r = check_sparql(q.text());
        EXPECT_TRUE(r.ok) << r.message << "\n" << q.text();
    }
}

TEST(Builders, CitationGraphBounds) {
    EXPECT_THROW(build_citation_graph_query(item(1), 0, 10), precondition_error);
    EXPECT_THROW(build_citation_graph_query(item(1), 4, 10), precondition_error);
    EXPECT_THROW(build_citation_graph_query(item(1), 2, 0), precondition_error);
    EXPECT_NE(build_citation_graph_query(item(1), 2, 77).text().find("LIMIT 77"), std::string::npos);
}

TEST(Builders, ExternalIdEscapes) {
    auto text = build_external_id_query("github", "a\"b\\c").text();
    EXPECT_NE(text.find(R"("a\"b\\c")"), std::string::npos);
    EXPECT_TRUE(check_sparql(text).ok);
    EXPECT_THROW(build_external_id_query("myspace", "x"), precondition_error);
}

TEST(Builders, StringLiteral) {
    EXPECT_EQ(sparql_string_literal("plain"), "\"plain\"");
    EXPECT_EQ(sparql_string_literal("a\nb"), "\"a\\nb\"");
    EXPECT_EQ(sparql_string_literal("q\"\\"), "\"q\\\"\\\\\"");
}

TEST(Builders, ProjectionOf) {
    EXPECT_EQ(projection_of("SELECT DISTINCT ?a ?b (COUNT(?c) AS ?n) WHERE {}"),
              (std::vector<std::string>{"a", "b", "n"}));
    EXPECT_EQ(projection_of("select (count(?work) as ?count) where { }"),
              (std::vector<std::string>{"count"}));
}
