#include <gtest/gtest.h>

#include <random>

#include "scholia/model.hpp"

using namespace scholia;

TEST(EntityId, ParsesItemsAndProperties) {
    auto q = entity_id::parse("Q8219");
    EXPECT_TRUE(q.is_item());
    EXPECT_EQ(q.number(), 8219u);
    EXPECT_EQ(q.str(), "Q8219");
    EXPECT_EQ(q.iri(), "http://www.wikidata.org/entity/Q8219");
    auto p = entity_id::parse("P2860");
    EXPECT_TRUE(p.is_property());
    EXPECT_EQ(p, property(2860));
}

TEST(EntityId, RejectsMalformed) {
    for (const char* bad : {"", "Q", "Q0", "Q012", "q5", "Q5 ", " Q5", "L5", "Q-1", "Q5x",
                            "QQ5", "Q99999999999999999999999"}) {
        EXPECT_THROW(entity_id::parse(bad), malformed_id) << bad;
        EXPECT_FALSE(entity_id::try_parse(bad)) << bad;
    }
}

TEST(EntityId, MalformedIdCarriesKind) {
    try {
        entity_id::parse("X1");
        FAIL();
    } catch (const error& e) {
        EXPECT_EQ(e.kind(), "MalformedId");
    }
}

TEST(EntityId, FromIri) {
    EXPECT_EQ(entity_id::from_iri("http://www.wikidata.org/entity/Q42"), item(42));
    EXPECT_EQ(entity_id::from_iri("Q42"), item(42));
    EXPECT_FALSE(entity_id::from_iri("http://example.org/Q42"));
    EXPECT_FALSE(entity_id::from_iri("http://www.wikidata.org/entity/statement/Q1-abc"));
}

TEST(EntityId, OrdersByKindThenNumber) {
    EXPECT_LT(item(2), item(10));
    EXPECT_NE(item(5), property(5));
}

TEST(EntityId, RoundTripRandom) {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 2000; ++i) {
        auto n = rng() % 1000000000000ull + 1;
        auto id = (i % 2) ? item(n) : property(n);
        EXPECT_EQ(entity_id::parse(id.str()), id);
        EXPECT_EQ(entity_id::from_iri(id.iri()), id);
    }
}

TEST(Registry, DefaultsAndOverride) {
    property_registry r;
    EXPECT_EQ(r.at("author"), property(50));
    EXPECT_EQ(r.wdt("cites"), "wdt:P2860");
    EXPECT_EQ(r.p("author"), "p:P50");
    EXPECT_EQ(r.pq("series-ordinal"), "pq:P1545");
    r.set("author", property(9999));
    EXPECT_EQ(r.ps("author"), "ps:P9999");
    EXPECT_THROW(r.at("no-such-role"), precondition_error);
    EXPECT_THROW(r.set("author", item(5)), precondition_error);
    for (auto role : property_registry::roles()) {
        EXPECT_NO_THROW(property_registry{}.at(role)) << role;
    }
}

TEST(Aspect, SegmentsRoundTrip) {
    for (auto a : all_aspects()) {
        EXPECT_EQ(aspect_from_segment(to_segment(a)), a);
    }
    EXPECT_EQ(all_aspects().size(), 8u);
    EXPECT_FALSE(aspect_from_segment("authors"));
    EXPECT_FALSE(aspect_from_segment(""));
}

TEST(WorkRecord, Validate) {
    work_record r{.work = item(1)};
    r.authors = {{item(2), 1}, {std::string("X"), 2}};
    EXPECT_NO_THROW(validate(r));
    r.authors.push_back({item(3), 2});
    EXPECT_THROW(validate(r), precondition_error);
    r.authors.pop_back();
    r.pages = 0;
    EXPECT_THROW(validate(r), precondition_error);
}

TEST(WorkRecord, AuthorCountPrefersDeclared) {
    work_record r{.work = item(1)};
    r.authors = {{item(2), 1}};
    EXPECT_EQ(r.author_count(), 1);
    r.declared_author_count = 4;
    EXPECT_EQ(r.author_count(), 4);
}

TEST(YearOf, Forms) {
    EXPECT_EQ(year_of("2009-06-29T00:00:00Z"), 2009);
    EXPECT_EQ(year_of("+2009-06-29T00:00:00Z"), 2009);
    EXPECT_EQ(year_of("-0300-01-01T00:00:00Z"), -300);
    EXPECT_EQ(year_of("1970"), 1970);
    EXPECT_FALSE(year_of("June 2009"));
    EXPECT_FALSE(year_of(""));
}

TEST(RdfTerm, Conversions) {
    auto iri = rdf_term::make_iri("http://www.wikidata.org/entity/Q5");
    EXPECT_EQ(iri.as_entity(), item(5));
    auto n = rdf_term::make_literal("42", std::string(xsd_integer));
    EXPECT_EQ(n.as_integer(), 42);
    EXPECT_EQ(n.as_number(), 42.0);
    EXPECT_EQ(rdf_term::make_literal("7").as_integer(), 7);
    EXPECT_FALSE(rdf_term::make_literal("seven").as_integer());
    EXPECT_DOUBLE_EQ(*rdf_term::make_literal("2.5", std::string(xsd_decimal)).as_number(), 2.5);
    EXPECT_FALSE(rdf_term::make_literal("Q5").as_entity());
}

TEST(ResultRow, Find) {
    result_row row{{"a", rdf_term::make_literal("x")}};
    ASSERT_NE(find(row, "a"), nullptr);
    EXPECT_EQ(find(row, "b"), nullptr);
}
