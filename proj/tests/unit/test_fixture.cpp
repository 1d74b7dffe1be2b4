#include <gtest/gtest.h>

#include <httplib.h>

#include "../harness.hpp"
#include "scholia/query_gen.hpp"

using namespace scholia;
using namespace scholia::fixture;
using scholia::testing::fixture_dir;
using scholia::testing::shared_dataset;

TEST(Dataset, LoadsAndValidates) {
    const auto& d = *shared_dataset();
    EXPECT_GT(d.statements.size(), 100u);
    EXPECT_EQ(d.label(item(8219), "en"), "Uta Frith");
    EXPECT_FALSE(d.label(item(8219), "fr"));
    EXPECT_NO_THROW(d.validate());
    EXPECT_FALSE(d.canned.empty());
    EXPECT_EQ(d.about(item(21143764), property(2860)).size(), 2u);
}

TEST(Dataset, QualifiersAndReferences) {
    const auto& d = *shared_dataset();
    auto st = d.about(item(90001002), property(50));
    ASSERT_EQ(st.size(), 4u);
    bool found = false;
    for (const auto* s : st) {
        if (s->object.entity == item(20980928)) {
            ASSERT_EQ(s->qualifiers.size(), 1u);
            EXPECT_EQ(s->qualifiers[0].second.text, "2");
            found = true;
        }
    }
    EXPECT_TRUE(found);
    auto claim = d.about(item(7669366), property(681));
    ASSERT_EQ(claim.size(), 1u);
    ASSERT_EQ(claim[0]->references.size(), 1u);
    EXPECT_EQ(claim[0]->references[0][0].second.entity, item(22253877));
}

TEST(Dataset, CannedMatchesRegeneration) {
    const auto& d = *shared_dataset();
    auto fresh = generate_canned(d);
    auto round = canned_from_json(canned_to_json(fresh));
    EXPECT_TRUE(diff_canned(round, d.canned).empty());
}

TEST(Dataset, BadTriplesRejected) {
    auto dir = std::filesystem::temp_directory_path() / ("scholia-fx-" + std::to_string(::getpid()));
    std::filesystem::create_directories(dir);
    std::ofstream(dir / "labels.tsv") << "Q1\ten\tOne\t\n";
    std::ofstream(dir / "triples.tsv") << "Q1\tQ2\tQ3\n";
    EXPECT_THROW(dataset::load(dir), parse_error);
    std::ofstream(dir / "triples.tsv") << "Q1\tP31\t{\"time\":\"March 2001\"}\n";
    EXPECT_THROW(dataset::load(dir), parse_error);
    std::ofstream(dir / "triples.tsv") << "Q1\tP31\tQ5\t{not json}\n";
    EXPECT_THROW(dataset::load(dir), parse_error);
    std::filesystem::remove_all(dir);
    EXPECT_THROW(dataset::load(dir), io_error);
}

TEST(Server, AnswersCannedAndRefusesOthers) {
    fixture::server srv(shared_dataset());
    srv.start();
    httplib::Client c("127.0.0.1", srv.port());
    auto q = build_count_citations().text();
    auto ok = c.Get("/sparql?query=" + http::url_encode(q));
    ASSERT_TRUE(ok);
    EXPECT_EQ(ok->status, 200);
    auto rs = parse_results(ok->body);
    EXPECT_EQ(find(rs.rows.at(0), "count")->as_integer(), 31);
    auto posted = c.Post("/sparql", "query=" + http::url_encode("  " + q + "\n"),
                         "application/x-www-form-urlencoded");
    EXPECT_EQ(posted->status, 200);
    auto bad = c.Get("/sparql?query=" + http::url_encode("SELECT ?x WHERE { ?x ?y ?z }"));
    EXPECT_EQ(bad->status, 400);
    EXPECT_NE(bad->body.find("SELECT ?x WHERE { ?x ?y ?z }"), std::string::npos);
    EXPECT_EQ(c.Get("/elsewhere")->status, 404);
    auto reqs = srv.requests();
    ASSERT_GE(reqs.size(), 3u);
    EXPECT_EQ(reqs[0].action, "sparql");
    srv.stop();
}

TEST(Api, WbgetentitiesLimit) {
    std::multimap<std::string, std::string> params = {{"action", "wbgetentities"}};
    std::string ids;
    for (int i = 1; i <= 51; ++i) {
        ids += (i > 1 ? "|Q" : "Q") + std::to_string(i);
    }
    params.emplace("ids", ids);
    auto doc = api_response(*shared_dataset(), params);
    EXPECT_TRUE(doc.contains("error"));
}

TEST(Api, UnknownAction) {
    auto doc = api_response(*shared_dataset(), {{"action", "edit"}});
    EXPECT_TRUE(doc.contains("error"));
}
