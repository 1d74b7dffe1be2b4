#include <gtest/gtest.h>

#include <httplib.h>

#include <filesystem>
#include <fstream>

#include "../harness.hpp"
#include "../support/json_schema.hpp"
#include "scholia/service.hpp"

using namespace scholia;
using nlohmann::json;
using scholia::testing::fixture_stack;
using scholia::testing::validate_schema;

namespace {

struct service_stack {
    fixture_stack fx;
    std::unique_ptr<service> svc;
    std::unique_ptr<httplib::Client> http;

    explicit service_stack(service_config c = {}) {
        c.host = "127.0.0.1";
        c.port = 0;
        svc = std::make_unique<service>(c, fx.clients);
        svc->start();
        http = std::make_unique<httplib::Client>("127.0.0.1", svc->port());
        http->set_follow_location(false);
    }

    httplib::Result get(const std::string& path) { return http->Get(path); }
};

service_stack& stack() {
    static service_stack s;
    return s;
}

json body(const httplib::Result& r) { return json::parse(r->body); }

} // namespace

TEST(Config, ParseBind) {
    EXPECT_EQ(parse_bind("0.0.0.0:8100"), (std::pair<std::string, int>{"0.0.0.0", 8100}));
    EXPECT_EQ(parse_bind("localhost:0"), (std::pair<std::string, int>{"localhost", 0}));
    for (const char* bad : {"", "8100", "host:", ":80", "h:70000", "h:-1", "h:x"}) {
        EXPECT_THROW(parse_bind(bad), precondition_error) << bad;
    }
}

TEST(Config, NormalizePrefix) {
    EXPECT_EQ(normalize_prefix(""), "");
    EXPECT_EQ(normalize_prefix("/"), "");
    EXPECT_EQ(normalize_prefix("scholia/"), "/scholia");
    EXPECT_EQ(normalize_prefix("/a/b"), "/a/b");
    EXPECT_THROW(normalize_prefix("/a b"), precondition_error);
    EXPECT_EQ(normalize_prefix("/a//b/"), "/a/b");
}

TEST(Service, Health) {
    auto r = stack().get("/healthz");
    ASSERT_TRUE(r);
    EXPECT_EQ(r->status, 200);
    EXPECT_EQ(body(r)["status"], "ok");
}

TEST(Service, PanelCatalog) {
    auto r = stack().get("/api/panels");
    ASSERT_TRUE(r);
    ASSERT_EQ(r->status, 200);
    auto doc = body(r);
    EXPECT_EQ(doc["aspects"].size(), 8u);
    EXPECT_EQ(doc["panels"].size(), panel_catalog().size());
    for (const auto& p : doc["panels"]) {
        EXPECT_TRUE(p.contains("result_schema")) << p["name"];
    }
}

TEST(Service, PanelResponsesMatchTheirSchemas) {
    auto catalog = body(stack().get("/api/panels"));
    std::map<std::string, json> schemas;
    for (const auto& p : catalog["panels"]) {
        schemas[p["aspect"].get<std::string>() + "/" + p["name"].get<std::string>()] = p["result_schema"];
    }
    for (const auto& path : {"author/works-raw/Q20980928", "author/works-per-year-by-role/Q20980928",
                              "organization/associated-authors/Q24283660",
                              "organization/page-production-raw/Q1269766",
                              "organization/conorm-citations-raw/Q24283660",
                              "publisher/works-vs-citations-scatter/Q463494",
                              "topic/recent-works/Q90000401", "work/claims-supported/Q22253877",
                              "work/citation-graph/Q21143764"}) {
        auto r = stack().get(std::string("/api/panel/") + path);
        ASSERT_TRUE(r);
        ASSERT_EQ(r->status, 200) << path << " " << r->body;
        auto doc = body(r);
        std::string key(path);
        key = key.substr(0, key.rfind('/'));
        auto errors = validate_schema(schemas.at(key), doc);
        EXPECT_TRUE(errors.empty()) << path << ": " << (errors.empty() ? "" : errors[0]);
    }
}

TEST(Service, ScatterPoints) {
    auto doc = body(stack().get("/api/panel/publisher/works-vs-citations-scatter/Q463494"));
    ASSERT_EQ(doc["points"].size(), 3u);
    EXPECT_EQ(doc["points"][0]["label"], "Genome Biology");
    EXPECT_EQ(doc["points"][0]["x"], 3);
    EXPECT_EQ(doc["points"][0]["y"], 13);
    EXPECT_NE(doc["editor_url"].get<std::string>().find("#"), std::string::npos);
}

TEST(Service, SecondCallIsCached) {
    auto& s = stack();
    s.get("/api/panel/topic/recent-works/Q6365492");
    auto doc = body(s.get("/api/panel/topic/recent-works/Q6365492"));
    EXPECT_EQ(doc["cache"], "hit");
}

TEST(Service, Search) {
    auto r = stack().get("/api/search?q=Uta&limit=3");
    ASSERT_EQ(r->status, 200);
    auto doc = body(r);
    ASSERT_FALSE(doc["results"].empty());
    EXPECT_EQ(doc["results"][0]["id"], "Q8219");
    EXPECT_EQ(stack().get("/api/search?q=%20")->status, 400);
    EXPECT_EQ(stack().get("/api/search?q=x&limit=abc")->status, 400);
}

TEST(Service, ProblemDetails) {
    auto& s = stack();
    auto r = s.get("/api/panel/author/works-raw/Q0");
    EXPECT_EQ(r->status, 400);
    EXPECT_EQ(r->get_header_value("Content-Type"), "application/problem+json");
    EXPECT_EQ(body(r)["kind"], "MalformedId");
    EXPECT_EQ(s.get("/api/panel/author/nope/Q1")->status, 404);
    EXPECT_EQ(s.get("/api/panel/nowhere/works-raw/Q1")->status, 404);
    EXPECT_EQ(s.get("/api/nothing")->status, 404);
    auto amb = s.get("/orcid/0000-0002-0000-0009");
    EXPECT_EQ(amb->status, 409);
    EXPECT_EQ(body(amb)["candidates"].size(), 2u);
    EXPECT_EQ(s.get("/doi/10.NOPE")->status, 404);
}

TEST(Service, UnknownQueryIsBadGateway) {
    // not designated, so the fixture endpoint refuses it
    auto r = stack().get("/api/panel/venue/prolific-authors/Q564954");
    EXPECT_EQ(r->status, 502);
    EXPECT_EQ(body(r)["kind"], "EndpointError");
}

TEST(Service, RedirectChain) {
    auto& s = stack();
    auto r1 = s.get("/twitter/utafrith");
    ASSERT_EQ(r1->status, 302);
    EXPECT_EQ(r1->get_header_value("Location"), "/Q8219");
    auto r2 = s.get("/Q8219");
    ASSERT_EQ(r2->status, 302);
    EXPECT_EQ(r2->get_header_value("Location"), "/author/Q8219");
    auto r3 = s.get("/author/Q8219");
    ASSERT_EQ(r3->status, 200);
    EXPECT_NE(r3->body.find("<h1>Uta Frith</h1>"), std::string::npos);
    EXPECT_NE(r3->body.find("developmental psychologist"), std::string::npos);
    EXPECT_NE(r3->body.find("data-src=\"/api/panel/author/works-raw/Q8219\""), std::string::npos);
}

TEST(Service, RootAndUiPlaceholder) {
    auto& s = stack();
    auto root = s.get("/");
    EXPECT_EQ(root->status, 302);
    EXPECT_EQ(root->get_header_value("Location"), "/ui/");
    auto ui = s.get("/ui/");
    EXPECT_EQ(ui->status, 200);
    EXPECT_NE(ui->body.find("has not been built"), std::string::npos);
    EXPECT_EQ(s.get("/nowhere/Q5")->status, 404);
    EXPECT_EQ(s.get("/author/P50")->status, 400);
    EXPECT_EQ(s.get("/banana")->status, 400);
}

TEST(Service, PrefixAndUiDir) {
    auto dir = std::filesystem::temp_directory_path() / ("scholia-ui-" + std::to_string(::getpid()));
    std::filesystem::create_directories(dir);
    std::ofstream(dir / "index.html") << "<html>built ui</html>";
    service_config c;
    c.prefix = "/scholia";
    c.ui_dir = dir;
    service_stack s(c);
    EXPECT_EQ(s.get("/scholia/healthz")->status, 200);
    EXPECT_EQ(s.get("/scholia/ui/index.html")->body, "<html>built ui</html>");
    auto r = s.get("/scholia/twitter/utafrith");
    EXPECT_EQ(r->get_header_value("Location"), "/scholia/Q8219");
    EXPECT_EQ(s.get("/scholia/Q8219")->get_header_value("Location"), "/scholia/author/Q8219");
    EXPECT_EQ(s.get("/healthz")->status, 404);
    std::filesystem::remove_all(dir);
}

TEST(Service, BindConflict) {
    service_config c;
    c.host = "127.0.0.1";
    c.port = stack().svc->port();
    service other(c, stack().fx.clients);
    EXPECT_THROW(other.start(), bind_error);
}
