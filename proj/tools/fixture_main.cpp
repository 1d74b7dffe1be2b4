#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "scholia/fixture.hpp"
#include "scholia/service.hpp"

#ifndef SCHOLIA_FIXTURE_DIR
#define SCHOLIA_FIXTURE_DIR "tests/fixtures/scholarly"
#endif

using namespace scholia;

namespace {

int generate(const std::filesystem::path& dir, bool check) {
    auto data = fixture::dataset::load(dir);
    auto fresh = fixture::generate_canned(data);
    auto doc = fixture::canned_to_json(fresh);
    if (check) {
        auto expected = fixture::canned_from_json(doc);
        auto diffs = fixture::diff_canned(expected, data.canned);
        for (const auto& d : diffs) {
            std::cerr << d << "\n";
        }
        if (!diffs.empty()) {
            std::cerr << "canned.json is stale; run scholia-fixture generate\n";
            return 1;
        }
        data.validate();
        std::cerr << fresh.size() << " canned queries up to date\n";
        return 0;
    }
    auto target = dir / "canned.json";
    std::ofstream out(target, std::ios::binary);
    if (!out) {
        throw io_error("cannot write " + target.string());
    }
    out << doc.dump(1) << "\n";
    out.close();
    data.canned = fixture::canned_from_json(doc);
    data.validate();
    std::cerr << "wrote " << fresh.size() << " canned queries to " << target.string() << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fixture data for offline tests", "scholia-fixture"};
    app.require_subcommand(1);
    std::string dir = SCHOLIA_FIXTURE_DIR;
    app.add_option("--dir", dir, "Fixture directory");

    auto* gen = app.add_subcommand("generate", "Recompute canned.json from the triples");
    bool check = false;
    gen->add_flag("--check", check, "Fail when canned.json differs instead of writing it");

    auto* serve = app.add_subcommand("serve", "Serve the fixture over HTTP");
    std::string bind = "127.0.0.1:8200";
    serve->add_option("--bind", bind);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*gen) {
            return generate(dir, check);
        }
        auto [host, port] = parse_bind(bind);
        auto data = std::make_shared<fixture::dataset>(fixture::dataset::load(dir));
        fixture::server srv(data);
        srv.start(host, port);
        std::cerr << "sparql: " << srv.sparql_url() << "\napi:    " << srv.api_url() << std::endl;
        srv.wait();
    } catch (const error& e) {
        std::cerr << "scholia-fixture: " << e.kind() << ": " << e.what() << "\n";
        return 2;
    }
    return 0;
}
