#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include <json.hpp>

#include "scholia/model.hpp"

namespace scholia::fixture {

/// Object of a fixture statement, qualifier or reference snak.
struct value {
    enum class type { entity, string, monolingual, time, quantity, url };

    type kind = type::string;
    std::optional<entity_id> entity;
    /// string / monolingual text / "YYYY-MM-DD" / decimal amount / URL.
    std::string text;
    std::string lang;

    static value of_entity(entity_id id) { return {type::entity, id, id.str(), {}}; }
    static value of_string(std::string s) { return {type::string, {}, std::move(s), {}}; }

    bool is_entity() const noexcept { return kind == type::entity; }

    /// The term a WDQS-style store exposes for the value.
    rdf_term to_term() const;
    /// MediaWiki snak "datavalue" object.
    nlohmann::json to_datavalue() const;

    bool operator==(const value&) const = default;
};

using snak = std::pair<entity_id, value>;

struct statement {
    entity_id subject;
    entity_id property;
    value object;
    std::vector<snak> qualifiers;
    std::vector<std::vector<snak>> references;
    std::size_t line = 0;
};

struct label_entry {
    std::string label;
    std::string description;
};

struct sitelink {
    std::string site;
    std::string title;
    std::string extract;
};

struct canned_query {
    std::string hash;       // hex SHA-256 of `normalized`
    std::string normalized; // whitespace-normalized query text
    result_set results;
};

/// The fixture files in one directory:
///   triples.tsv    subject, property, object, qualifiers-json, references-json
///   labels.tsv     id, lang, label, description
///   sitelinks.tsv  id, site, title, extract
///   designated.tsv queries to precompute (see the directory README)
///   canned.json    precomputed answers
class dataset {
public:
    dataset() = default;

    /// Throws parse_error/io_error. canned.json is optional.
    static dataset load(const std::filesystem::path& dir);

    std::vector<statement> statements;
    std::map<std::pair<entity_id, std::string>, label_entry> labels;
    std::map<entity_id, std::vector<sitelink>> sitelinks;
    std::vector<std::vector<std::string>> designated;
    std::map<std::string, canned_query> canned; // by hash

    /// Every id that appears as a subject or carries a label.
    std::vector<entity_id> items() const;

    std::vector<const statement*> about(entity_id subject) const;
    std::vector<const statement*> about(entity_id subject, entity_id property) const;
    std::vector<const statement*> with_property(entity_id property) const;

    std::optional<std::string> label(entity_id id, std::string_view lang) const;

    /// Throws precondition_error when an id referenced by canned results is
    /// unknown or the desk-scale limits are exceeded.
    void validate() const;

    void rebuild_index();

private:
    std::multimap<entity_id, std::size_t> by_subject_;
};

/// Runs every designated query through the brute-force interpreter.
std::vector<canned_query> generate_canned(const dataset& data);

nlohmann::json canned_to_json(const std::vector<canned_query>& canned);
std::map<std::string, canned_query> canned_from_json(const nlohmann::json& doc);

/// Differences between two canned sets, one line each; empty when equal.
std::vector<std::string> diff_canned(const std::map<std::string, canned_query>& expected,
                                     const std::map<std::string, canned_query>& actual);

struct recorded_request {
    std::string method;
    std::string path;
    std::string action; // MediaWiki action or "sparql"
    std::string detail; // normalized query or the action's main parameter
};

/// In-process HTTP server answering /sparql from canned answers and
/// /w/api.php from labels, claims and sitelinks.
class server {
public:
    explicit server(std::shared_ptr<const dataset> data);
    ~server();

    server(const server&) = delete;
    server& operator=(const server&) = delete;

    /// Port 0 picks a free port. Throws bind_error.
    void start(const std::string& host = "127.0.0.1", int port = 0);
    void stop();

    int port() const noexcept { return port_; }
    std::string base_url() const;
    std::string sparql_url() const { return base_url() + "/sparql"; }
    std::string api_url() const { return base_url() + "/w/api.php"; }

    std::vector<recorded_request> requests() const;
    void clear_requests();

    /// Blocks until stop() (used by the command-line tool).
    void wait();

private:
    struct impl;
    std::unique_ptr<impl> impl_;
    std::string host_;
    int port_ = 0;
};

/// Answers for the MediaWiki actions, exposed for unit tests.
nlohmann::json api_response(const dataset& data,
                            const std::multimap<std::string, std::string>& params);

} // namespace scholia::fixture
