#include "scholia/sparql_client.hpp"

#include <openssl/evp.h>

#include <cctype>
#include <cstdlib>
#include <set>
#include <thread>

#include <json.hpp>

namespace scholia {

using nlohmann::json;

std::string normalize_whitespace(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    bool pending_space = false;
    for (char c : text) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) {
            out.push_back(' ');
            pending_space = false;
        }
        out.push_back(c);
    }
    return out;
}

query_text::digest sha256(std::string_view bytes) {
    query_text::digest out{};
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), out.data(), &len, EVP_sha256(),
                   nullptr)
            != 1
        || len != out.size()) {
        throw std::runtime_error("SHA-256 digest failed");
    }
    return out;
}

std::string to_hex(const query_text::digest& d) {
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    out.reserve(d.size() * 2);
    for (auto b : d) {
        out.push_back(hex[b >> 4]);
        out.push_back(hex[b & 0xF]);
    }
    return out;
}

query_text::query_text(std::string text)
    : text_(std::move(text)), hash_(sha256(normalize_whitespace(text_))) {}

std::string query_text::hash_hex() const { return to_hex(hash_); }

// -- config -----------------------------------------------------------------

void endpoint_config::validate() const {
    if (timeout.count() <= 0) {
        throw precondition_error("endpoint timeout must be positive");
    }
    if (max_retries < 0) {
        throw precondition_error("max_retries must be >= 0");
    }
    if (cache_ttl.count() < 0) {
        throw precondition_error("cache_ttl must be >= 0");
    }
    http::split_url(base_url);
}

endpoint_config endpoint_config::from_env() {
    endpoint_config config;
    if (const char* url = std::getenv("SCHOLIA_ENDPOINT"); url && *url) {
        config.base_url = url;
    }
    if (const char* ttl = std::getenv("SCHOLIA_CACHE_TTL"); ttl && *ttl) {
        char* end = nullptr;
        long seconds = std::strtol(ttl, &end, 10);
        if (*end != '\0' || seconds < 0) {
            throw precondition_error("SCHOLIA_CACHE_TTL must be a non-negative "
                                     "integer, got '" + std::string(ttl) + "'");
        }
        config.cache_ttl = std::chrono::seconds(seconds);
    }
    return config;
}

// -- results JSON -----------------------------------------------------------

namespace {

[[noreturn]] void fail(const std::string& message, const std::string& path) {
    throw parse_error(message, 0, path);
}

const json& member(const json& object, const char* key, const std::string& path) {
    auto it = object.find(key);
    if (it == object.end()) {
        fail(std::string("missing member '") + key + "'", path);
    }
    return *it;
}

rdf_term parse_term(const json& node, const std::string& path) {
    if (!node.is_object()) {
        fail("binding value must be an object", path);
    }
    const auto& type = member(node, "type", path);
    const auto& value = member(node, "value", path);
    if (!type.is_string() || !value.is_string()) {
        fail("'type' and 'value' must be strings", path);
    }
    rdf_term term;
    term.value = value.get<std::string>();
    const auto& t = type.get_ref<const std::string&>();
    if (t == "uri") {
        term.kind = rdf_term::type::iri;
    } else if (t == "literal" || t == "typed-literal") {
        term.kind = rdf_term::type::literal;
        if (auto dt = node.find("datatype"); dt != node.end()) {
            if (!dt->is_string()) {
                fail("'datatype' must be a string", path);
            }
            term.datatype = dt->get<std::string>();
        }
        if (auto lang = node.find("xml:lang"); lang != node.end()) {
            if (!lang->is_string()) {
                fail("'xml:lang' must be a string", path);
            }
            term.lang = lang->get<std::string>();
        }
    } else if (t == "bnode") {
        term.kind = rdf_term::type::bnode;
    } else {
        fail("unknown term type '" + t + "'", path);
    }
    return term;
}

} // namespace

namespace {

result_set parse_results_impl(std::string_view body) {
    json doc;
    try {
        doc = json::parse(body);
    } catch (const json::parse_error& e) {
        throw parse_error("malformed JSON: " + std::string(e.what()), e.byte, "");
    }
    if (!doc.is_object()) {
        fail("results document must be an object", "$");
    }
    const auto& head = member(doc, "head", "$");
    if (!head.is_object()) {
        fail("'head' must be an object", "$.head");
    }
    const auto& vars = member(head, "vars", "$.head");
    if (!vars.is_array()) {
        fail("'vars' must be an array", "$.head.vars");
    }
    result_set out;
    std::set<std::string, std::less<>> known;
    for (std::size_t i = 0; i < vars.size(); ++i) {
        if (!vars[i].is_string()) {
            fail("variable name must be a string",
                 "$.head.vars[" + std::to_string(i) + "]");
        }
        auto name = vars[i].get<std::string>();
        if (!known.insert(name).second) {
            fail("duplicate variable '" + name + "'", "$.head.vars");
        }
        out.variables.push_back(std::move(name));
    }
    const auto& results = member(doc, "results", "$");
    if (!results.is_object()) {
        fail("'results' must be an object", "$.results");
    }
    const auto& bindings = member(results, "bindings", "$.results");
    if (!bindings.is_array()) {
        fail("'bindings' must be an array", "$.results.bindings");
    }
    out.rows.reserve(bindings.size());
    for (std::size_t i = 0; i < bindings.size(); ++i) {
        auto row_path = "$.results.bindings[" + std::to_string(i) + "]";
        const auto& binding = bindings[i];
        if (!binding.is_object()) {
            fail("binding must be an object", row_path);
        }
        result_row row;
        for (const auto& [name, node] : binding.items()) {
            auto path = row_path + "." + name;
            if (!known.contains(name)) {
                fail("variable '" + name + "' not declared in head.vars", path);
            }
            row.emplace(name, parse_term(node, path));
        }
        out.rows.push_back(std::move(row));
    }
    return out;
}

} // namespace

result_set parse_results(std::string_view body) {
    try {
        return parse_results_impl(body);
    } catch (const parse_error&) {
        throw;
    } catch (const std::exception& e) {
        throw parse_error(e.what(), 0, "");
    }
}

std::string serialize_results(const result_set& results) {
    json doc;
    doc["head"]["vars"] = results.variables;
    auto bindings = json::array();
    for (const auto& row : results.rows) {
        auto binding = json::object();
        for (const auto& [name, term] : row) {
            json node;
            switch (term.kind) {
            case rdf_term::type::iri: node["type"] = "uri"; break;
            case rdf_term::type::literal: node["type"] = "literal"; break;
            case rdf_term::type::bnode: node["type"] = "bnode"; break;
            }
            node["value"] = term.value;
            if (!term.datatype.empty()) {
                node["datatype"] = term.datatype;
            }
            if (!term.lang.empty()) {
                node["xml:lang"] = term.lang;
            }
            binding[name] = std::move(node);
        }
        bindings.push_back(std::move(binding));
    }
    doc["results"]["bindings"] = std::move(bindings);
    return doc.dump();
}

// -- client -----------------------------------------------------------------

sparql_client::sparql_client(endpoint_config config,
                             std::shared_ptr<http::transport> transport)
    : config_(std::move(config)), transport_(std::move(transport)) {
    config_.validate();
    sleep_ = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
}

void sparql_client::clear_cache() {
    std::lock_guard lock(cache_mutex_);
    lru_.clear();
    index_.clear();
}

std::optional<result_set> sparql_client::cache_lookup(const std::string& key) {
    if (config_.cache_ttl.count() == 0 || config_.cache_capacity == 0) {
        return std::nullopt;
    }
    std::lock_guard lock(cache_mutex_);
    auto it = index_.find(key);
    if (it == index_.end()) {
        return std::nullopt;
    }
    if (now_() - it->second->stored >= config_.cache_ttl) {
        lru_.erase(it->second);
        index_.erase(it);
        return std::nullopt;
    }
    lru_.splice(lru_.begin(), lru_, it->second);
    return it->second->results;
}

void sparql_client::cache_store(const std::string& key, const result_set& results) {
    if (config_.cache_ttl.count() == 0 || config_.cache_capacity == 0) {
        return;
    }
    std::lock_guard lock(cache_mutex_);
    if (auto it = index_.find(key); it != index_.end()) {
        lru_.erase(it->second);
        index_.erase(it);
    }
    lru_.push_front({key, results, now_()});
    index_[key] = lru_.begin();
    while (lru_.size() > config_.cache_capacity) {
        index_.erase(lru_.back().key);
        lru_.pop_back();
    }
}

result_set sparql_client::execute(const query_text& query) {
    return execute_traced(query).results;
}

execution sparql_client::execute_traced(const query_text& query) {
    if (normalize_whitespace(query.text()).empty()) {
        throw precondition_error("empty SPARQL query");
    }
    auto key = query.hash_hex();
    if (auto cached = cache_lookup(key)) {
        return {std::move(*cached), true};
    }
    auto results = fetch(query);
    cache_store(key, results);
    return {std::move(results), false};
}

result_set sparql_client::fetch(const query_text& query) {
    http::request req;
    req.url = config_.base_url;
    req.timeout = config_.timeout;
    req.headers = {
        {"Accept", "application/sparql-results+json"},
        {"User-Agent", config_.user_agent},
    };
    req.verb = query.text().size() < config_.get_length_limit
                 ? http::request::method::get
                 : http::request::method::post_form;
    req.params = {{"query", query.text()}};

    auto delay = config_.initial_backoff;
    for (int attempt = 0;; ++attempt) {
        bool last = attempt >= config_.max_retries;
        ++network_requests_;
        try {
            auto resp = transport_->send(req);
            if (resp.status >= 200 && resp.status < 300) {
                return parse_results(resp.body);
            }
            bool retryable = resp.status == 429 || resp.status >= 500;
            if (!retryable || last) {
                throw endpoint_error(resp.status, std::move(resp.body));
            }
        } catch (const transport_error&) {
            if (last) {
                throw;
            }
        }
        sleep_(delay);
        delay *= 2;
    }
}

} // namespace scholia
