#pragma once

#include <array>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <functional>
#include <list>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <unordered_map>

#include "scholia/http.hpp"
#include "scholia/model.hpp"

namespace scholia {

/// Collapses every run of whitespace to a single space and trims both ends.
std::string normalize_whitespace(std::string_view text);

/// A SPARQL query plus the SHA-256 of its whitespace-normalized form.
class query_text {
public:
    using digest = std::array<std::uint8_t, 32>;

    explicit query_text(std::string text);

    const std::string& text() const noexcept { return text_; }
    const digest& canonical_hash() const noexcept { return hash_; }
    std::string hash_hex() const;

    bool operator==(const query_text& other) const { return text_ == other.text_; }

private:
    std::string text_;
    digest hash_;
};

query_text::digest sha256(std::string_view bytes);
std::string to_hex(const query_text::digest& d);

struct endpoint_config {
    std::string base_url = "https://query.wikidata.org/sparql";
    std::chrono::milliseconds timeout{30000};
    int max_retries = 2;
    std::string user_agent
        = "scholia-cpp/0.1 (https://github.com/scholia-cpp; bibliographic profiles)";
    std::chrono::seconds cache_ttl{300};
    std::size_t cache_capacity = 1024;
    /// First retry delay; doubles on every further attempt.
    std::chrono::milliseconds initial_backoff{250};
    /// Queries at or above this many bytes go out as POST.
    std::size_t get_length_limit = 2000;

    /// Throws precondition_error on timeout <= 0 or negative retries.
    void validate() const;

    /// Defaults overridden by SCHOLIA_ENDPOINT and SCHOLIA_CACHE_TTL.
    static endpoint_config from_env();
};

/// SPARQL 1.1 Query Results JSON -> result_set. Never throws anything but
/// parse_error.
result_set parse_results(std::string_view body);

/// result_set -> SPARQL 1.1 Query Results JSON (compact, deterministic).
std::string serialize_results(const result_set& results);

struct execution {
    result_set results;
    bool from_cache = false;
};

class sparql_client {
public:
    using clock = std::chrono::steady_clock;

    explicit sparql_client(endpoint_config config,
                           std::shared_ptr<http::transport> transport
                           = http::make_default_transport());

    result_set execute(const query_text& query);
    execution execute_traced(const query_text& query);

    const endpoint_config& config() const noexcept { return config_; }

    /// Number of HTTP requests issued, retries included.
    std::uint64_t network_requests() const noexcept { return network_requests_; }

    void set_clock(std::function<clock::time_point()> now) { now_ = std::move(now); }
    void set_sleeper(std::function<void(std::chrono::milliseconds)> sleep) {
        sleep_ = std::move(sleep);
    }
    void clear_cache();

private:
    struct cache_entry {
        std::string key;
        result_set results;
        clock::time_point stored;
    };

    std::optional<result_set> cache_lookup(const std::string& key);
    void cache_store(const std::string& key, const result_set& results);
    result_set fetch(const query_text& query);

    endpoint_config config_;
    std::shared_ptr<http::transport> transport_;
    std::atomic<std::uint64_t> network_requests_{0};
    std::function<clock::time_point()> now_ = [] { return clock::now(); };
    std::function<void(std::chrono::milliseconds)> sleep_;

    std::mutex cache_mutex_;
    std::list<cache_entry> lru_;
    std::unordered_map<std::string, std::list<cache_entry>::iterator> index_;
};

} // namespace scholia
