#pragma once

#include <atomic>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "scholia/http.hpp"
#include "scholia/model.hpp"

namespace scholia {

struct entity_api_config {
    std::string api_url = "https://www.wikidata.org/w/api.php";
    /// "{lang}" is replaced by the wiki's language code ("enwiki" -> "en").
    std::string wiki_api_template = "https://{lang}.wikipedia.org/w/api.php";
    std::string user_agent
        = "scholia-cpp/0.1 (https://github.com/scholia-cpp; bibliographic profiles)";
    std::chrono::milliseconds timeout{30000};
    /// wbgetentities accepts at most this many ids per call.
    std::size_t batch_limit = 50;

    /// SCHOLIA_API_URL overrides api_url; unless SCHOLIA_WIKI_API_URL is also
    /// set, encyclopedia extracts are then fetched from the same endpoint.
    static entity_api_config from_env();
};

struct search_hit {
    entity_id id;
    std::string label;
    std::string description;

    bool operator==(const search_hit&) const = default;
};

/// MediaWiki action API client (wbgetentities, wbsearchentities, extracts).
class entity_api_client {
public:
    explicit entity_api_client(entity_api_config config,
                               std::shared_ptr<http::transport> transport
                               = http::make_default_transport());

    std::map<entity_id, std::string> fetch_labels(const std::vector<entity_id>& ids,
                                                  std::string_view language);

    std::vector<search_hit> search_entities(std::string_view term, int limit,
                                            std::string_view language = "en");

    std::optional<std::string> fetch_extract(entity_id id, std::string_view wiki);

    /// Raw wbgetentities "entities" object for the given ids, chunked by
    /// batch_limit and merged. Missing entities carry a "missing" member.
    nlohmann::json fetch_entities(const std::vector<entity_id>& ids,
                                  std::string_view props,
                                  std::string_view language = "en");

    const entity_api_config& config() const noexcept { return config_; }
    std::uint64_t api_calls() const noexcept { return api_calls_; }

private:
    nlohmann::json call(const std::string& url, http::parameter_list params);

    entity_api_config config_;
    std::shared_ptr<http::transport> transport_;
    std::atomic<std::uint64_t> api_calls_{0};
};

} // namespace scholia
