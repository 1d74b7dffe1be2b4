#include "scholia/entity_api.hpp"

#include <algorithm>
#include <cstdlib>

namespace scholia {

using nlohmann::json;

entity_api_config entity_api_config::from_env() {
    entity_api_config config;
    if (const char* url = std::getenv("SCHOLIA_API_URL"); url && *url) {
        config.api_url = url;
        config.wiki_api_template = url;
    }
    if (const char* url = std::getenv("SCHOLIA_WIKI_API_URL"); url && *url) {
        config.wiki_api_template = url;
    }
    return config;
}

entity_api_client::entity_api_client(entity_api_config config,
                                     std::shared_ptr<http::transport> transport)
    : config_(std::move(config)), transport_(std::move(transport)) {
    http::split_url(config_.api_url);
    if (config_.batch_limit == 0) {
        throw precondition_error("batch_limit must be positive");
    }
}

json entity_api_client::call(const std::string& url, http::parameter_list params) {
    params.emplace_back("format", "json");
    http::request req;
    req.url = url;
    req.params = std::move(params);
    req.timeout = config_.timeout;
    req.headers = {{"User-Agent", config_.user_agent},
                   {"Accept", "application/json"}};
    ++api_calls_;
    auto resp = transport_->send(req);
    if (resp.status < 200 || resp.status >= 300) {
        throw api_error("http-" + std::to_string(resp.status), resp.body);
    }
    json doc;
    try {
        doc = json::parse(resp.body);
    } catch (const json::exception& e) {
        throw api_error("badjson", e.what());
    }
    if (!doc.is_object()) {
        throw api_error("badjson", "response is not a JSON object");
    }
    if (auto err = doc.find("error"); err != doc.end()) {
        throw api_error(err->value("code", "unknown"), err->value("info", ""));
    }
    return doc;
}

json entity_api_client::fetch_entities(const std::vector<entity_id>& ids,
                                       std::string_view props,
                                       std::string_view language) {
    if (ids.empty()) {
        throw precondition_error("fetch_entities needs at least one id");
    }
    std::vector<std::string> unique;
    for (const auto& id : ids) {
        auto text = id.str();
        if (std::find(unique.begin(), unique.end(), text) == unique.end()) {
            unique.push_back(std::move(text));
        }
    }
    json merged = json::object();
    for (std::size_t begin = 0; begin < unique.size(); begin += config_.batch_limit) {
        auto end = std::min(unique.size(), begin + config_.batch_limit);
        std::string joined;
        for (auto i = begin; i < end; ++i) {
            if (!joined.empty()) {
                joined.push_back('|');
            }
            joined += unique[i];
        }
        auto doc = call(config_.api_url, {{"action", "wbgetentities"},
                                          {"ids", joined},
                                          {"props", std::string(props)},
                                          {"languages", std::string(language)}});
        auto entities = doc.find("entities");
        if (entities == doc.end() || !entities->is_object()) {
            throw api_error("badjson", "wbgetentities response lacks 'entities'");
        }
        merged.update(*entities);
    }
    return merged;
}

std::map<entity_id, std::string>
entity_api_client::fetch_labels(const std::vector<entity_id>& ids,
                                std::string_view language) {
    auto entities = fetch_entities(ids, "labels", language);
    std::map<entity_id, std::string> out;
    for (const auto& id : ids) {
        auto it = entities.find(id.str());
        if (it == entities.end() || !it->is_object()) {
            continue;
        }
        const auto& labels = it->value("labels", json::object());
        auto label = labels.find(std::string(language));
        if (label != labels.end() && label->contains("value")) {
            out.emplace(id, (*label)["value"].get<std::string>());
        }
    }
    return out;
}

std::vector<search_hit> entity_api_client::search_entities(std::string_view term,
                                                           int limit,
                                                           std::string_view language) {
    auto first = term.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) {
        throw precondition_error("search term is blank");
    }
    auto last = term.find_last_not_of(" \t\r\n");
    term = term.substr(first, last - first + 1);
    if (limit < 1) {
        throw precondition_error("search limit must be positive");
    }
    auto doc = call(config_.api_url, {{"action", "wbsearchentities"},
                                      {"search", std::string(term)},
                                      {"language", std::string(language)},
                                      {"uselang", std::string(language)},
                                      {"type", "item"},
                                      {"limit", std::to_string(limit)}});
    std::vector<search_hit> out;
    for (const auto& hit : doc.value("search", json::array())) {
        if (static_cast<int>(out.size()) >= limit) {
            break;
        }
        auto id = entity_id::try_parse(hit.value("id", ""));
        if (!id) {
            continue;
        }
        out.push_back({*id, hit.value("label", ""), hit.value("description", "")});
    }
    return out;
}

std::optional<std::string> entity_api_client::fetch_extract(entity_id id,
                                                            std::string_view wiki) {
    if (!id.is_item()) {
        throw precondition_error("fetch_extract needs an item id, got " + id.str());
    }
    if (!wiki.ends_with("wiki") || wiki.size() <= 4) {
        throw precondition_error("unsupported wiki tag '" + std::string(wiki) + "'");
    }
    auto doc = call(config_.api_url, {{"action", "wbgetentities"},
                                      {"ids", id.str()},
                                      {"props", "sitelinks"},
                                      {"sitefilter", std::string(wiki)}});
    const auto& entity = doc.value("entities", json::object()).value(id.str(), json::object());
    const auto& link = entity.value("sitelinks", json::object()).value(std::string(wiki), json::object());
    if (!link.contains("title")) {
        return std::nullopt;
    }
    auto title = link["title"].get<std::string>();

    auto lang = std::string(wiki.substr(0, wiki.size() - 4));
    auto url = config_.wiki_api_template;
    if (auto pos = url.find("{lang}"); pos != std::string::npos) {
        url.replace(pos, 6, lang);
    }
    // errors here mean no extract
    try {
        auto page_doc = call(url, {{"action", "query"},
                                   {"prop", "extracts"},
                                   {"exintro", "1"},
                                   {"explaintext", "1"},
                                   {"redirects", "1"},
                                   {"formatversion", "2"},
                                   {"titles", title}});
        for (const auto& page : page_doc.value("query", json::object())
                                    .value("pages", json::array())) {
            if (page.contains("extract") && page["extract"].is_string()) {
                auto text = page["extract"].get<std::string>();
                if (!text.empty()) {
                    return text;
                }
            }
        }
    } catch (const error&) {
    }
    return std::nullopt;
}

} // namespace scholia
