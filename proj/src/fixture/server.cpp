#include <httplib.h>

#include <algorithm>
#include <atomic>
#include <cctype>
#include <set>

#include "scholia/fixture.hpp"
#include "scholia/sparql_client.hpp"

namespace scholia::fixture {

using nlohmann::json;

namespace {

std::string param(const std::multimap<std::string, std::string>& params,
                  const std::string& name, const std::string& fallback = {}) {
    auto it = params.find(name);
    return it == params.end() ? fallback : it->second;
}

std::vector<std::string> split_bar(const std::string& s) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        auto bar = s.find('|', start);
        if (bar == std::string::npos) {
            bar = s.size();
        }
        if (bar > start) {
            out.push_back(s.substr(start, bar - start));
        }
        start = bar + 1;
    }
    return out;
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

json error_doc(const std::string& code, const std::string& info) {
    return {{"error", {{"code", code}, {"info", info}}}};
}

json snak_json(entity_id prop, const value& v) {
    std::string datatype = "string";
    switch (v.kind) {
    case value::type::entity: datatype = v.entity->is_item() ? "wikibase-item" : "wikibase-property"; break;
    case value::type::monolingual: datatype = "monolingualtext"; break;
    case value::type::time: datatype = "time"; break;
    case value::type::quantity: datatype = "quantity"; break;
    case value::type::url: datatype = "url"; break;
    case value::type::string: datatype = "string"; break;
    }
    return {{"snaktype", "value"},
            {"property", prop.str()},
            {"datavalue", v.to_datavalue()},
            {"datatype", datatype}};
}

json snak_group(const std::vector<snak>& snaks) {
    json out = json::object();
    for (const auto& [p, v] : snaks) {
        out[p.str()].push_back(snak_json(p, v));
    }
    return out;
}

json entity_doc(const dataset& data, entity_id id, const std::set<std::string>& props,
                const std::vector<std::string>& languages, const std::string& sitefilter) {
    json doc = {{"type", id.is_item() ? "item" : "property"}, {"id", id.str()}};
    auto wanted_lang = [&](const std::string& lang) {
        return languages.empty()
            || std::find(languages.begin(), languages.end(), lang) != languages.end();
    };
    if (props.contains("labels") || props.contains("descriptions")) {
        json labels = json::object();
        json descriptions = json::object();
        for (const auto& [key, entry] : data.labels) {
            if (key.first != id || !wanted_lang(key.second)) {
                continue;
            }
            labels[key.second] = {{"language", key.second}, {"value", entry.label}};
            if (!entry.description.empty()) {
                descriptions[key.second]
                    = {{"language", key.second}, {"value", entry.description}};
            }
        }
        if (props.contains("labels")) {
            doc["labels"] = labels;
        }
        if (props.contains("descriptions")) {
            doc["descriptions"] = descriptions;
        }
    }
    if (props.contains("claims")) {
        json claims = json::object();
        for (const auto* st : data.about(id)) {
            json claim = {{"mainsnak", snak_json(st->property, st->object)},
                          {"type", "statement"},
                          {"id", id.str() + "$fixture-" + std::to_string(st->line)},
                          {"rank", "normal"}};
            if (!st->qualifiers.empty()) {
                claim["qualifiers"] = snak_group(st->qualifiers);
            }
            if (!st->references.empty()) {
                json refs = json::array();
                for (const auto& ref : st->references) {
                    refs.push_back({{"snaks", snak_group(ref)}});
                }
                claim["references"] = refs;
            }
            claims[st->property.str()].push_back(std::move(claim));
        }
        doc["claims"] = claims;
    }
    if (props.contains("sitelinks")) {
        json links = json::object();
        if (auto it = data.sitelinks.find(id); it != data.sitelinks.end()) {
            for (const auto& link : it->second) {
                if (sitefilter.empty() || link.site == sitefilter) {
                    links[link.site] = {{"site", link.site}, {"title", link.title}};
                }
            }
        }
        doc["sitelinks"] = links;
    }
    return doc;
}

json wbgetentities(const dataset& data, const std::multimap<std::string, std::string>& params) {
    auto ids = split_bar(param(params, "ids"));
    if (ids.empty()) {
        return error_doc("param-missing", "The ids parameter must be set.");
    }
    if (ids.size() > 50) {
        return error_doc("toomanyvalues",
                         "Too many values supplied for parameter \"ids\". The limit is 50.");
    }
    auto prop_list = split_bar(param(params, "props", "info|sitelinks|labels|descriptions|claims"));
    std::set<std::string> props(prop_list.begin(), prop_list.end());
    auto languages = split_bar(param(params, "languages"));
    auto sitefilter = param(params, "sitefilter");

    std::set<entity_id> known;
    for (auto id : data.items()) {
        known.insert(id);
    }
    for (const auto& st : data.statements) {
        known.insert(st.property);
    }
    json entities = json::object();
    for (const auto& text : ids) {
        auto id = entity_id::try_parse(text);
        if (!id) {
            return error_doc("no-such-entity", "Could not find an entity with the ID \"" + text
                                                   + "\".");
        }
        if (!known.contains(*id)) {
            entities[text] = {{"id", text}, {"missing", ""}};
            continue;
        }
        entities[text] = entity_doc(data, *id, props, languages, sitefilter);
    }
    return {{"entities", entities}, {"success", 1}};
}

json wbsearchentities(const dataset& data,
                      const std::multimap<std::string, std::string>& params) {
    auto term = param(params, "search");
    if (term.empty()) {
        return error_doc("param-missing", "The search parameter must be set.");
    }
    auto language = param(params, "language", "en");
    int limit = 7;
    try {
        limit = std::clamp(std::stoi(param(params, "limit", "7")), 1, 50);
    } catch (const std::exception&) {
        return error_doc("badinteger", "Invalid value for parameter \"limit\".");
    }
    auto needle = lower(term);

    struct hit {
        int rank;
        entity_id id;
        const label_entry* entry;
    };
    std::vector<hit> hits;
    for (const auto& [key, entry] : data.labels) {
        if (key.second != language || !key.first.is_item()) {
            continue;
        }
        auto label = lower(entry.label);
        int rank = -1;
        if (label == needle) {
            rank = 0;
        } else if (label.starts_with(needle)) {
            rank = 1;
        } else {
            for (std::size_t pos = label.find(' '); pos != std::string::npos;
                 pos = label.find(' ', pos + 1)) {
                if (label.compare(pos + 1, needle.size(), needle) == 0) {
                    rank = 2;
                    break;
                }
            }
        }
        if (rank >= 0) {
            hits.push_back({rank, key.first, &entry});
        }
    }
    std::sort(hits.begin(), hits.end(), [](const hit& a, const hit& b) {
        if (a.rank != b.rank) {
            return a.rank < b.rank;
        }
        return a.id.number() < b.id.number();
    });
    json results = json::array();
    for (const auto& h : hits) {
        if (static_cast<int>(results.size()) >= limit) {
            break;
        }
        json r = {{"id", h.id.str()},
                  {"title", h.id.str()},
                  {"concepturi", h.id.iri()},
                  {"label", h.entry->label},
                  {"match", {{"type", "label"}, {"language", language}, {"text", h.entry->label}}}};
        if (!h.entry->description.empty()) {
            r["description"] = h.entry->description;
        }
        results.push_back(std::move(r));
    }
    return {{"searchinfo", {{"search", term}}}, {"search", results}, {"success", 1}};
}

json extracts(const dataset& data, const std::multimap<std::string, std::string>& params) {
    if (param(params, "prop") != "extracts") {
        return error_doc("badvalue", "Only prop=extracts is supported by the fixture.");
    }
    json pages = json::array();
    std::size_t page_id = 1000;
    for (const auto& title : split_bar(param(params, "titles"))) {
        json page = {{"ns", 0}, {"title", title}};
        bool found = false;
        for (const auto& [id, links] : data.sitelinks) {
            for (const auto& link : links) {
                if (link.title == title && !found) {
                    found = true;
                    page["pageid"] = page_id + id.number() % 100000;
                    page["extract"] = link.extract;
                }
            }
        }
        if (!found) {
            page["missing"] = true;
        }
        pages.push_back(std::move(page));
    }
    return {{"batchcomplete", true}, {"query", {{"pages", pages}}}};
}

} // namespace

json api_response(const dataset& data, const std::multimap<std::string, std::string>& params) {
    auto action = param(params, "action");
    if (action == "wbgetentities") {
        return wbgetentities(data, params);
    }
    if (action == "wbsearchentities") {
        return wbsearchentities(data, params);
    }
    if (action == "query") {
        return extracts(data, params);
    }
    return error_doc("badvalue", "Unrecognized value for parameter \"action\": " + action + ".");
}

struct server::impl {
    std::shared_ptr<const dataset> data;
    httplib::Server http;
    std::thread thread;
    mutable std::mutex log_mutex;
    std::vector<recorded_request> log;

    void record(recorded_request r) {
        std::lock_guard lock(log_mutex);
        log.push_back(std::move(r));
    }
};

server::server(std::shared_ptr<const dataset> data) : impl_(std::make_unique<impl>()) {
    impl_->data = std::move(data);
    auto* self = impl_.get();

    auto sparql = [self](const httplib::Request& req, httplib::Response& res) {
        std::string query;
        if (req.has_param("query")) {
            query = req.get_param_value("query");
        }
        auto normalized = normalize_whitespace(query);
        self->record({req.method, req.path, "sparql", normalized});
        if (normalized.empty()) {
            res.status = 400;
            res.set_content("missing 'query' parameter\n", "text/plain");
            return;
        }
        auto hash = to_hex(sha256(normalized));
        auto it = self->data->canned.find(hash);
        if (it == self->data->canned.end()) {
            res.status = 400;
            res.set_content("unknown query (not in the canned set); normalized text:\n"
                                + normalized + "\n",
                            "text/plain");
            return;
        }
        res.set_content(serialize_results(it->second.results),
                        "application/sparql-results+json");
    };
    impl_->http.Get("/sparql", sparql);
    impl_->http.Post("/sparql", sparql);

    auto api = [self](const httplib::Request& req, httplib::Response& res) {
        std::multimap<std::string, std::string> params(req.params.begin(), req.params.end());
        auto action = param(params, "action");
        auto detail = param(params, "ids", param(params, "search", param(params, "titles")));
        self->record({req.method, req.path, action, detail});
        res.set_content(api_response(*self->data, params).dump(), "application/json");
    };
    impl_->http.Get("/w/api.php", api);
    impl_->http.Post("/w/api.php", api);

    impl_->http.set_error_handler([self](const httplib::Request& req, httplib::Response& res) {
        if (res.status == 404) {
            self->record({req.method, req.path, "unknown", {}});
            res.set_content("not found\n", "text/plain");
        }
    });
}

server::~server() { stop(); }

void server::start(const std::string& host, int port) {
    if (impl_->thread.joinable()) {
        throw precondition_error("fixture server already running");
    }
    // SO_REUSEADDR only, so a taken port is an error
    impl_->http.set_socket_options([](socket_t sock) {
        int yes = 1;
        setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
    });
    host_ = host;
    if (port == 0) {
        port_ = impl_->http.bind_to_any_port(host);
        if (port_ <= 0) {
            throw bind_error("cannot bind fixture server to " + host);
        }
    } else {
        if (!impl_->http.bind_to_port(host, port)) {
            throw bind_error("cannot bind fixture server to " + host + ":"
                             + std::to_string(port));
        }
        port_ = port;
    }
    impl_->thread = std::thread([this] { impl_->http.listen_after_bind(); });
    impl_->http.wait_until_ready();
}

void server::stop() {
    if (impl_ && impl_->thread.joinable()) {
        impl_->http.stop();
        impl_->thread.join();
    }
}

void server::wait() {
    if (impl_->thread.joinable()) {
        impl_->thread.join();
    }
}

std::string server::base_url() const {
    return "http://" + host_ + ":" + std::to_string(port_);
}

std::vector<recorded_request> server::requests() const {
    std::lock_guard lock(impl_->log_mutex);
    return impl_->log;
}

void server::clear_requests() {
    std::lock_guard lock(impl_->log_mutex);
    impl_->log.clear();
}

} // namespace scholia::fixture
