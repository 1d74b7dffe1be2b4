#include "scholia/service.hpp"

#include <httplib.h>

#include <charconv>
#include <cstdlib>
#include <thread>

namespace scholia {

using nlohmann::json;

service_config service_config::from_env() {
    service_config c;
    if (const char* bind = std::getenv("SCHOLIA_BIND"); bind && *bind) {
        std::tie(c.host, c.port) = parse_bind(bind);
    }
    if (const char* prefix = std::getenv("SCHOLIA_PREFIX"); prefix && *prefix) {
        c.prefix = normalize_prefix(prefix);
    }
    if (const char* dir = std::getenv("SCHOLIA_UI_DIR"); dir && *dir) {
        c.ui_dir = dir;
    }
    return c;
}

std::pair<std::string, int> parse_bind(std::string_view text) {
    auto colon = text.rfind(':');
    if (colon == std::string_view::npos || colon == 0) {
        throw precondition_error("bind address must be host:port, got '" + std::string(text)
                                 + "'");
    }
    auto host = std::string(text.substr(0, colon));
    auto port_text = text.substr(colon + 1);
    int port = -1;
    auto [ptr, ec] = std::from_chars(port_text.data(), port_text.data() + port_text.size(), port);
    if (ec != std::errc{} || ptr != port_text.data() + port_text.size() || port < 0
        || port > 65535) {
        throw precondition_error("bad port in bind address '" + std::string(text) + "'");
    }
    if (host.size() > 2 && host.front() == '[' && host.back() == ']') {
        host = host.substr(1, host.size() - 2);
    }
    return {host, port};
}

std::string normalize_prefix(std::string_view prefix) {
    std::string out;
    for (char c : prefix) {
        bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '/' || c == '-' || c == '_'
               || c == '.';
        if (!ok) {
            throw precondition_error("unsupported character in path prefix '"
                                     + std::string(prefix) + "'");
        }
        if (c == '/' && !out.empty() && out.back() == '/') {
            continue;
        }
        out.push_back(c);
    }
    while (!out.empty() && out.back() == '/') {
        out.pop_back();
    }
    if (!out.empty() && out.front() != '/') {
        out.insert(out.begin(), '/');
    }
    return out;
}

namespace {

std::string html_escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        case '\'': out += "&#39;"; break;
        default: out.push_back(c);
        }
    }
    return out;
}

std::string regex_escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        if (c == '.' || c == '-') {
            out.push_back('\\');
        }
        out.push_back(c);
    }
    return out;
}

const char* reason(int status) {
    switch (status) {
    case 400: return "Bad Request";
    case 404: return "Not Found";
    case 409: return "Conflict";
    case 502: return "Bad Gateway";
    default: return "Internal Server Error";
    }
}

void problem(httplib::Response& res, int status, const std::string& detail,
             const std::string& kind, const httplib::Request& req, json extra = {}) {
    json doc = {{"type", "about:blank"},
                {"title", reason(status)},
                {"status", status},
                {"detail", detail},
                {"kind", kind},
                {"instance", req.path}};
    if (extra.is_object()) {
        doc.update(extra);
    }
    res.status = status;
    res.set_content(doc.dump(), "application/problem+json");
}

/// Maps library errors onto HTTP problems.
void fail(httplib::Response& res, const httplib::Request& req, const std::exception& e) {
    if (const auto* a = dynamic_cast<const ambiguous*>(&e)) {
        problem(res, 409, a->what(), a->kind(), req, {{"candidates", a->candidates()}});
        return;
    }
    if (const auto* err = dynamic_cast<const error*>(&e)) {
        const auto& k = err->kind();
        int status = 500;
        if (k == "MalformedId" || k == "PreconditionViolation" || k == "MalformedPrefix") {
            status = 400;
        } else if (k == "UnknownPanel" || k == "NotFound") {
            status = 404;
        } else if (k == "TransportError" || k == "EndpointError" || k == "ParseError"
                   || k == "ApiError") {
            status = 502;
        }
        problem(res, status, err->what(), k, req);
        return;
    }
    problem(res, 500, e.what(), "InternalError", req);
}

constexpr std::string_view placeholder_ui = R"(<!doctype html>
<html><head><meta charset="utf-8"><title>Scholia</title></head>
<body><p>The web UI has not been built. Point SCHOLIA_UI_DIR at its build output.</p>
<p>The JSON API is available under <a href="../api/panels">api/panels</a>.</p></body></html>
)";

} // namespace

struct service::impl {
    service_config config;
    backend b;
    httplib::Server http;
    std::thread thread;

    std::string url(std::string_view path) const { return config.prefix + std::string(path); }

    std::string aspect_page(aspect a, entity_id id) {
        std::string label = id.str();
        std::optional<std::string> extract;
        // on failure: bare id, no excerpt
        try {
            auto labels = b.api->fetch_labels({id}, b.language);
            if (auto it = labels.find(id); it != labels.end()) {
                label = it->second;
            }
            extract = b.api->fetch_extract(id, b.language + "wiki");
        } catch (const error&) {
        }
        auto seg = std::string(to_segment(a));
        std::string html = "<!doctype html>\n<html lang=\"" + b.language
                         + "\">\n<head>\n<meta charset=\"utf-8\">\n<title>"
                         + html_escape(label) + " (" + seg + ")</title>\n<link rel=\"stylesheet\" href=\""
                         + url("/ui/app.css") + "\">\n</head>\n<body data-aspect=\"" + seg
                         + "\" data-subject=\"" + id.str() + "\" data-api=\"" + url("/api")
                         + "\">\n<header>\n<h1>" + html_escape(label) + "</h1>\n";
        if (extract) {
            html += "<p class=\"extract\">" + html_escape(*extract) + "</p>\n";
        }
        html += "</header>\n<main>\n";
        for (const auto& info : panel_catalog()) {
            if (info.owner != a) {
                continue;
            }
            auto name = std::string(info.name);
            html += "<section class=\"panel\" data-panel=\"" + name + "\" data-kind=\""
                  + std::string(to_string(info.kind)) + "\" data-src=\""
                  + url("/api/panel/" + seg + "/" + name + "/" + id.str()) + "\">\n<h2>"
                  + html_escape(info.description) + "</h2>\n</section>\n";
        }
        html += "</main>\n<script type=\"module\" src=\"" + url("/ui/app.js")
              + "\"></script>\n</body>\n</html>\n";
        return html;
    }

    void routes() {
        auto P = regex_escape(config.prefix);

        http.Get(P + "/healthz", [](const httplib::Request&, httplib::Response& res) {
            res.set_content(R"({"status":"ok"})", "application/json");
        });

        http.Get(P + "/api/panels", [](const httplib::Request&, httplib::Response& res) {
            res.set_content(panel_catalog_json().dump(), "application/json");
        });

        http.Get(P + "/api/search", [this](const httplib::Request& req, httplib::Response& res) {
            try {
                auto term = req.get_param_value("q");
                int limit = 10;
                if (req.has_param("limit")) {
                    try {
                        limit = std::stoi(req.get_param_value("limit"));
                    } catch (const std::exception&) {
                        throw precondition_error("limit must be an integer");
                    }
                }
                json results = json::array();
                for (const auto& hit : b.api->search_entities(term, limit, b.language)) {
                    results.push_back({{"id", hit.id.str()},
                                       {"label", hit.label},
                                       {"description", hit.description}});
                }
                res.set_content(json{{"query", term}, {"results", results}}.dump(),
                                "application/json");
            } catch (const std::exception& e) {
                fail(res, req, e);
            }
        });

        http.Get(P + R"(/api/panel/([^/]+)/([^/]+)/([^/]+))",
                 [this](const httplib::Request& req, httplib::Response& res) {
                     try {
                         auto a = aspect_from_segment(req.matches[1].str());
                         if (!a) {
                             throw unknown_panel(req.matches[1].str(), req.matches[2].str());
                         }
                         auto id = parse_entity_id(req.matches[3].str());
                         auto doc = run_panel(b, *a, req.matches[2].str(), id);
                         res.set_content(doc.dump(), "application/json");
                     } catch (const std::exception& e) {
                         fail(res, req, e);
                     }
                 });

        http.Get(P + R"(/api(/.*)?)", [](const httplib::Request& req, httplib::Response& res) {
            problem(res, 404, "no such API route", "NotFound", req);
        });

        if (!config.ui_dir.empty() && std::filesystem::is_directory(config.ui_dir)) {
            http.set_mount_point(url("/ui"), config.ui_dir.string());
        } else {
            http.Get(P + R"(/ui/?)", [](const httplib::Request&, httplib::Response& res) {
                res.set_content(std::string(placeholder_ui), "text/html; charset=utf-8");
            });
        }

        http.Get(P + "/?", [this](const httplib::Request&, httplib::Response& res) {
            res.set_redirect(url("/ui/"), 302);
        });

        http.Get(P + R"(/(doi|orcid|twitter|github)/(.+))",
                 [this](const httplib::Request& req, httplib::Response& res) {
                     try {
                         auto id = resolve_external(req.matches[1].str(), req.matches[2].str(),
                                                    *b.sparql, b.registry);
                         res.set_redirect(url("/" + id.str()), 302);
                     } catch (const std::exception& e) {
                         fail(res, req, e);
                     }
                 });

        http.Get(P + R"(/([^/]+)/([^/]+))",
                 [this](const httplib::Request& req, httplib::Response& res) {
                     try {
                         auto a = aspect_from_segment(req.matches[1].str());
                         if (!a) {
                             problem(res, 404, "unknown aspect '" + req.matches[1].str() + "'",
                                     "NotFound", req);
                             return;
                         }
                         auto id = parse_entity_id(req.matches[2].str());
                         if (!id.is_item()) {
                             throw malformed_id(id.str());
                         }
                         res.set_content(aspect_page(*a, id), "text/html; charset=utf-8");
                     } catch (const std::exception& e) {
                         fail(res, req, e);
                     }
                 });

        http.Get(P + R"(/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
            try {
                auto id = parse_entity_id(req.matches[1].str());
                if (!id.is_item()) {
                    throw malformed_id(id.str());
                }
                auto a = guess_aspect(id, *b.sparql, b.rules, b.registry);
                res.set_redirect(url("/" + std::string(to_segment(a)) + "/" + id.str()), 302);
            } catch (const std::exception& e) {
                fail(res, req, e);
            }
        });

        http.set_error_handler([](const httplib::Request& req, httplib::Response& res) {
            if (res.status == 404 && res.body.empty()) {
                problem(res, 404, "no such route", "NotFound", req);
            }
        });
    }
};

service::service(service_config config, backend b) : impl_(std::make_unique<impl>()) {
    impl_->config = std::move(config);
    impl_->config.prefix = normalize_prefix(impl_->config.prefix);
    impl_->b = std::move(b);
    if (!impl_->b.sparql || !impl_->b.api) {
        throw precondition_error("service needs both a SPARQL and an entity API client");
    }
    impl_->routes();
}

service::~service() { stop(); }

void service::start() {
    // SO_REUSEADDR only, so a taken port is an error
    impl_->http.set_socket_options([](socket_t sock) {
        int yes = 1;
        setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
    });
    auto& c = impl_->config;
    if (c.port == 0) {
        port_ = impl_->http.bind_to_any_port(c.host);
        if (port_ <= 0) {
            throw bind_error("cannot bind to " + c.host);
        }
    } else {
        if (!impl_->http.bind_to_port(c.host, c.port)) {
            throw bind_error("cannot bind to " + c.host + ":" + std::to_string(c.port));
        }
        port_ = c.port;
    }
    impl_->thread = std::thread([this] { impl_->http.listen_after_bind(); });
    impl_->http.wait_until_ready();
}

void service::stop() {
    if (impl_ && impl_->thread.joinable()) {
        impl_->http.stop();
        impl_->thread.join();
    }
}

void service::wait() {
    if (impl_->thread.joinable()) {
        impl_->thread.join();
    }
}

std::string service::base_url() const {
    return "http://" + impl_->config.host + ":" + std::to_string(port_) + impl_->config.prefix;
}

} // namespace scholia
