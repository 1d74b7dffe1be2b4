#include "scholia/http.hpp"

#include "scholia/errors.hpp"

#include <httplib.h>

#include <cctype>
#include <charconv>

namespace scholia::http {

url_parts split_url(std::string_view url) {
    url_parts out;
    auto scheme_end = url.find("://");
    if (scheme_end == std::string_view::npos) {
        throw precondition_error("not an absolute URL: " + std::string(url));
    }
    out.scheme = std::string(url.substr(0, scheme_end));
    if (out.scheme != "http" && out.scheme != "https") {
        throw precondition_error("unsupported URL scheme: " + out.scheme);
    }
    auto rest = url.substr(scheme_end + 3);
    auto slash = rest.find('/');
    auto authority = rest.substr(0, slash);
    out.path = slash == std::string_view::npos ? "/" : std::string(rest.substr(slash));
    if (authority.empty()) {
        throw precondition_error("URL has no host: " + std::string(url));
    }
    auto colon = authority.rfind(':');
    if (colon != std::string_view::npos && authority.find(']') == std::string_view::npos) {
        auto port_text = authority.substr(colon + 1);
        auto [ptr, ec] = std::from_chars(port_text.data(),
                                         port_text.data() + port_text.size(),
                                         out.port);
        if (ec != std::errc() || ptr != port_text.data() + port_text.size()) {
            throw precondition_error("bad port in URL: " + std::string(url));
        }
        out.host = std::string(authority.substr(0, colon));
    } else {
        out.host = std::string(authority);
        out.port = out.scheme == "https" ? 443 : 80;
    }
    return out;
}

std::string url_encode(std::string_view text) {
    static constexpr char hex[] = "0123456789ABCDEF";
    std::string out;
    out.reserve(text.size() * 3);
    for (unsigned char c : text) {
        if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~') {
            out.push_back(static_cast<char>(c));
        } else {
            out.push_back('%');
            out.push_back(hex[c >> 4]);
            out.push_back(hex[c & 0xF]);
        }
    }
    return out;
}

std::string encode_params(const parameter_list& params) {
    std::string out;
    for (const auto& [key, value] : params) {
        if (!out.empty()) {
            out.push_back('&');
        }
        out += url_encode(key);
        out.push_back('=');
        out += url_encode(value);
    }
    return out;
}

namespace {

class httplib_transport final : public transport {
public:
    response send(const request& req) override {
        auto parts = split_url(req.url);
        auto origin = parts.scheme + "://" + parts.host + ":"
                    + std::to_string(parts.port);
        httplib::Client client(origin);
        auto seconds = std::chrono::duration_cast<std::chrono::seconds>(req.timeout);
        auto micros = std::chrono::duration_cast<std::chrono::microseconds>(
            req.timeout - seconds);
        client.set_connection_timeout(seconds.count(), micros.count());
        client.set_read_timeout(seconds.count(), micros.count());
        client.set_write_timeout(seconds.count(), micros.count());
        client.set_follow_location(true);

        httplib::Headers headers;
        for (const auto& [k, v] : req.headers) {
            headers.emplace(k, v);
        }

        httplib::Result result;
        auto body = encode_params(req.params);
        if (req.verb == request::method::get) {
            auto target = parts.path;
            if (!body.empty()) {
                target += (target.find('?') == std::string::npos ? "?" : "&") + body;
            }
            result = client.Get(target, headers);
        } else {
            result = client.Post(parts.path, headers, body,
                                 "application/x-www-form-urlencoded");
        }
        if (!result) {
            throw transport_error(req.url + ": " + httplib::to_string(result.error()));
        }
        response out;
        out.status = result->status;
        out.body = std::move(result->body);
        out.content_type = result->get_header_value("Content-Type");
        return out;
    }
};

} // namespace

std::shared_ptr<transport> make_default_transport() {
    return std::make_shared<httplib_transport>();
}

} // namespace scholia::http
