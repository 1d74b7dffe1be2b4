#pragma once

#include <chrono>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace scholia::http {

using parameter_list = std::vector<std::pair<std::string, std::string>>;

struct request {
    enum class method { get, post_form };

    method verb = method::get;
    std::string url;                 // without query string
    parameter_list params;           // query string for GET, form body for POST
    std::vector<std::pair<std::string, std::string>> headers;
    std::chrono::milliseconds timeout{30000};
};

struct response {
    int status = 0;
    std::string body;
    std::string content_type;
};

/// Blocking transport. Throws transport_error on network failure; any HTTP
/// status (including 4xx/5xx) is returned as a response.
class transport {
public:
    virtual ~transport() = default;
    virtual response send(const request& req) = 0;
};

/// cpp-httplib backed transport; one connection per request so instances can
/// be shared freely between threads.
std::shared_ptr<transport> make_default_transport();

struct url_parts {
    std::string scheme;
    std::string host;
    int port = 0;
    std::string path;
};

/// Throws precondition_error unless `url` is an absolute http(s) URL.
url_parts split_url(std::string_view url);

std::string url_encode(std::string_view text);
std::string encode_params(const parameter_list& params);

} // namespace scholia::http
