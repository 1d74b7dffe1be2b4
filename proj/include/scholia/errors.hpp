#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace scholia {

/// Base of every error raised by the library. `kind()` is a stable
/// machine-readable tag used for JSON error output.
class error : public std::runtime_error {
public:
    error(std::string kind, const std::string& message)
        : std::runtime_error(message), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

class malformed_id : public error {
public:
    explicit malformed_id(const std::string& text)
        : error("MalformedId", "malformed entity id: '" + text + "'") {}
};

class precondition_error : public error {
public:
    explicit precondition_error(const std::string& message)
        : error("PreconditionViolation", message) {}
};

class transport_error : public error {
public:
    explicit transport_error(const std::string& message)
        : error("TransportError", message) {}
};

class endpoint_error : public error {
public:
    endpoint_error(int status, std::string body)
        : error("EndpointError",
                "endpoint returned HTTP " + std::to_string(status)),
          status_(status), body_(std::move(body)) {}

    int status() const noexcept { return status_; }
    const std::string& body() const noexcept { return body_; }

private:
    int status_;
    std::string body_;
};

class parse_error : public error {
public:
    parse_error(const std::string& message, std::size_t offset,
                std::string path)
        : error("ParseError",
                message + " (at byte " + std::to_string(offset)
                    + (path.empty() ? "" : ", " + path) + ")"),
          offset_(offset), path_(std::move(path)) {}

    std::size_t offset() const noexcept { return offset_; }
    const std::string& path() const noexcept { return path_; }

private:
    std::size_t offset_;
    std::string path_;
};

class api_error : public error {
public:
    api_error(std::string code, std::string info)
        : error("ApiError", "API error " + code + ": " + info),
          code_(std::move(code)), info_(std::move(info)) {}

    const std::string& code() const noexcept { return code_; }
    const std::string& info() const noexcept { return info_; }

private:
    std::string code_;
    std::string info_;
};

class unknown_panel : public error {
public:
    unknown_panel(const std::string& aspect, const std::string& panel)
        : error("UnknownPanel", "unknown panel " + aspect + "/" + panel) {}
};

class malformed_prefix : public error {
public:
    explicit malformed_prefix(const std::string& prefix)
        : error("MalformedPrefix",
                "not an absolute URL prefix: '" + prefix + "'") {}
};

class not_found : public error {
public:
    explicit not_found(const std::string& message)
        : error("NotFound", message) {}
};

class ambiguous : public error {
public:
    ambiguous(const std::string& message, std::vector<std::string> candidates)
        : error("Ambiguous", message), candidates_(std::move(candidates)) {}

    const std::vector<std::string>& candidates() const noexcept {
        return candidates_;
    }

private:
    std::vector<std::string> candidates_;
};

class ordinal_out_of_range : public error {
public:
    ordinal_out_of_range(int ordinal, int author_count)
        : error("OrdinalOutOfRange",
                "ordinal " + std::to_string(ordinal) + " exceeds author count "
                    + std::to_string(author_count)) {}
};

class zero_author_count : public error {
public:
    zero_author_count()
        : error("ZeroAuthorCount", "cited work has zero authors") {}
};

class io_error : public error {
public:
    explicit io_error(const std::string& message) : error("IoError", message) {}
};

class bind_error : public error {
public:
    explicit bind_error(const std::string& message)
        : error("BindError", message) {}
};

} // namespace scholia
