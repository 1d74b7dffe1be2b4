#pragma once

#include <filesystem>
#include <memory>
#include <string>

#include "scholia/panels.hpp"

namespace scholia {

struct service_config {
    std::string host = "127.0.0.1";
    int port = 8100;
    /// Deploy-time path prefix such as "/scholia"; empty serves from the root.
    std::string prefix;
    /// Built web UI; a placeholder page is served when absent.
    std::filesystem::path ui_dir;

    /// SCHOLIA_BIND (host:port), SCHOLIA_PREFIX, SCHOLIA_UI_DIR.
    static service_config from_env();
};

/// "host:port" -> (host, port). Throws precondition_error.
std::pair<std::string, int> parse_bind(std::string_view text);

/// Normalizes "scholia/" to "/scholia"; throws precondition_error on odd input.
std::string normalize_prefix(std::string_view prefix);

class service {
public:
    service(service_config config, backend b);
    ~service();

    service(const service&) = delete;
    service& operator=(const service&) = delete;

    /// Binds and serves on a background thread. Port 0 picks a free port.
    /// Throws bind_error.
    void start();
    void stop();
    /// Blocks until stop() is called from another thread.
    void wait();

    int port() const noexcept { return port_; }
    std::string base_url() const;

private:
    struct impl;
    std::unique_ptr<impl> impl_;
    int port_ = 0;
};

} // namespace scholia
