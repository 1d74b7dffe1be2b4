#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "scholia/panels.hpp"

namespace scholia::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_usage = 1;
inline constexpr int exit_runtime = 2;

/// Runs one command line (without the program name). Data goes to `out`,
/// diagnostics to `err`. Clients are built from the environment on first use
/// unless `make_backend` is given.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
             std::function<backend()> make_backend = {});

} // namespace scholia::cli
