#pragma once

#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace scholia::testing {

struct grammar_report {
    bool ok = true;
    std::string message; // first error, with a byte offset
    std::set<std::string> variables;
    std::set<std::string> prefixes_used;
};

/// Prefixes the public Wikidata endpoint declares without PREFIX lines.
const std::set<std::string>& wdqs_prefixes();

/// Recursive-descent check against the SPARQL 1.1 query grammar (SELECT and
/// ASK forms). Undeclared prefixes are errors unless listed in `predeclared`.
grammar_report check_sparql(std::string_view query,
                            const std::set<std::string>& predeclared = wdqs_prefixes());

} // namespace scholia::testing
