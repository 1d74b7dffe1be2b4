#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "scholia/model.hpp"
#include "scholia/query_gen.hpp"
#include "scholia/sparql_client.hpp"

namespace scholia {

struct aspect_rule {
    entity_id klass;
    aspect target;
    int priority;

    bool operator==(const aspect_rule&) const = default;
};

/// Instance-of class -> aspect table. Higher priority wins.
class aspect_rules {
public:
    /// Built-in defaults (human -> author, scientific article -> work, ...).
    aspect_rules();
    explicit aspect_rules(std::vector<aspect_rule> rules);

    /// Lines of the form "Q5 = author, 100"; '#' starts a comment.
    /// Throws precondition_error on a malformed line or a duplicate class.
    static aspect_rules parse(std::string_view text);
    static aspect_rules load(const std::string& path);

    /// Defaults, or the file named by SCHOLIA_ASPECT_RULES.
    static aspect_rules from_env();

    /// Highest-priority rule among `classes`; Topic when nothing matches.
    aspect pick(const std::vector<entity_id>& classes) const;

    /// Sorted by priority descending, then class id.
    const std::vector<aspect_rule>& rules() const noexcept { return rules_; }

private:
    std::vector<aspect_rule> rules_;
};

std::vector<entity_id> instance_classes(entity_id subject, sparql_client& client,
                                        const property_registry& registry = {});

aspect guess_aspect(entity_id subject, sparql_client& client,
                    const aspect_rules& rules = {},
                    const property_registry& registry = {});

/// kind is one of doi, orcid, twitter, github. DOIs are uppercased.
/// Throws not_found or ambiguous (with every candidate).
entity_id resolve_external(std::string_view kind, std::string_view value,
                           sparql_client& client,
                           const property_registry& registry = {});

/// The value actually looked up for (kind, value).
std::string normalize_external(std::string_view kind, std::string_view value);

} // namespace scholia
