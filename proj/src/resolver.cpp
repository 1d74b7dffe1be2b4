#include "scholia/resolver.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

namespace scholia {

namespace {

std::string_view trim(std::string_view s) {
    auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) {
        return {};
    }
    auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

void sort_rules(std::vector<aspect_rule>& rules) {
    std::set<entity_id> seen;
    for (const auto& r : rules) {
        if (!r.klass.is_item()) {
            throw precondition_error("aspect rule class must be an item: " + r.klass.str());
        }
        if (!seen.insert(r.klass).second) {
            throw precondition_error("duplicate aspect rule for " + r.klass.str());
        }
    }
    std::sort(rules.begin(), rules.end(), [](const aspect_rule& a, const aspect_rule& b) {
        if (a.priority != b.priority) {
            return a.priority > b.priority;
        }
        return a.klass < b.klass;
    });
}

} // namespace

aspect_rules::aspect_rules()
    : aspect_rules(std::vector<aspect_rule>{
          {item(5), aspect::author, 100},            // human
          {item(13442814), aspect::work, 90},        // scientific article
          {item(571), aspect::work, 85},             // book
          {item(580922), aspect::work, 85},          // preprint
          {item(23927052), aspect::work, 85},        // conference paper
          {item(3918), aspect::organization, 70},    // university
          {item(31855), aspect::organization, 70},   // research institute
          {item(4830453), aspect::organization, 60}, // business
          {item(5633421), aspect::venue, 80},        // scientific journal
          {item(1143604), aspect::venue, 80},        // proceedings
          {item(277759), aspect::series, 75},        // book series
          {item(2217301), aspect::publisher, 78},    // publisher
          {item(157031), aspect::sponsor, 65},       // foundation
          {item(327333), aspect::sponsor, 65},       // government agency
      }) {}

aspect_rules::aspect_rules(std::vector<aspect_rule> rules) : rules_(std::move(rules)) {
    sort_rules(rules_);
}

aspect_rules aspect_rules::parse(std::string_view text) {
    std::vector<aspect_rule> rules;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        auto line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        auto fail = [&](const std::string& why) {
            return precondition_error("aspect rules line " + std::to_string(line_no) + ": "
                                      + why);
        };
        auto eq = line.find('=');
        auto comma = line.find(',', eq == std::string_view::npos ? 0 : eq);
        if (eq == std::string_view::npos || comma == std::string_view::npos) {
            throw fail("expected 'class = aspect, priority'");
        }
        auto klass = entity_id::try_parse(trim(line.substr(0, eq)));
        if (!klass) {
            throw fail("bad class id");
        }
        auto target = aspect_from_segment(trim(line.substr(eq + 1, comma - eq - 1)));
        if (!target) {
            throw fail("unknown aspect");
        }
        auto prio_text = trim(line.substr(comma + 1));
        int priority = 0;
        auto [ptr, ec] = std::from_chars(prio_text.data(), prio_text.data() + prio_text.size(),
                                         priority);
        if (ec != std::errc{} || ptr != prio_text.data() + prio_text.size()) {
            throw fail("bad priority");
        }
        rules.push_back({*klass, *target, priority});
    }
    return aspect_rules(std::move(rules));
}

aspect_rules aspect_rules::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw io_error("cannot read aspect rules from " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

aspect_rules aspect_rules::from_env() {
    if (const char* path = std::getenv("SCHOLIA_ASPECT_RULES"); path && *path) {
        return load(path);
    }
    return {};
}

aspect aspect_rules::pick(const std::vector<entity_id>& classes) const {
    for (const auto& rule : rules_) {
        if (std::find(classes.begin(), classes.end(), rule.klass) != classes.end()) {
            return rule.target;
        }
    }
    return aspect::topic;
}

std::vector<entity_id> instance_classes(entity_id subject, sparql_client& client,
                                        const property_registry& registry) {
    if (!subject.is_item()) {
        throw precondition_error("aspect guessing needs an item id, got " + subject.str());
    }
    auto results = client.execute(build_instance_of_query(subject, registry));
    std::vector<entity_id> out;
    for (const auto& row : results.rows) {
        if (const auto* t = find(row, "class")) {
            if (auto id = t->as_entity()) {
                out.push_back(*id);
            }
        }
    }
    return out;
}

aspect guess_aspect(entity_id subject, sparql_client& client, const aspect_rules& rules,
                    const property_registry& registry) {
    return rules.pick(instance_classes(subject, client, registry));
}

std::string normalize_external(std::string_view kind, std::string_view value) {
    std::string out(trim(value));
    if (kind == "doi") {
        std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
            return static_cast<char>(std::toupper(c));
        });
    }
    return out;
}

entity_id resolve_external(std::string_view kind, std::string_view value,
                           sparql_client& client, const property_registry& registry) {
    auto needle = normalize_external(kind, value);
    if (needle.empty()) {
        throw precondition_error("empty " + std::string(kind) + " value");
    }
    auto results = client.execute(build_external_id_query(kind, needle, registry));
    std::vector<entity_id> matches;
    for (const auto& row : results.rows) {
        const auto* t = find(row, "item");
        auto id = t ? t->as_entity() : std::nullopt;
        if (id && std::find(matches.begin(), matches.end(), *id) == matches.end()) {
            matches.push_back(*id);
        }
    }
    if (matches.empty()) {
        throw not_found("no item has " + std::string(kind) + " '" + needle + "'");
    }
    if (matches.size() > 1) {
        std::vector<std::string> names;
        for (const auto& m : matches) {
            names.push_back(m.str());
        }
        throw ambiguous(std::to_string(matches.size()) + " items have "
                            + std::string(kind) + " '" + needle + "'",
                        std::move(names));
    }
    return matches.front();
}

} // namespace scholia
