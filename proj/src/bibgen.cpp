#include "scholia/bibgen.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace scholia::bib {

using nlohmann::json;

const std::string* bib_entry::field(std::string_view name) const {
    for (const auto& [k, v] : fields) {
        if (k == name) {
            return &v;
        }
    }
    return nullptr;
}

namespace {

std::string_view trim(std::string_view s) {
    auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) {
        return {};
    }
    auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

} // namespace

aux_citations parse_aux(std::string_view content) {
    constexpr std::string_view marker = "\\citation{";
    aux_citations out;
    std::set<std::string> skipped_seen;
    auto skip = [&](std::string key) {
        if (skipped_seen.insert(key).second) {
            out.skipped.push_back(std::move(key));
        }
    };
    std::size_t pos = 0;
    while ((pos = content.find(marker, pos)) != std::string_view::npos) {
        auto open = pos + marker.size();
        auto line_end = content.find('\n', open);
        auto close = content.find('}', open);
        if (close == std::string_view::npos
            || (line_end != std::string_view::npos && close > line_end)) {
            auto end = line_end == std::string_view::npos ? content.size() : line_end;
            skip(std::string(trim(content.substr(pos, end - pos))));
            pos = end;
            continue;
        }
        auto body = content.substr(open, close - open);
        pos = close + 1;
        std::size_t start = 0;
        while (start <= body.size()) {
            auto comma = body.find(',', start);
            if (comma == std::string_view::npos) {
                comma = body.size();
            }
            auto key = trim(body.substr(start, comma - start));
            start = comma + 1;
            if (key.empty()) {
                continue;
            }
            auto id = entity_id::try_parse(key);
            if (id && id->is_item()) {
                if (std::find(out.ids.begin(), out.ids.end(), *id) == out.ids.end()) {
                    out.ids.push_back(*id);
                }
            } else {
                skip(std::string(key));
            }
        }
    }
    return out;
}

std::string type_mapping::entry_type(const std::vector<entity_id>& classes) const {
    for (const auto& c : classes) {
        if (auto it = by_class.find(c); it != by_class.end()) {
            return it->second;
        }
    }
    return "misc";
}

namespace {

const json& claims_of(const json& entity, entity_id prop) {
    static const json empty = json::array();
    auto claims = entity.find("claims");
    if (claims == entity.end() || !claims->is_object()) {
        return empty;
    }
    auto it = claims->find(prop.str());
    return it == claims->end() || !it->is_array() ? empty : *it;
}

const json* datavalue(const json& snak) {
    auto dv = snak.find("datavalue");
    if (dv == snak.end() || !dv->is_object()) {
        return nullptr;
    }
    auto v = dv->find("value");
    return v == dv->end() ? nullptr : &*v;
}

std::optional<entity_id> snak_entity(const json& snak) {
    const auto* v = datavalue(snak);
    if (!v || !v->is_object() || !v->contains("id") || !(*v)["id"].is_string()) {
        return std::nullopt;
    }
    return entity_id::try_parse((*v)["id"].get<std::string>());
}

std::optional<std::string> snak_text(const json& snak) {
    const auto* v = datavalue(snak);
    if (!v) {
        return std::nullopt;
    }
    if (v->is_string()) {
        return v->get<std::string>();
    }
    if (v->is_object()) {
        if (auto t = v->find("text"); t != v->end() && t->is_string()) {
            return t->get<std::string>();
        }
        if (auto t = v->find("time"); t != v->end() && t->is_string()) {
            return t->get<std::string>();
        }
        if (auto t = v->find("amount"); t != v->end() && t->is_string()) {
            auto amount = t->get<std::string>();
            if (!amount.empty() && amount.front() == '+') {
                amount.erase(0, 1);
            }
            return amount;
        }
    }
    return std::nullopt;
}

std::optional<std::string> first_text(const json& entity, entity_id prop) {
    for (const auto& claim : claims_of(entity, prop)) {
        if (auto text = snak_text(claim.value("mainsnak", json::object()))) {
            return text;
        }
    }
    return std::nullopt;
}

std::optional<entity_id> first_entity(const json& entity, entity_id prop) {
    for (const auto& claim : claims_of(entity, prop)) {
        if (auto id = snak_entity(claim.value("mainsnak", json::object()))) {
            return id;
        }
    }
    return std::nullopt;
}

std::optional<int> claim_ordinal(const json& claim, entity_id qualifier) {
    auto quals = claim.find("qualifiers");
    if (quals == claim.end() || !quals->is_object()) {
        return std::nullopt;
    }
    auto list = quals->find(qualifier.str());
    if (list == quals->end() || !list->is_array()) {
        return std::nullopt;
    }
    for (const auto& snak : *list) {
        if (auto text = snak_text(snak)) {
            try {
                std::size_t used = 0;
                int n = std::stoi(*text, &used);
                if (used == text->size() && n > 0) {
                    return n;
                }
            } catch (const std::exception&) {
            }
        }
    }
    return std::nullopt;
}

std::string label_of(const json& entity, std::string_view language) {
    const auto& labels = entity.value("labels", json::object());
    auto it = labels.find(std::string(language));
    if (it != labels.end() && it->contains("value")) {
        return (*it)["value"].get<std::string>();
    }
    return {};
}

struct pending_author {
    std::variant<entity_id, std::string> who;
    std::optional<int> ordinal;
    std::size_t position;
};

struct pending_entry {
    bib_entry entry;
    std::vector<pending_author> authors;
    std::optional<entity_id> venue;
    bool has_title = false;
};

pending_entry read_entity(entity_id id, const json& entity,
                          const property_registry& registry, const type_mapping& types,
                          std::string_view language) {
    pending_entry p;
    p.entry.cite_key = id.str();

    std::vector<entity_id> classes;
    for (const auto& claim : claims_of(entity, registry.at("instance-of"))) {
        if (auto c = snak_entity(claim.value("mainsnak", json::object()))) {
            classes.push_back(*c);
        }
    }
    p.entry.entry_type = types.entry_type(classes);

    auto ordinal_prop = registry.at("series-ordinal");
    std::size_t position = 0;
    for (const auto& claim : claims_of(entity, registry.at("author"))) {
        if (auto who = snak_entity(claim.value("mainsnak", json::object()))) {
            p.authors.push_back({*who, claim_ordinal(claim, ordinal_prop), position++});
        }
    }
    for (const auto& claim : claims_of(entity, registry.at("author-name-string"))) {
        if (auto name = snak_text(claim.value("mainsnak", json::object()))) {
            p.authors.push_back({*name, claim_ordinal(claim, ordinal_prop), position++});
        }
    }
    std::stable_sort(p.authors.begin(), p.authors.end(),
                     [](const pending_author& a, const pending_author& b) {
                         if (a.ordinal && b.ordinal) {
                             return *a.ordinal < *b.ordinal;
                         }
                         return a.ordinal.has_value() && !b.ordinal.has_value();
                     });
    p.venue = first_entity(entity, registry.at("published-in"));

    auto title = first_text(entity, registry.at("title"));
    if (!title) {
        auto label = label_of(entity, language);
        if (!label.empty()) {
            title = label;
        }
    }
    if (title) {
        p.entry.fields.emplace_back("title", *title);
        p.has_title = true;
    }
    return p;
}

void finish_entry(pending_entry& p, const json& entity,
                  const std::map<entity_id, std::string>& labels,
                  const property_registry& registry) {
    std::string authors;
    for (const auto& a : p.authors) {
        std::string name;
        if (const auto* id = std::get_if<entity_id>(&a.who)) {
            auto it = labels.find(*id);
            name = it != labels.end() ? it->second : id->str();
        } else {
            name = std::get<std::string>(a.who);
        }
        if (!authors.empty()) {
            authors += " and ";
        }
        authors += name;
    }
    auto& fields = p.entry.fields;
    if (!authors.empty()) {
        fields.emplace_back("author", authors);
    }
    if (p.venue) {
        if (auto it = labels.find(*p.venue); it != labels.end()) {
            fields.emplace_back("journal", it->second);
        }
    }
    auto put = [&](const char* name, std::string_view role) {
        if (auto text = first_text(entity, registry.at(role))) {
            fields.emplace_back(name, *text);
        }
    };
    put("volume", "volume");
    put("number", "issue");
    put("pages", "pages");
    if (auto date = first_text(entity, registry.at("publication-date"))) {
        if (auto year = year_of(*date)) {
            fields.emplace_back("year", std::to_string(*year));
        }
    }
    put("doi", "doi");
    put("url", "full-text-url");
}

} // namespace

fetch_result fetch_entries(const std::vector<entity_id>& ids, entity_api_client& client,
                           const property_registry& registry, const type_mapping& types,
                           std::string_view language) {
    fetch_result out;
    if (ids.empty()) {
        return out;
    }
    for (const auto& id : ids) {
        if (!id.is_item()) {
            throw precondition_error("bibliography entries need item ids, got " + id.str());
        }
    }
    auto entities = client.fetch_entities(ids, "labels|claims", language);

    std::vector<std::pair<pending_entry, const json*>> pending;
    std::vector<entity_id> referenced;
    for (const auto& id : ids) {
        auto it = entities.find(id.str());
        if (it == entities.end() || !it->is_object() || it->contains("missing")) {
            out.failures.emplace_back(id, "NotFound: no entity " + id.str());
            continue;
        }
        auto p = read_entity(id, *it, registry, types, language);
        for (const auto& a : p.authors) {
            if (const auto* who = std::get_if<entity_id>(&a.who)) {
                referenced.push_back(*who);
            }
        }
        if (p.venue) {
            referenced.push_back(*p.venue);
        }
        pending.emplace_back(std::move(p), &*it);
    }

    std::map<entity_id, std::string> labels;
    if (!referenced.empty()) {
        labels = client.fetch_labels(referenced, language);
    }
    for (auto& [p, entity] : pending) {
        finish_entry(p, *entity, labels, registry);
        out.entries.push_back(std::move(p.entry));
    }
    return out;
}

bib_entry fetch_entry(entity_id id, entity_api_client& client,
                      const property_registry& registry, const type_mapping& types,
                      std::string_view language) {
    auto result = fetch_entries({id}, client, registry, types, language);
    if (result.entries.empty()) {
        throw not_found("no entity " + id.str());
    }
    return std::move(result.entries.front());
}

std::string escape_value(std::string_view value) {
    // unbalanced braces
    std::vector<bool> balanced(value.size(), false);
    std::vector<std::size_t> stack;
    for (std::size_t i = 0; i < value.size(); ++i) {
        if (value[i] == '{') {
            stack.push_back(i);
        } else if (value[i] == '}' && !stack.empty()) {
            balanced[stack.back()] = true;
            balanced[i] = true;
            stack.pop_back();
        }
    }
    std::string out;
    out.reserve(value.size() + 8);
    for (std::size_t i = 0; i < value.size(); ++i) {
        char c = value[i];
        switch (c) {
        case '&':
        case '%':
        case '#':
        case '_':
        case '$':
            out.push_back('\\');
            out.push_back(c);
            break;
        case '\\':
            out += "\\textbackslash{}";
            break;
        case '{':
            out += balanced[i] ? "{" : "\\textbraceleft{}";
            break;
        case '}':
            out += balanced[i] ? "}" : "\\textbraceright{}";
            break;
        case '\r':
        case '\n':
        case '\t':
            out.push_back(' ');
            break;
        default:
            out.push_back(c);
        }
    }
    return out;
}

std::string format_bibtex(const bib_entry& entry) {
    auto key = entity_id::try_parse(entry.cite_key);
    if (!key || !key->is_item()) {
        throw precondition_error("cite key must be an item id, got '" + entry.cite_key + "'");
    }
    std::string out = "@" + entry.entry_type + "{" + entry.cite_key + ",\n";
    for (const auto& [name, value] : entry.fields) {
        out += "  " + name + " = {" + escape_value(value) + "},\n";
    }
    out += "}\n";
    return out;
}

std::filesystem::path default_bib_path(const std::filesystem::path& aux_path) {
    auto out = aux_path;
    out.replace_extension(".bib");
    return out;
}

write_report write_bib_from_aux(const std::filesystem::path& aux_path,
                                std::optional<std::filesystem::path> out_path,
                                entity_api_client& client,
                                const property_registry& registry,
                                const type_mapping& types) {
    std::ifstream in(aux_path, std::ios::binary);
    if (!in) {
        throw io_error("cannot read " + aux_path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    auto cites = parse_aux(buf.str());

    write_report report;
    report.skipped = cites.skipped;
    report.out_path = out_path ? *out_path : default_bib_path(aux_path);

    std::vector<bib_entry> entries;
    try {
        auto fetched = fetch_entries(cites.ids, client, registry, types);
        entries = std::move(fetched.entries);
        for (auto& [id, message] : fetched.failures) {
            report.failures.emplace_back(id.str(), std::move(message));
        }
    } catch (const error&) {
        // retry one key at a time
        entries.clear();
        for (const auto& id : cites.ids) {
            try {
                entries.push_back(fetch_entry(id, client, registry, types));
            } catch (const error& e) {
                report.failures.emplace_back(id.str(), e.kind() + ": " + e.what());
            }
        }
    }

    std::string text;
    for (const auto& e : entries) {
        if (!text.empty()) {
            text += "\n";
        }
        text += format_bibtex(e);
    }
    std::ofstream out(report.out_path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw io_error("cannot write " + report.out_path.string());
    }
    out << text;
    out.flush();
    if (!out) {
        throw io_error("failed writing " + report.out_path.string());
    }
    report.written = entries.size();
    return report;
}

} // namespace scholia::bib
