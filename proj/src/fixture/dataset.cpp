#include "scholia/fixture.hpp"

#include <algorithm>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>

#include "scholia/sparql_client.hpp"

namespace scholia::fixture {

using nlohmann::json;

rdf_term value::to_term() const {
    switch (kind) {
    case type::entity: return rdf_term::make_iri(entity->iri());
    case type::string: return rdf_term::make_literal(text);
    case type::monolingual: return rdf_term::make_literal(text, {}, lang);
    case type::time:
        return rdf_term::make_literal(text + "T00:00:00Z", std::string(xsd_date_time));
    case type::quantity: return rdf_term::make_literal(text, std::string(xsd_decimal));
    case type::url: return rdf_term::make_iri(text);
    }
    return rdf_term::make_literal(text);
}

json value::to_datavalue() const {
    switch (kind) {
    case type::entity:
        return {{"value",
                 {{"entity-type", entity->is_item() ? "item" : "property"},
                  {"numeric-id", entity->number()},
                  {"id", entity->str()}}},
                {"type", "wikibase-entityid"}};
    case type::string:
    case type::url: return {{"value", text}, {"type", "string"}};
    case type::monolingual:
        return {{"value", {{"text", text}, {"language", lang}}}, {"type", "monolingualtext"}};
    case type::time:
        return {{"value",
                 {{"time", "+" + text + "T00:00:00Z"},
                  {"timezone", 0},
                  {"before", 0},
                  {"after", 0},
                  {"precision", 11},
                  {"calendarmodel", "http://www.wikidata.org/entity/Q1985727"}}},
                {"type", "time"}};
    case type::quantity:
        return {{"value", {{"amount", (text.starts_with('-') ? "" : "+") + text}, {"unit", "1"}}},
                {"type", "quantity"}};
    }
    return nullptr;
}

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        auto tab = line.find('\t', start);
        out.push_back(line.substr(start, tab - start));
        if (tab == std::string::npos) {
            break;
        }
        start = tab + 1;
    }
    return out;
}

std::vector<std::pair<std::size_t, std::vector<std::string>>>
read_tsv(const std::filesystem::path& path, bool required) {
    std::vector<std::pair<std::size_t, std::vector<std::string>>> rows;
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        if (required) {
            throw io_error("cannot read " + path.string());
        }
        return rows;
    }
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        ++n;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty() || line.front() == '#') {
            continue;
        }
        rows.emplace_back(n, split_tabs(line));
    }
    return rows;
}

bool is_date(const std::string& s) {
    static const std::regex date(R"(-?[0-9]{4}-[0-9]{2}-[0-9]{2})");
    return std::regex_match(s, date);
}

value parse_json_value(const json& j, bool strings_may_be_ids, const std::string& where) {
    auto fail = [&](const std::string& why) {
        return parse_error(why, 0, where);
    };
    if (j.is_string()) {
        auto s = j.get<std::string>();
        if (strings_may_be_ids) {
            if (auto id = entity_id::try_parse(s)) {
                return value::of_entity(*id);
            }
        }
        return value::of_string(std::move(s));
    }
    if (j.is_number_integer()) {
        return value::of_string(j.dump());
    }
    if (!j.is_object()) {
        throw fail("unsupported value " + j.dump());
    }
    value v;
    if (j.contains("text")) {
        v.kind = value::type::monolingual;
        v.text = j.at("text").get<std::string>();
        v.lang = j.value("lang", "en");
    } else if (j.contains("time")) {
        v.kind = value::type::time;
        v.text = j.at("time").get<std::string>();
        if (!is_date(v.text)) {
            throw fail("time must be YYYY-MM-DD: " + v.text);
        }
    } else if (j.contains("amount")) {
        v.kind = value::type::quantity;
        const auto& a = j.at("amount");
        v.text = a.is_string() ? a.get<std::string>() : a.dump();
    } else if (j.contains("url")) {
        v.kind = value::type::url;
        v.text = j.at("url").get<std::string>();
    } else if (j.contains("string")) {
        v.kind = value::type::string;
        v.text = j.at("string").get<std::string>();
    } else if (j.contains("id")) {
        v = value::of_entity(parse_entity_id(j.at("id").get<std::string>()));
    } else {
        throw fail("unsupported value " + j.dump());
    }
    return v;
}

std::vector<snak> parse_snaks(const json& j, const std::string& where) {
    if (!j.is_object()) {
        throw parse_error("expected a JSON object of property -> value(s)", 0, where);
    }
    std::vector<snak> out;
    for (const auto& [prop_text, vals] : j.items()) {
        auto prop = entity_id::try_parse(prop_text);
        if (!prop || !prop->is_property()) {
            throw parse_error("bad property '" + prop_text + "'", 0, where);
        }
        if (vals.is_array()) {
            for (const auto& v : vals) {
                out.emplace_back(*prop, parse_json_value(v, true, where));
            }
        } else {
            out.emplace_back(*prop, parse_json_value(vals, true, where));
        }
    }
    return out;
}

json parse_json_column(const std::string& text, const std::string& where) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw parse_error(e.what(), 0, where);
    }
}

} // namespace

dataset dataset::load(const std::filesystem::path& dir) {
    dataset d;
    auto triples_path = dir / "triples.tsv";
    for (auto& [line, cols] : read_tsv(triples_path, true)) {
        auto where = triples_path.filename().string() + ":" + std::to_string(line);
        if (cols.size() < 3) {
            throw parse_error("expected at least 3 columns", 0, where);
        }
        statement st{parse_entity_id(cols[0]), parse_entity_id(cols[1]), {}, {}, {}, line};
        if (!st.property.is_property()) {
            throw parse_error("second column must be a property", 0, where);
        }
        if (auto id = entity_id::try_parse(cols[2])) {
            st.object = value::of_entity(*id);
        } else {
            st.object = parse_json_value(parse_json_column(cols[2], where), false, where);
        }
        if (cols.size() > 3 && !cols[3].empty() && cols[3] != "-") {
            st.qualifiers = parse_snaks(parse_json_column(cols[3], where), where);
        }
        if (cols.size() > 4 && !cols[4].empty() && cols[4] != "-") {
            auto refs = parse_json_column(cols[4], where);
            if (!refs.is_array()) {
                throw parse_error("references must be a JSON array", 0, where);
            }
            for (const auto& r : refs) {
                st.references.push_back(parse_snaks(r, where));
            }
        }
        d.statements.push_back(std::move(st));
    }

    for (auto& [line, cols] : read_tsv(dir / "labels.tsv", true)) {
        if (cols.size() < 3) {
            throw parse_error("expected id, lang, label", 0,
                              "labels.tsv:" + std::to_string(line));
        }
        d.labels[{parse_entity_id(cols[0]), cols[1]}]
            = {cols[2], cols.size() > 3 ? cols[3] : std::string{}};
    }

    for (auto& [line, cols] : read_tsv(dir / "sitelinks.tsv", false)) {
        if (cols.size() < 3) {
            throw parse_error("expected id, site, title", 0,
                              "sitelinks.tsv:" + std::to_string(line));
        }
        d.sitelinks[parse_entity_id(cols[0])].push_back(
            {cols[1], cols[2], cols.size() > 3 ? cols[3] : std::string{}});
    }

    for (auto& [line, cols] : read_tsv(dir / "designated.tsv", false)) {
        d.designated.push_back(std::move(cols));
    }

    auto canned_path = dir / "canned.json";
    if (std::ifstream in{canned_path, std::ios::binary}) {
        std::ostringstream buf;
        buf << in.rdbuf();
        d.canned = canned_from_json(parse_json_column(buf.str(), "canned.json"));
    }
    d.rebuild_index();
    return d;
}

void dataset::rebuild_index() {
    by_subject_.clear();
    for (std::size_t i = 0; i < statements.size(); ++i) {
        by_subject_.emplace(statements[i].subject, i);
    }
}

std::vector<entity_id> dataset::items() const {
    std::set<entity_id> ids;
    for (const auto& st : statements) {
        ids.insert(st.subject);
    }
    for (const auto& [key, _] : labels) {
        ids.insert(key.first);
    }
    return {ids.begin(), ids.end()};
}

std::vector<const statement*> dataset::about(entity_id subject) const {
    std::vector<const statement*> out;
    auto [lo, hi] = by_subject_.equal_range(subject);
    for (auto it = lo; it != hi; ++it) {
        out.push_back(&statements[it->second]);
    }
    return out;
}

std::vector<const statement*> dataset::about(entity_id subject, entity_id property) const {
    std::vector<const statement*> out;
    auto [lo, hi] = by_subject_.equal_range(subject);
    for (auto it = lo; it != hi; ++it) {
        if (statements[it->second].property == property) {
            out.push_back(&statements[it->second]);
        }
    }
    return out;
}

std::vector<const statement*> dataset::with_property(entity_id property) const {
    std::vector<const statement*> out;
    for (const auto& st : statements) {
        if (st.property == property) {
            out.push_back(&st);
        }
    }
    return out;
}

std::optional<std::string> dataset::label(entity_id id, std::string_view lang) const {
    auto it = labels.find({id, std::string(lang)});
    if (it == labels.end()) {
        return std::nullopt;
    }
    return it->second.label;
}

void dataset::validate() const {
    std::set<entity_id> known;
    auto note = [&](const value& v) {
        if (v.entity) {
            known.insert(*v.entity);
        }
    };
    for (const auto& st : statements) {
        known.insert(st.subject);
        known.insert(st.property);
        note(st.object);
        for (const auto& [p, v] : st.qualifiers) {
            known.insert(p);
            note(v);
        }
        for (const auto& ref : st.references) {
            for (const auto& [p, v] : ref) {
                known.insert(p);
                note(v);
            }
        }
    }
    for (const auto& [key, _] : labels) {
        known.insert(key.first);
    }
    for (const auto& [hash, q] : canned) {
        for (const auto& row : q.results.rows) {
            for (const auto& [var, term] : row) {
                if (!term.is_iri() || !term.value.starts_with(entity_iri_prefix)) {
                    continue;
                }
                auto id = entity_id::from_iri(term.value);
                if (!id || !known.contains(*id)) {
                    throw precondition_error("canned result for " + hash.substr(0, 12)
                                             + " mentions unknown entity " + term.value);
                }
            }
        }
    }

    property_registry reg;
    std::set<entity_id> works, authors, venues, orgs;
    for (const auto& st : statements) {
        if (st.property == reg.at("author") || st.property == reg.at("author-name-string")) {
            works.insert(st.subject);
        }
        if (st.property == reg.at("author") && st.object.entity) {
            authors.insert(*st.object.entity);
        }
        if (st.property == reg.at("published-in") && st.object.entity) {
            venues.insert(*st.object.entity);
        }
        if ((st.property == reg.at("employer") || st.property == reg.at("affiliation"))
            && st.object.entity) {
            orgs.insert(*st.object.entity);
        }
    }
    if (works.size() > 100 || authors.size() > 30 || venues.size() > 10 || orgs.size() > 10) {
        throw precondition_error("fixture exceeds desk scale");
    }
}

// -- canned serialization ---------------------------------------------------

json canned_to_json(const std::vector<canned_query>& canned) {
    json list = json::array();
    for (const auto& q : canned) {
        list.push_back({{"hash", q.hash},
                        {"query", q.normalized},
                        {"results", json::parse(serialize_results(q.results))}});
    }
    return {{"version", 1}, {"queries", std::move(list)}};
}

std::map<std::string, canned_query> canned_from_json(const json& doc) {
    std::map<std::string, canned_query> out;
    if (!doc.is_object() || !doc.contains("queries") || !doc["queries"].is_array()) {
        throw parse_error("canned file needs a 'queries' array", 0, "canned.json");
    }
    std::size_t i = 0;
    for (const auto& q : doc["queries"]) {
        auto where = "canned.json/queries/" + std::to_string(i++);
        if (!q.is_object() || !q.contains("query") || !q.contains("results")) {
            throw parse_error("entry needs 'query' and 'results'", 0, where);
        }
        canned_query c;
        c.normalized = normalize_whitespace(q["query"].get<std::string>());
        c.hash = to_hex(sha256(c.normalized));
        if (q.contains("hash") && q["hash"].get<std::string>() != c.hash) {
            throw parse_error("stored hash does not match the query text", 0, where);
        }
        c.results = parse_results(q["results"].dump());
        out.emplace(c.hash, std::move(c));
    }
    return out;
}

std::vector<std::string> diff_canned(const std::map<std::string, canned_query>& expected,
                                     const std::map<std::string, canned_query>& actual) {
    std::vector<std::string> out;
    for (const auto& [hash, q] : expected) {
        auto it = actual.find(hash);
        if (it == actual.end()) {
            out.push_back("missing: " + q.normalized.substr(0, 100));
        } else if (!(it->second.results == q.results)) {
            out.push_back("results differ: " + q.normalized.substr(0, 100));
        }
    }
    for (const auto& [hash, q] : actual) {
        if (!expected.contains(hash)) {
            out.push_back("unexpected: " + q.normalized.substr(0, 100));
        }
    }
    return out;
}

} // namespace scholia::fixture
