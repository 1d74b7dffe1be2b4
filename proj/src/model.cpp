#include "scholia/model.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <set>

namespace scholia {

entity_id::entity_id(entity_kind kind, std::uint64_t number)
    : kind_(kind), number_(number) {
    if (number == 0) {
        throw malformed_id(std::string(kind == entity_kind::item ? "Q" : "P")
                           + "0");
    }
}

std::optional<entity_id> entity_id::try_parse(std::string_view text) noexcept {
    if (text.size() < 2 || text.size() > 21) {
        return std::nullopt;
    }
    entity_kind kind;
    if (text[0] == 'Q') {
        kind = entity_kind::item;
    } else if (text[0] == 'P') {
        kind = entity_kind::property;
    } else {
        return std::nullopt;
    }
    if (text[1] < '1' || text[1] > '9') {
        return std::nullopt;
    }
    std::uint64_t number = 0;
    auto digits = text.substr(1);
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(),
                                     number);
    if (ec != std::errc() || ptr != digits.data() + digits.size()) {
        return std::nullopt;
    }
    return entity_id(kind, number);
}

entity_id entity_id::parse(std::string_view text) {
    if (auto id = try_parse(text)) {
        return *id;
    }
    throw malformed_id(std::string(text));
}

std::optional<entity_id> entity_id::from_iri(std::string_view iri) noexcept {
    if (iri.starts_with(entity_iri_prefix)) {
        iri.remove_prefix(entity_iri_prefix.size());
    }
    return try_parse(iri);
}

std::string entity_id::str() const {
    return (kind_ == entity_kind::item ? "Q" : "P") + std::to_string(number_);
}

std::string entity_id::iri() const {
    return std::string(entity_iri_prefix) + str();
}

entity_id parse_entity_id(std::string_view text) {
    return entity_id::parse(text);
}

entity_id item(std::uint64_t number) { return {entity_kind::item, number}; }
entity_id property(std::uint64_t number) {
    return {entity_kind::property, number};
}

// -- property registry ------------------------------------------------------

namespace {

struct role_default {
    std::string_view role;
    std::uint64_t number;
};

constexpr std::array role_defaults = {
    role_default{"author", 50},
    role_default{"author-name-string", 2093},
    role_default{"published-in", 1433},
    role_default{"publisher", 123},
    role_default{"series", 179},
    role_default{"main-theme", 921},
    role_default{"educated-at", 69},
    role_default{"employer", 108},
    role_default{"affiliation", 1416},
    role_default{"part-of", 361},
    role_default{"sponsor", 859},
    role_default{"cites", 2860},
    role_default{"instance-of", 31},
    role_default{"subclass-of", 279},
    role_default{"publication-date", 577},
    role_default{"number-of-pages", 1104},
    role_default{"series-ordinal", 1545},
    role_default{"external-data-url", 1325},
    role_default{"stated-in", 248},
    role_default{"doi", 356},
    role_default{"orcid", 496},
    role_default{"twitter", 2002},
    role_default{"github", 2037},
    role_default{"title", 1476},
    role_default{"volume", 478},
    role_default{"pages", 304},
    role_default{"issue", 433},
    role_default{"full-text-url", 953},
    role_default{"start-time", 580},
    role_default{"end-time", 582},
    role_default{"image", 18},
    role_default{"coordinate-location", 625},
    role_default{"editor", 98},
    role_default{"doctoral-advisor", 184},
};

constexpr auto role_names = [] {
    std::array<std::string_view, role_defaults.size()> names{};
    for (std::size_t i = 0; i < role_defaults.size(); ++i) {
        names[i] = role_defaults[i].role;
    }
    return names;
}();

} // namespace

property_registry::property_registry() {
    for (const auto& d : role_defaults) {
        entries_.emplace(std::string(d.role), property(d.number));
    }
}

entity_id property_registry::at(std::string_view role) const {
    auto it = entries_.find(role);
    if (it == entries_.end()) {
        throw precondition_error("unknown property role '" + std::string(role)
                                 + "'");
    }
    return it->second;
}

void property_registry::set(std::string_view role, entity_id id) {
    auto it = entries_.find(role);
    if (it == entries_.end()) {
        throw precondition_error("unknown property role '" + std::string(role)
                                 + "'");
    }
    if (!id.is_property()) {
        throw precondition_error("role '" + std::string(role)
                                 + "' needs a property id, got " + id.str());
    }
    it->second = id;
}

std::span<const std::string_view> property_registry::roles() {
    return role_names;
}

// -- aspects ----------------------------------------------------------------

namespace {

constexpr std::array aspect_values = {
    aspect::author, aspect::work,      aspect::organization, aspect::venue,
    aspect::series, aspect::publisher, aspect::sponsor,      aspect::topic,
};

} // namespace

std::span<const aspect> all_aspects() { return aspect_values; }

std::string_view to_segment(aspect a) {
    switch (a) {
    case aspect::author: return "author";
    case aspect::work: return "work";
    case aspect::organization: return "organization";
    case aspect::venue: return "venue";
    case aspect::series: return "series";
    case aspect::publisher: return "publisher";
    case aspect::sponsor: return "sponsor";
    case aspect::topic: return "topic";
    }
    return "topic";
}

std::optional<aspect> aspect_from_segment(std::string_view segment) noexcept {
    for (auto a : aspect_values) {
        if (to_segment(a) == segment) {
            return a;
        }
    }
    return std::nullopt;
}

// -- work records -----------------------------------------------------------

void validate(const work_record& record) {
    std::set<int> seen;
    for (const auto& slot : record.authors) {
        if (!slot.ordinal) {
            continue;
        }
        if (*slot.ordinal < 1) {
            throw precondition_error("ordinal must be positive in "
                                     + record.work.str());
        }
        if (!seen.insert(*slot.ordinal).second) {
            throw precondition_error("duplicate ordinal "
                                     + std::to_string(*slot.ordinal) + " in "
                                     + record.work.str());
        }
    }
    if (record.pages && *record.pages < 1) {
        throw precondition_error("pages must be >= 1 in " + record.work.str());
    }
}

std::optional<int> year_of(std::string_view date) {
    bool negative = false;
    if (!date.empty() && (date[0] == '+' || date[0] == '-')) {
        negative = date[0] == '-';
        date.remove_prefix(1);
    }
    auto dash = date.find('-');
    auto digits = date.substr(0, dash);
    if (digits.empty()) {
        return std::nullopt;
    }
    int year = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(),
                                     year);
    if (ec != std::errc() || ptr != digits.data() + digits.size()) {
        return std::nullopt;
    }
    return negative ? -year : year;
}

// -- rdf terms --------------------------------------------------------------

std::optional<entity_id> rdf_term::as_entity() const noexcept {
    if (kind != type::iri || !value.starts_with(entity_iri_prefix)) {
        return std::nullopt;
    }
    return entity_id::from_iri(value);
}

std::optional<std::int64_t> rdf_term::as_integer() const noexcept {
    if (kind != type::literal) {
        return std::nullopt;
    }
    std::string_view v = value;
    if (!v.empty() && v[0] == '+') {
        v.remove_prefix(1);
    }
    std::int64_t out = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size()) {
        return std::nullopt;
    }
    return out;
}

std::optional<double> rdf_term::as_number() const noexcept {
    if (kind != type::literal) {
        return std::nullopt;
    }
    std::string_view v = value;
    if (!v.empty() && v[0] == '+') {
        v.remove_prefix(1);
    }
    double out = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size()) {
        return std::nullopt;
    }
    return out;
}

const rdf_term* find(const result_row& row, std::string_view var) {
    auto it = row.find(var);
    return it == row.end() ? nullptr : &it->second;
}

} // namespace scholia
