#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "scholia/errors.hpp"

namespace scholia {

enum class entity_kind { item, property };

/// A validated Wikibase identifier such as Q8219 or P2860.
class entity_id {
public:
    entity_id(entity_kind kind, std::uint64_t number);

    /// Accepts exactly ^[QP][1-9][0-9]*$; throws malformed_id otherwise.
    static entity_id parse(std::string_view text);
    static std::optional<entity_id> try_parse(std::string_view text) noexcept;

    /// Accepts a concept IRI (http://www.wikidata.org/entity/Q42) or a bare id.
    static std::optional<entity_id> from_iri(std::string_view iri) noexcept;

    entity_kind kind() const noexcept { return kind_; }
    std::uint64_t number() const noexcept { return number_; }
    bool is_item() const noexcept { return kind_ == entity_kind::item; }
    bool is_property() const noexcept { return kind_ == entity_kind::property; }

    std::string str() const;
    std::string iri() const;

    auto operator<=>(const entity_id&) const = default;

private:
    entity_kind kind_;
    std::uint64_t number_;
};

inline constexpr std::string_view entity_iri_prefix
    = "http://www.wikidata.org/entity/";

entity_id parse_entity_id(std::string_view text);

entity_id item(std::uint64_t number);
entity_id property(std::uint64_t number);

/// Role name -> property id. Every role in `roles()` is always present.
class property_registry {
public:
    /// Public Wikidata defaults.
    property_registry();

    entity_id at(std::string_view role) const;
    void set(std::string_view role, entity_id id);

    std::string wdt(std::string_view role) const { return "wdt:" + at(role).str(); }
    std::string p(std::string_view role) const { return "p:" + at(role).str(); }
    std::string ps(std::string_view role) const { return "ps:" + at(role).str(); }
    std::string pq(std::string_view role) const { return "pq:" + at(role).str(); }

    static std::span<const std::string_view> roles();

    const std::map<std::string, entity_id, std::less<>>& entries() const {
        return entries_;
    }

private:
    std::map<std::string, entity_id, std::less<>> entries_;
};

enum class aspect {
    author,
    work,
    organization,
    venue,
    series,
    publisher,
    sponsor,
    topic,
};

std::span<const aspect> all_aspects();
std::string_view to_segment(aspect a);
std::optional<aspect> aspect_from_segment(std::string_view segment) noexcept;

/// One author slot of a work: a resolved item or a bare name string.
struct author_slot {
    std::variant<entity_id, std::string> author;
    std::optional<int> ordinal;

    const entity_id* item() const { return std::get_if<entity_id>(&author); }
};

struct work_record {
    entity_id work;
    std::string title;
    std::vector<author_slot> authors;
    std::optional<entity_id> venue;
    std::optional<int> publication_year;
    std::optional<int> pages;
    std::vector<entity_id> cited_works;
    std::vector<entity_id> instance_of;
    /// Total number of authors when `authors` lists only a subset
    /// (raw panel rows carry just the subject's own slot).
    std::optional<int> declared_author_count;

    int author_count() const {
        return declared_author_count ? *declared_author_count
                                     : static_cast<int>(authors.size());
    }
};

/// Throws precondition_error if ordinals repeat or pages < 1.
void validate(const work_record& record);

/// Year component of an xsd:dateTime / ISO-8601 date ("+2009-06-29T00:00:00Z").
std::optional<int> year_of(std::string_view date);

// -- SPARQL results ---------------------------------------------------------

inline constexpr std::string_view xsd_integer
    = "http://www.w3.org/2001/XMLSchema#integer";
inline constexpr std::string_view xsd_decimal
    = "http://www.w3.org/2001/XMLSchema#decimal";
inline constexpr std::string_view xsd_date_time
    = "http://www.w3.org/2001/XMLSchema#dateTime";

struct rdf_term {
    enum class type { iri, literal, bnode };

    type kind = type::literal;
    std::string value;
    std::string datatype;
    std::string lang;

    static rdf_term make_iri(std::string v) { return {type::iri, std::move(v), {}, {}}; }
    static rdf_term make_literal(std::string v, std::string datatype = {},
                                 std::string lang = {}) {
        return {type::literal, std::move(v), std::move(datatype), std::move(lang)};
    }

    bool is_iri() const noexcept { return kind == type::iri; }
    bool is_literal() const noexcept { return kind == type::literal; }

    std::optional<entity_id> as_entity() const noexcept;
    std::optional<std::int64_t> as_integer() const noexcept;
    std::optional<double> as_number() const noexcept;

    bool operator==(const rdf_term&) const = default;
};

using result_row = std::map<std::string, rdf_term, std::less<>>;

struct result_set {
    std::vector<std::string> variables;
    std::vector<result_row> rows;

    bool operator==(const result_set&) const = default;
};

const rdf_term* find(const result_row& row, std::string_view var);

} // namespace scholia
