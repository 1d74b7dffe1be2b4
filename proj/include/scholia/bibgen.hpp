#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "scholia/entity_api.hpp"
#include "scholia/model.hpp"

namespace scholia::bib {

struct bib_entry {
    std::string entry_type = "misc"; // article | book | misc
    std::string cite_key;
    /// Insertion-ordered name -> value, unescaped UTF-8.
    std::vector<std::pair<std::string, std::string>> fields;

    const std::string* field(std::string_view name) const;
    bool operator==(const bib_entry&) const = default;
};

struct aux_citations {
    std::vector<entity_id> ids;
    std::vector<std::string> skipped;

    bool operator==(const aux_citations&) const = default;
};

/// Collects \citation{a,b,...} keys. Item ids keep first-occurrence order
/// without duplicates; every other key (or a broken \citation line) lands in
/// `skipped`.
aux_citations parse_aux(std::string_view content);

struct type_mapping {
    std::map<entity_id, std::string> by_class = {
        {item(13442814), "article"},
        {item(571), "book"},
    };

    std::string entry_type(const std::vector<entity_id>& classes) const;
};

/// One wbgetentities round trip for all ids plus one for referenced labels.
/// Missing entities are reported through `failures` instead of throwing.
struct fetch_result {
    std::vector<bib_entry> entries; // same order as the resolvable input ids
    std::vector<std::pair<entity_id, std::string>> failures;
};

fetch_result fetch_entries(const std::vector<entity_id>& ids, entity_api_client& client,
                           const property_registry& registry = {},
                           const type_mapping& types = {},
                           std::string_view language = "en");

/// Throws not_found for a missing entity.
bib_entry fetch_entry(entity_id id, entity_api_client& client,
                      const property_registry& registry = {},
                      const type_mapping& types = {}, std::string_view language = "en");

/// BibTeX-safe form of a field value.
std::string escape_value(std::string_view value);

std::string format_bibtex(const bib_entry& entry);

struct write_report {
    std::size_t written = 0;
    std::vector<std::string> skipped;
    std::vector<std::pair<std::string, std::string>> failures; // key, message
    std::filesystem::path out_path;
};

/// "paper.aux" -> "paper.bib".
std::filesystem::path default_bib_path(const std::filesystem::path& aux_path);

/// Throws io_error when the aux file is unreadable or the output unwritable.
write_report write_bib_from_aux(const std::filesystem::path& aux_path,
                                std::optional<std::filesystem::path> out_path,
                                entity_api_client& client,
                                const property_registry& registry = {},
                                const type_mapping& types = {});

} // namespace scholia::bib
