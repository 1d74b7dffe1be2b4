#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "scholia/model.hpp"

namespace scholia::stats {

enum class author_role { first, middle, last, solo, unknown };

std::string_view to_string(author_role role);

/// Solo iff author_count == 1; otherwise First/Last/Middle from the ordinal,
/// Unknown when the ordinal is absent. Throws ordinal_out_of_range if
/// ordinal > author_count and precondition_error if author_count < 1.
author_role classify_role(std::optional<int> ordinal, int author_count);

using year_role_histogram = std::map<std::pair<int, author_role>, long>;

/// One count per record that lists `subject` as an author and has a year.
/// An ordinal beyond the author count is bucketed as Unknown.
year_role_histogram papers_per_year_by_role(const std::vector<work_record>& records,
                                            entity_id subject);

using year_author_mass = std::map<std::pair<int, entity_id>, double>;

struct page_production {
    year_author_mass pages;
    /// Records lacking a page count (they contribute 0).
    long missing_pages = 0;
};

/// Each record with p pages and n authors adds p/n to (year, a) for every
/// listed author a in `subject_authors`. Undated records are skipped.
page_production normalized_page_production(const std::vector<work_record>& records,
                                           const std::set<entity_id>& subject_authors);

struct citation_row {
    entity_id citing_work;
    entity_id cited_work;
    int year;              // publication year of the citing work
    int cited_author_count;
    entity_id cited_author;
};

/// Each (citing, cited, author) event adds 1/author_count(cited) to
/// (year, author). Throws zero_author_count on a non-positive count.
year_author_mass coauthor_normalized_citations(const std::vector<citation_row>& rows);

struct venue_counts {
    entity_id venue;
    std::string label;
    long works = 0;
    long citations = 0;
};

struct scatter_point {
    long x = 0;
    long y = 0;
    entity_id venue;
    std::string label;

    bool operator==(const scatter_point&) const = default;
};

/// One point per venue, works descending, ties by venue id ascending.
std::vector<scatter_point> publisher_scatter(const std::vector<venue_counts>& venues);

// -- result rows -> stats inputs --------------------------------------------

/// Rows of author/works-raw (one per authorship of the subject).
std::vector<work_record> records_from_author_rows(const result_set& rows,
                                                  entity_id subject);

/// Rows of organization/page-production-raw (one per work x affiliated author).
std::vector<work_record> records_from_page_rows(const result_set& rows);

std::vector<citation_row> citation_rows_from(const result_set& rows);

std::vector<venue_counts> venue_counts_from(const result_set& rows);

} // namespace scholia::stats
