#include "scholia/stats.hpp"

#include <algorithm>
#include <charconv>

namespace scholia::stats {

std::string_view to_string(author_role role) {
    switch (role) {
    case author_role::first: return "first";
    case author_role::middle: return "middle";
    case author_role::last: return "last";
    case author_role::solo: return "solo";
    case author_role::unknown: return "unknown";
    }
    return "unknown";
}

author_role classify_role(std::optional<int> ordinal, int author_count) {
    if (author_count < 1) {
        throw precondition_error("author count must be positive");
    }
    if (ordinal) {
        if (*ordinal < 1) {
            throw precondition_error("ordinal must be positive");
        }
        if (*ordinal > author_count) {
            throw ordinal_out_of_range(*ordinal, author_count);
        }
    }
    if (author_count == 1) {
        return author_role::solo;
    }
    if (!ordinal) {
        return author_role::unknown;
    }
    if (*ordinal == 1) {
        return author_role::first;
    }
    if (*ordinal == author_count) {
        return author_role::last;
    }
    return author_role::middle;
}

year_role_histogram papers_per_year_by_role(const std::vector<work_record>& records,
                                            entity_id subject) {
    year_role_histogram out;
    for (const auto& record : records) {
        if (!record.publication_year) {
            continue;
        }
        auto slot = std::find_if(record.authors.begin(), record.authors.end(),
                                 [&](const author_slot& s) {
                                     const auto* id = s.item();
                                     return id && *id == subject;
                                 });
        if (slot == record.authors.end()) {
            continue;
        }
        auto count = std::max(record.author_count(), 1);
        author_role role;
        try {
            role = classify_role(slot->ordinal, count);
        } catch (const ordinal_out_of_range&) {
            role = author_role::unknown;
        }
        ++out[{*record.publication_year, role}];
    }
    return out;
}

page_production normalized_page_production(const std::vector<work_record>& records,
                                           const std::set<entity_id>& subject_authors) {
    page_production out;
    for (const auto& record : records) {
        if (!record.pages) {
            ++out.missing_pages;
            continue;
        }
        if (!record.publication_year) {
            continue;
        }
        auto n = record.author_count();
        if (n < 1) {
            continue;
        }
        double share = static_cast<double>(*record.pages) / n;
        for (const auto& slot : record.authors) {
            const auto* id = slot.item();
            if (id && subject_authors.contains(*id)) {
                out.pages[{*record.publication_year, *id}] += share;
            }
        }
    }
    return out;
}

year_author_mass coauthor_normalized_citations(const std::vector<citation_row>& rows) {
    year_author_mass out;
    for (const auto& row : rows) {
        if (row.cited_author_count < 1) {
            throw zero_author_count();
        }
        out[{row.year, row.cited_author}] += 1.0 / row.cited_author_count;
    }
    return out;
}

std::vector<scatter_point> publisher_scatter(const std::vector<venue_counts>& venues) {
    std::vector<scatter_point> out;
    out.reserve(venues.size());
    for (const auto& v : venues) {
        if (v.works < 0 || v.citations < 0) {
            throw precondition_error("negative count for venue " + v.venue.str());
        }
        out.push_back({v.works, v.citations, v.venue, v.label});
    }
    std::sort(out.begin(), out.end(), [](const scatter_point& a, const scatter_point& b) {
        if (a.x != b.x) {
            return a.x > b.x;
        }
        return a.venue < b.venue;
    });
    return out;
}

// -- rows -------------------------------------------------------------------

namespace {

std::optional<entity_id> entity_of(const result_row& row, std::string_view var) {
    const auto* t = find(row, var);
    return t ? t->as_entity() : std::nullopt;
}

std::optional<int> int_of(const result_row& row, std::string_view var) {
    const auto* t = find(row, var);
    if (!t) {
        return std::nullopt;
    }
    if (auto v = t->as_integer()) {
        return static_cast<int>(*v);
    }
    if (auto d = t->as_number()) {
        return static_cast<int>(*d);
    }
    return std::nullopt;
}

std::optional<int> year_var(const result_row& row, std::string_view var) {
    const auto* t = find(row, var);
    return t ? year_of(t->value) : std::nullopt;
}

std::string text_of(const result_row& row, std::string_view var) {
    const auto* t = find(row, var);
    return t ? t->value : std::string{};
}

} // namespace

std::vector<work_record> records_from_author_rows(const result_set& rows,
                                                  entity_id subject) {
    std::vector<work_record> out;
    std::map<entity_id, std::size_t> index;
    for (const auto& row : rows.rows) {
        auto work = entity_of(row, "work");
        if (!work) {
            continue;
        }
        auto ordinal = int_of(row, "ordinal");
        if (ordinal && *ordinal < 1) {
            ordinal.reset();
        }
        auto [it, fresh] = index.emplace(*work, out.size());
        if (!fresh) {
            // Repeated subject statements on one work: keep the lowest ordinal.
            auto& slot = out[it->second].authors.front();
            if (ordinal && (!slot.ordinal || *ordinal < *slot.ordinal)) {
                slot.ordinal = ordinal;
            }
            continue;
        }
        work_record record{.work = *work};
        record.title = text_of(row, "workLabel");
        record.authors.push_back({subject, ordinal});
        record.publication_year = year_var(row, "date");
        record.pages = int_of(row, "pages");
        if (record.pages && *record.pages < 1) {
            record.pages.reset();
        }
        record.declared_author_count = int_of(row, "authorCount");
        out.push_back(std::move(record));
    }
    return out;
}

std::vector<work_record> records_from_page_rows(const result_set& rows) {
    std::vector<work_record> out;
    std::map<entity_id, std::size_t> index;
    for (const auto& row : rows.rows) {
        auto work = entity_of(row, "work");
        auto author = entity_of(row, "author");
        if (!work || !author) {
            continue;
        }
        auto [it, fresh] = index.emplace(*work, out.size());
        if (fresh) {
            work_record record{.work = *work};
            record.publication_year = year_var(row, "date");
            record.pages = int_of(row, "pages");
            if (record.pages && *record.pages < 1) {
                record.pages.reset();
            }
            record.declared_author_count = int_of(row, "authorCount");
            out.push_back(std::move(record));
        }
        auto& record = out[it->second];
        bool listed = std::any_of(record.authors.begin(), record.authors.end(),
                                  [&](const author_slot& s) {
                                      return s.item() && *s.item() == *author;
                                  });
        if (!listed) {
            record.authors.push_back({*author, std::nullopt});
        }
    }
    return out;
}

std::vector<citation_row> citation_rows_from(const result_set& rows) {
    std::vector<citation_row> out;
    for (const auto& row : rows.rows) {
        auto citing = entity_of(row, "citing");
        auto cited = entity_of(row, "work");
        auto author = entity_of(row, "author");
        auto year = int_of(row, "year");
        auto count = int_of(row, "authorCount");
        if (!citing || !cited || !author || !year || !count) {
            continue;
        }
        out.push_back({*citing, *cited, *year, *count, *author});
    }
    return out;
}

std::vector<venue_counts> venue_counts_from(const result_set& rows) {
    std::vector<venue_counts> out;
    for (const auto& row : rows.rows) {
        auto venue = entity_of(row, "venue");
        if (!venue) {
            continue;
        }
        out.push_back({*venue, text_of(row, "venueLabel"), int_of(row, "works").value_or(0),
                       int_of(row, "citations").value_or(0)});
    }
    return out;
}

} // namespace scholia::stats
