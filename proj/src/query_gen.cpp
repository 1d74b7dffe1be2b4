#include "scholia/query_gen.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <regex>

namespace scholia {

std::string_view to_string(panel_kind kind) {
    switch (kind) {
    case panel_kind::table: return "table";
    case panel_kind::year_role_bars: return "year-role-bars";
    case panel_kind::year_author_bars: return "year-author-bars";
    case panel_kind::scatter: return "scatter";
    case panel_kind::graph: return "graph";
    }
    return "table";
}

namespace {

// Placeholders: {S} subject id, {LANG}, {LIMIT}, {LABELS} label service,
// {AFF} affiliation path ending in part-of closure, any other {role} is a
// property id from the registry.
constexpr std::string_view labels_block
    = "SERVICE wikibase:label {\n    bd:serviceParam wikibase:language \"{LANG}\" }";
constexpr std::string_view affiliation_path
    = "(wdt:{employer}|wdt:{affiliation})/wdt:{part-of}*";

struct template_args {
    std::string subject;
    std::string language = "en";
    int limit = 500;
};

std::string expand(std::string_view tmpl, const template_args& args,
                   const property_registry& registry) {
    std::string out;
    out.reserve(tmpl.size() + 64);
    for (std::size_t i = 0; i < tmpl.size(); ++i) {
        char c = tmpl[i];
        if (c != '{') {
            out.push_back(c);
            continue;
        }
        auto close = tmpl.find('}', i + 1);
        auto name = close == std::string_view::npos
                      ? std::string_view{}
                      : tmpl.substr(i + 1, close - i - 1);
        bool placeholder = !name.empty()
                        && std::all_of(name.begin(), name.end(), [](char ch) {
                               return std::isalpha(static_cast<unsigned char>(ch))
                                   || ch == '-';
                           });
        if (!placeholder) {
            out.push_back(c);
            continue;
        }
        if (name == "S") {
            out += args.subject;
        } else if (name == "LANG") {
            out += args.language;
        } else if (name == "LIMIT") {
            out += std::to_string(args.limit);
        } else if (name == "LABELS") {
            out += expand(labels_block, args, registry);
        } else if (name == "AFF") {
            out += expand(affiliation_path, args, registry);
        } else {
            out += registry.at(name).str();
        }
        i = close;
    }
    return out;
}

void check_language(std::string_view language) {
    static const std::regex tag("[a-z]{2,3}(-[a-z0-9]{1,8})*");
    if (!std::regex_match(language.begin(), language.end(), tag)) {
        throw precondition_error("invalid language tag '" + std::string(language)
                                 + "'");
    }
}

// -- panel templates --------------------------------------------------------

constexpr std::string_view works_raw = R"(SELECT ?work ?workLabel ?date ?pages ?ordinal (COUNT(DISTINCT ?authorship) AS ?authorCount) WHERE {
  ?work wdt:{author} wd:{S} .
  ?work p:{author} ?subjectStatement .
  ?subjectStatement ps:{author} wd:{S} .
  OPTIONAL { ?subjectStatement pq:{series-ordinal} ?ordinal . }
  OPTIONAL { ?work wdt:{publication-date} ?date . }
  OPTIONAL { ?work wdt:{number-of-pages} ?pages . }
  ?work p:{author}|p:{author-name-string} ?authorship .
  {LABELS}
}
GROUP BY ?work ?workLabel ?date ?pages ?ordinal
ORDER BY ?work
)";

constexpr std::string_view author_coauthors = R"(SELECT ?coauthor ?coauthorLabel (COUNT(DISTINCT ?work) AS ?count) WHERE {
  ?work wdt:{author} wd:{S} .
  ?work wdt:{author} ?coauthor .
  FILTER (?coauthor != wd:{S})
  {LABELS}
}
GROUP BY ?coauthor ?coauthorLabel
ORDER BY DESC(?count) ?coauthor
LIMIT {LIMIT}
)";

constexpr std::string_view author_topics = R"(SELECT ?topic ?topicLabel (COUNT(DISTINCT ?work) AS ?count) WHERE {
  ?work wdt:{author} wd:{S} .
  ?work wdt:{main-theme} ?topic .
  {LABELS}
}
GROUP BY ?topic ?topicLabel
ORDER BY DESC(?count) ?topic
LIMIT {LIMIT}
)";

constexpr std::string_view author_venues = R"(SELECT ?venue ?venueLabel (COUNT(DISTINCT ?work) AS ?count) WHERE {
  ?work wdt:{author} wd:{S} .
  ?work wdt:{published-in} ?venue .
  {LABELS}
}
GROUP BY ?venue ?venueLabel
ORDER BY DESC(?count) ?venue
LIMIT {LIMIT}
)";

constexpr std::string_view author_timeline = R"(SELECT ?organization ?organizationLabel ?relation ?start ?end WHERE {
  {
    wd:{S} p:{educated-at} ?statement .
    ?statement ps:{educated-at} ?organization .
    BIND("education" AS ?relation)
  }
  UNION
  {
    wd:{S} p:{employer} ?statement .
    ?statement ps:{employer} ?organization .
    BIND("employment" AS ?relation)
  }
  OPTIONAL { ?statement pq:{start-time} ?start . }
  OPTIONAL { ?statement pq:{end-time} ?end . }
  {LABELS}
}
ORDER BY ?start ?organization
)";

constexpr std::string_view author_locations = R"(SELECT DISTINCT ?place ?placeLabel ?coordinates WHERE {
  wd:{S} wdt:{educated-at}|wdt:{employer}|wdt:{affiliation} ?place .
  ?place wdt:{coordinate-location} ?coordinates .
  {LABELS}
}
ORDER BY ?place
LIMIT {LIMIT}
)";

constexpr std::string_view author_citations_per_year = R"(SELECT ?year (COUNT(DISTINCT ?citing) AS ?count) WHERE {
  ?work wdt:{author} wd:{S} .
  ?citing wdt:{cites} ?work .
  ?citing wdt:{publication-date} ?date .
  BIND(YEAR(?date) AS ?year)
  {LABELS}
}
GROUP BY ?year
ORDER BY ?year
)";

constexpr std::string_view author_most_cited = R"(SELECT ?work ?workLabel (COUNT(DISTINCT ?citing) AS ?count) WHERE {
  ?work wdt:{author} wd:{S} .
  ?citing wdt:{cites} ?work .
  {LABELS}
}
GROUP BY ?work ?workLabel
ORDER BY DESC(?count) ?work
LIMIT {LIMIT}
)";

constexpr std::string_view author_citing_authors = R"(SELECT ?citingAuthor ?citingAuthorLabel (COUNT(DISTINCT ?citing) AS ?count) WHERE {
  ?work wdt:{author} wd:{S} .
  ?citing wdt:{cites} ?work .
  ?citing wdt:{author} ?citingAuthor .
  {LABELS}
}
GROUP BY ?citingAuthor ?citingAuthorLabel
ORDER BY DESC(?count) ?citingAuthor
LIMIT {LIMIT}
)";

constexpr std::string_view author_academic_tree = R"(SELECT DISTINCT ?student ?studentLabel ?advisor ?advisorLabel WHERE {
  {
    BIND(wd:{S} AS ?person)
  }
  UNION
  {
    wd:{S} wdt:{doctoral-advisor}|^wdt:{doctoral-advisor} ?person .
  }
  {
    ?person wdt:{doctoral-advisor} ?advisor .
    BIND(?person AS ?student)
  }
  UNION
  {
    ?student wdt:{doctoral-advisor} ?person .
    BIND(?person AS ?advisor)
  }
  {LABELS}
}
ORDER BY ?student ?advisor
LIMIT {LIMIT}
)";

constexpr std::string_view work_citations_to = R"(SELECT ?citing ?citingLabel ?date WHERE {
  ?citing wdt:{cites} wd:{S} .
  OPTIONAL { ?citing wdt:{publication-date} ?date . }
  {LABELS}
}
ORDER BY DESC(?date) ?citing
LIMIT {LIMIT}
)";

constexpr std::string_view work_citations_in = R"(SELECT ?cited ?citedLabel ?date WHERE {
  wd:{S} wdt:{cites} ?cited .
  OPTIONAL { ?cited wdt:{publication-date} ?date . }
  {LABELS}
}
ORDER BY DESC(?date) ?cited
LIMIT {LIMIT}
)";

// Token layout is pinned by tests; keep it as is.
constexpr std::string_view claims_supported = R"(SELECT distinct ?item ?itemLabel ?property ?propertyLabel
       ?value ?valueLabel WHERE {
  ?item ?p ?statement .
  ?property wikibase:claim ?p .
  ?statement ?a ?value .
  ?item ?b ?value .
  ?statement prov:wasDerivedFrom/
    <http://www.wikidata.org/prop/reference/{stated-in}>
    wd:{S} .
  {LABELS}
} ORDER BY ?itemLabel
)";

constexpr std::string_view org_associated_authors = R"(SELECT ?author ?authorLabel (COUNT(DISTINCT ?work) AS ?works) WHERE {
  ?author {AFF} wd:{S} .
  OPTIONAL { ?work wdt:{author} ?author . }
  {LABELS}
}
GROUP BY ?author ?authorLabel
ORDER BY DESC(?works) ?author
LIMIT {LIMIT}
)";

constexpr std::string_view org_recent_works = R"(SELECT DISTINCT ?work ?workLabel ?date WHERE {
  ?author {AFF} wd:{S} .
  ?work wdt:{author} ?author .
  OPTIONAL { ?work wdt:{publication-date} ?date . }
  {LABELS}
}
ORDER BY DESC(?date) ?work
LIMIT {LIMIT}
)";

constexpr std::string_view org_coauthor_graph = R"(SELECT ?author1 ?author1Label ?author2 ?author2Label (COUNT(DISTINCT ?work) AS ?works) WHERE {
  ?author1 {AFF} wd:{S} .
  ?author2 {AFF} wd:{S} .
  ?work wdt:{author} ?author1 , ?author2 .
  FILTER (STR(?author1) < STR(?author2))
  {LABELS}
}
GROUP BY ?author1 ?author1Label ?author2 ?author2Label
ORDER BY ?author1 ?author2
LIMIT {LIMIT}
)";

constexpr std::string_view org_page_production = R"(SELECT ?work ?date ?pages ?author ?authorLabel (COUNT(DISTINCT ?authorship) AS ?authorCount) WHERE {
  ?author {AFF} wd:{S} .
  ?work wdt:{author} ?author .
  OPTIONAL { ?work wdt:{publication-date} ?date . }
  OPTIONAL { ?work wdt:{number-of-pages} ?pages . }
  ?work p:{author}|p:{author-name-string} ?authorship .
  {LABELS}
}
GROUP BY ?work ?date ?pages ?author ?authorLabel
ORDER BY ?work ?author
)";

constexpr std::string_view org_conorm_citations = R"(SELECT ?citing ?year ?work ?author ?authorLabel (COUNT(DISTINCT ?authorship) AS ?authorCount) WHERE {
  ?author {AFF} wd:{S} .
  ?work wdt:{author} ?author .
  ?citing wdt:{cites} ?work .
  ?citing wdt:{publication-date} ?date .
  BIND(YEAR(?date) AS ?year)
  ?work p:{author}|p:{author-name-string} ?authorship .
  {LABELS}
}
GROUP BY ?citing ?year ?work ?author ?authorLabel
ORDER BY ?citing ?work ?author
)";

constexpr std::string_view org_most_cited_affiliated = R"(SELECT ?work ?workLabel ?author ?authorLabel (COUNT(DISTINCT ?citing) AS ?citations) WHERE {
  ?author {AFF} wd:{S} .
  ?work p:{author} ?statement .
  ?statement ps:{author} ?author .
  ?statement pq:{series-ordinal} "1" .
  ?citing wdt:{cites} ?work .
  {LABELS}
}
GROUP BY ?work ?workLabel ?author ?authorLabel
ORDER BY DESC(?citations) ?work
LIMIT {LIMIT}
)";

constexpr std::string_view venue_recent_works = R"(SELECT ?work ?workLabel ?date WHERE {
  ?work wdt:{published-in} wd:{S} .
  OPTIONAL { ?work wdt:{publication-date} ?date . }
  {LABELS}
}
ORDER BY DESC(?date) ?work
LIMIT {LIMIT}
)";

constexpr std::string_view venue_topics = R"(SELECT ?topic ?topicLabel (COUNT(DISTINCT ?work) AS ?count) WHERE {
  ?work wdt:{published-in} wd:{S} .
  ?work wdt:{main-theme} ?topic .
  {LABELS}
}
GROUP BY ?topic ?topicLabel
ORDER BY DESC(?count) ?topic
LIMIT {LIMIT}
)";

constexpr std::string_view venue_author_images = R"(SELECT DISTINCT ?author ?authorLabel ?image WHERE {
  ?work wdt:{published-in} wd:{S} .
  ?work wdt:{author} ?author .
  ?author wdt:{image} ?image .
  {LABELS}
}
ORDER BY ?author
LIMIT {LIMIT}
)";

constexpr std::string_view venue_prolific_authors = R"(SELECT ?author ?authorLabel (COUNT(DISTINCT ?work) AS ?count) WHERE {
  ?work wdt:{published-in} wd:{S} .
  ?work wdt:{author} ?author .
  {LABELS}
}
GROUP BY ?author ?authorLabel
ORDER BY DESC(?count) ?author
LIMIT {LIMIT}
)";

constexpr std::string_view venue_most_cited_works = R"(SELECT ?work ?workLabel (COUNT(DISTINCT ?citing) AS ?count) WHERE {
  ?work wdt:{published-in} wd:{S} .
  ?citing wdt:{cites} ?work .
  {LABELS}
}
GROUP BY ?work ?workLabel
ORDER BY DESC(?count) ?work
LIMIT {LIMIT}
)";

constexpr std::string_view venue_most_cited_authors = R"(SELECT ?author ?authorLabel (COUNT(DISTINCT ?citing) AS ?count) WHERE {
  ?work wdt:{published-in} wd:{S} .
  ?work wdt:{author} ?author .
  ?citing wdt:{cites} ?work .
  {LABELS}
}
GROUP BY ?author ?authorLabel
ORDER BY DESC(?count) ?author
LIMIT {LIMIT}
)";

constexpr std::string_view venue_most_cited_venues = R"(SELECT ?citedVenue ?citedVenueLabel (COUNT(?cited) AS ?count) WHERE {
  ?work wdt:{published-in} wd:{S} .
  ?work wdt:{cites} ?cited .
  ?cited wdt:{published-in} ?citedVenue .
  {LABELS}
}
GROUP BY ?citedVenue ?citedVenueLabel
ORDER BY DESC(?count) ?citedVenue
LIMIT {LIMIT}
)";

constexpr std::string_view series_items = R"(SELECT ?item ?itemLabel ?date WHERE {
  ?item wdt:{series} wd:{S} .
  OPTIONAL { ?item wdt:{publication-date} ?date . }
  {LABELS}
}
ORDER BY DESC(?date) ?item
LIMIT {LIMIT}
)";

constexpr std::string_view series_works = R"(SELECT ?work ?workLabel ?venue ?venueLabel ?date WHERE {
  ?venue wdt:{series} wd:{S} .
  ?work wdt:{published-in} ?venue .
  OPTIONAL { ?work wdt:{publication-date} ?date . }
  {LABELS}
}
ORDER BY DESC(?date) ?work
LIMIT {LIMIT}
)";

constexpr std::string_view publisher_venues = R"(SELECT ?venue ?venueLabel (COUNT(DISTINCT ?work) AS ?works) WHERE {
  ?venue wdt:{publisher} wd:{S} .
  ?work wdt:{published-in} ?venue .
  {LABELS}
}
GROUP BY ?venue ?venueLabel
ORDER BY DESC(?works) ?venue
LIMIT {LIMIT}
)";

constexpr std::string_view publisher_most_cited = R"(SELECT ?work ?workLabel (COUNT(DISTINCT ?citing) AS ?citations) WHERE {
  ?venue wdt:{publisher} wd:{S} .
  ?work wdt:{published-in} ?venue .
  ?citing wdt:{cites} ?work .
  {LABELS}
}
GROUP BY ?work ?workLabel
ORDER BY DESC(?citations) ?work
LIMIT {LIMIT}
)";

constexpr std::string_view publisher_editors = R"(SELECT DISTINCT ?editor ?editorLabel ?venue ?venueLabel WHERE {
  ?venue wdt:{publisher} wd:{S} .
  ?venue wdt:{editor} ?editor .
  {LABELS}
}
ORDER BY ?editor ?venue
LIMIT {LIMIT}
)";

constexpr std::string_view publisher_scatter = R"(SELECT ?venue ?venueLabel (COUNT(DISTINCT ?work) AS ?works) (COUNT(?citing) AS ?citations) WHERE {
  ?venue wdt:{publisher} wd:{S} .
  ?work wdt:{published-in} ?venue .
  OPTIONAL { ?citing wdt:{cites} ?work . }
  {LABELS}
}
GROUP BY ?venue ?venueLabel
ORDER BY DESC(?works) ?venue
)";

constexpr std::string_view sponsor_funded_works = R"(SELECT ?work ?workLabel ?date WHERE {
  ?work wdt:{sponsor} wd:{S} .
  OPTIONAL { ?work wdt:{publication-date} ?date . }
  {LABELS}
}
ORDER BY DESC(?date) ?work
LIMIT {LIMIT}
)";

constexpr std::string_view sponsor_authors = R"(SELECT ?author ?authorLabel (COUNT(DISTINCT ?work) AS ?works) WHERE {
  ?work wdt:{sponsor} wd:{S} .
  ?work wdt:{author} ?author .
  {LABELS}
}
GROUP BY ?author ?authorLabel
ORDER BY DESC(?works) ?author
LIMIT {LIMIT}
)";

constexpr std::string_view sponsor_cosponsors = R"(SELECT ?sponsor ?sponsorLabel (COUNT(DISTINCT ?work) AS ?works) WHERE {
  ?work wdt:{sponsor} wd:{S} .
  ?work wdt:{sponsor} ?sponsor .
  FILTER (?sponsor != wd:{S})
  {LABELS}
}
GROUP BY ?sponsor ?sponsorLabel
ORDER BY DESC(?works) ?sponsor
LIMIT {LIMIT}
)";

constexpr std::string_view topic_recent_works = R"(SELECT DISTINCT ?work ?workLabel ?date WHERE {
  ?work wdt:{main-theme}/wdt:{subclass-of}* wd:{S} .
  OPTIONAL { ?work wdt:{publication-date} ?date . }
  {LABELS}
}
ORDER BY DESC(?date) ?work
LIMIT {LIMIT}
)";

constexpr std::string_view topic_cooccurring = R"(SELECT ?topic ?topicLabel (COUNT(DISTINCT ?work) AS ?count) WHERE {
  ?work wdt:{main-theme}/wdt:{subclass-of}* wd:{S} .
  ?work wdt:{main-theme} ?topic .
  FILTER (?topic != wd:{S})
  {LABELS}
}
GROUP BY ?topic ?topicLabel
ORDER BY DESC(?count) ?topic
LIMIT {LIMIT}
)";

struct panel_entry {
    panel_info info;
    std::string_view tmpl; // empty for panels with a dedicated builder
};

const std::vector<panel_entry>& entries() {
    using enum panel_kind;
    static const std::vector<panel_entry> list = {
        // author
        {{aspect::author, "works-raw", 1, table,
          {"work", "workLabel", "date", "pages", "ordinal", "authorCount"},
          "Works by the author, one row per authorship"}, works_raw},
        {{aspect::author, "works-per-year-by-role", 1, year_role_bars,
          {"work", "workLabel", "date", "pages", "ordinal", "authorCount"},
          "Works per year, stacked by author role"}, works_raw},
        {{aspect::author, "coauthors", 2, table,
          {"coauthor", "coauthorLabel", "count"}, "Co-authors"}, author_coauthors},
        {{aspect::author, "topics", 2, table, {"topic", "topicLabel", "count"},
          "Main themes of the author's works"}, author_topics},
        {{aspect::author, "venue-stats", 2, table, {"venue", "venueLabel", "count"},
          "Venues the author published in"}, author_venues},
        {{aspect::author, "education-employment-timeline", 2, table,
          {"organization", "organizationLabel", "relation", "start", "end"},
          "Education and employment history"}, author_timeline},
        {{aspect::author, "locations-map", 2, table,
          {"place", "placeLabel", "coordinates"}, "Places associated with the author"},
         author_locations},
        {{aspect::author, "citations-per-year", 2, table, {"year", "count"},
          "Citing works per year"}, author_citations_per_year},
        {{aspect::author, "most-cited-work", 2, table, {"work", "workLabel", "count"},
          "Most cited works"}, author_most_cited},
        {{aspect::author, "citing-authors", 2, table,
          {"citingAuthor", "citingAuthorLabel", "count"}, "Authors citing the author"},
         author_citing_authors},
        {{aspect::author, "academic-tree", 2, graph,
          {"student", "studentLabel", "advisor", "advisorLabel"},
          "Doctoral advisors and students, two generations"}, author_academic_tree},
        // work
        {{aspect::work, "citations-to", 2, table, {"citing", "citingLabel", "date"},
          "Works citing this work, most recent first"}, work_citations_to},
        {{aspect::work, "citations-in", 2, table, {"cited", "citedLabel", "date"},
          "Works cited by this work"}, work_citations_in},
        {{aspect::work, "claims-supported", 1, table,
          {"item", "itemLabel", "property", "propertyLabel", "value", "valueLabel"},
          "Statements that use this work as a reference"}, claims_supported},
        {{aspect::work, "citation-graph", 1, graph,
          {"citing", "citingLabel", "cited", "citedLabel"},
          "Citation edges around this work"}, {}},
        // organization
        {{aspect::organization, "associated-authors", 1, table,
          {"author", "authorLabel", "works"},
          "Authors employed at or affiliated with the organization or a suborganization"},
         org_associated_authors},
        {{aspect::organization, "recent-works", 2, table, {"work", "workLabel", "date"},
          "Recent works by associated authors"}, org_recent_works},
        {{aspect::organization, "coauthor-graph", 2, graph,
          {"author1", "author1Label", "author2", "author2Label", "works"},
          "Co-authorship among associated authors"}, org_coauthor_graph},
        {{aspect::organization, "page-production-raw", 1, year_author_bars,
          {"work", "date", "pages", "author", "authorLabel", "authorCount"},
          "Pages per year normalized by author count"}, org_page_production},
        {{aspect::organization, "conorm-citations-raw", 1, year_author_bars,
          {"citing", "year", "work", "author", "authorLabel", "authorCount"},
          "Co-author-normalized citations per year"}, org_conorm_citations},
        {{aspect::organization, "most-cited-affiliated", 2, table,
          {"work", "workLabel", "author", "authorLabel", "citations"},
          "Most cited works with an affiliated first author"}, org_most_cited_affiliated},
        // venue
        {{aspect::venue, "recent-works", 2, table, {"work", "workLabel", "date"},
          "Recent works in the venue"}, venue_recent_works},
        {{aspect::venue, "topics", 2, table, {"topic", "topicLabel", "count"},
          "Main themes of works in the venue"}, venue_topics},
        {{aspect::venue, "author-images", 2, table, {"author", "authorLabel", "image"},
          "Images of authors in the venue"}, venue_author_images},
        {{aspect::venue, "prolific-authors", 2, table, {"author", "authorLabel", "count"},
          "Authors with most works in the venue"}, venue_prolific_authors},
        {{aspect::venue, "most-cited-works", 2, table, {"work", "workLabel", "count"},
          "Most cited works in the venue"}, venue_most_cited_works},
        {{aspect::venue, "most-cited-authors", 2, table, {"author", "authorLabel", "count"},
          "Most cited authors in the venue"}, venue_most_cited_authors},
        {{aspect::venue, "most-cited-venues", 2, table,
          {"citedVenue", "citedVenueLabel", "count"}, "Venues cited from the venue"},
         venue_most_cited_venues},
        // series
        {{aspect::series, "items-in-series", 2, table, {"item", "itemLabel", "date"},
          "Venues in the series"}, series_items},
        {{aspect::series, "works-from-series-venues", 2, table,
          {"work", "workLabel", "venue", "venueLabel", "date"},
          "Works published in venues of the series"}, series_works},
        // publisher
        {{aspect::publisher, "venues-by-works", 2, table, {"venue", "venueLabel", "works"},
          "Venues by number of published works"}, publisher_venues},
        {{aspect::publisher, "most-cited-papers", 2, table,
          {"work", "workLabel", "citations"}, "Most cited papers"}, publisher_most_cited},
        {{aspect::publisher, "editors", 2, table,
          {"editor", "editorLabel", "venue", "venueLabel"}, "Editors of the venues"},
         publisher_editors},
        {{aspect::publisher, "works-vs-citations-scatter", 1, scatter,
          {"venue", "venueLabel", "works", "citations"},
          "Works versus citations per venue"}, publisher_scatter},
        // sponsor
        {{aspect::sponsor, "funded-works", 2, table, {"work", "workLabel", "date"},
          "Works funded by the sponsor"}, sponsor_funded_works},
        {{aspect::sponsor, "sponsored-authors", 2, table, {"author", "authorLabel", "works"},
          "Authors of sponsored works"}, sponsor_authors},
        {{aspect::sponsor, "co-sponsors", 2, table, {"sponsor", "sponsorLabel", "works"},
          "Other sponsors of the same works"}, sponsor_cosponsors},
        // topic
        {{aspect::topic, "recent-works", 1, table, {"work", "workLabel", "date"},
          "Recent works on the topic or a subtopic"}, topic_recent_works},
        {{aspect::topic, "co-occurring-topics", 2, table, {"topic", "topicLabel", "count"},
          "Topics co-occurring with the topic"}, topic_cooccurring},
    };
    return list;
}

const std::vector<panel_info>& infos() {
    static const std::vector<panel_info> list = [] {
        std::vector<panel_info> out;
        for (const auto& e : entries()) {
            out.push_back(e.info);
        }
        return out;
    }();
    return list;
}

} // namespace

std::span<const panel_info> panel_catalog() { return infos(); }

const panel_info* find_panel(aspect owner, std::string_view name) {
    for (const auto& info : infos()) {
        if (info.owner == owner && info.name == name) {
            return &info;
        }
    }
    return nullptr;
}

query_text build_panel_query(const panel_query_spec& spec,
                             const property_registry& registry) {
    check_language(spec.language);
    if (spec.limit < 1) {
        throw precondition_error("panel limit must be positive");
    }
    for (const auto& e : entries()) {
        if (e.info.owner != spec.subject_aspect || e.info.name != spec.panel) {
            continue;
        }
        if (e.info.owner == aspect::work && e.info.name == "citation-graph") {
            return build_citation_graph_query(spec.subject, citation_graph_panel_depth,
                                              citation_graph_panel_cap, spec.language,
                                              registry);
        }
        template_args args{spec.subject.str(), spec.language, spec.limit};
        return query_text(expand(e.tmpl, args, registry));
    }
    throw unknown_panel(std::string(to_segment(spec.subject_aspect)), spec.panel);
}

query_text build_count_scientific_articles(const property_registry& registry) {
    constexpr std::string_view tmpl = R"(select (count(?work) as ?count) where {
  ?work wdt:{instance-of} wd:Q13442814 . }
)";
    return query_text(expand(tmpl, {}, registry));
}

query_text build_count_citations(const property_registry& registry) {
    constexpr std::string_view tmpl = R"(select (count(?citedwork) as ?count) where {
  ?work wdt:{cites} ?citedwork . }
)";
    return query_text(expand(tmpl, {}, registry));
}

query_text build_external_resource_query(std::string_view url_prefix,
                                         const property_registry& registry) {
    static const std::regex absolute(R"([A-Za-z][A-Za-z0-9+.\-]*://[^\s"\\<>{}]+)");
    if (!std::regex_match(url_prefix.begin(), url_prefix.end(), absolute)) {
        throw malformed_prefix(std::string(url_prefix));
    }
    constexpr std::string_view tmpl = R"(select ?item ?resource where {
?item wdt:{external-data-url} ?resource .
filter strstarts(str(?resource),
                 )";
    return query_text(expand(tmpl, {}, registry) + "\"" + std::string(url_prefix)
                      + "\")\n}\nORDER BY ?item ?resource\n");
}

query_text build_claims_supported_query(entity_id work, std::string_view language,
                                        const property_registry& registry) {
    if (!work.is_item()) {
        throw precondition_error("claims-supported needs an item id, got " + work.str());
    }
    check_language(language);
    template_args args{work.str(), std::string(language)};
    return query_text(expand(claims_supported, args, registry));
}

query_text build_citation_graph_query(entity_id work, int depth, int node_cap,
                                      std::string_view language,
                                      const property_registry& registry) {
    if (depth < 1 || depth > 3) {
        throw precondition_error("citation graph depth must be within 1..3, got "
                                 + std::to_string(depth));
    }
    if (node_cap < 1) {
        throw precondition_error("citation graph cap must be positive");
    }
    check_language(language);
    std::string tmpl = "SELECT DISTINCT ?citing ?citingLabel ?cited ?citedLabel WHERE {\n"
                       "  {\n    BIND(wd:{S} AS ?node)\n  }\n";
    std::string step = "(wdt:{cites}|^wdt:{cites})";
    std::string path = step;
    for (int hop = 1; hop < depth; ++hop) {
        tmpl += "  UNION\n  {\n    wd:{S} " + path + " ?node .\n  }\n";
        path += "/" + step;
    }
    tmpl += "  {\n    ?node wdt:{cites} ?cited .\n    BIND(?node AS ?citing)\n  }\n"
            "  UNION\n"
            "  {\n    ?citing wdt:{cites} ?node .\n    BIND(?node AS ?cited)\n  }\n"
            "  {LABELS}\n"
            "}\n"
            "ORDER BY ?citing ?cited\n"
            "LIMIT {LIMIT}\n";
    template_args args{work.str(), std::string(language), node_cap};
    return query_text(expand(tmpl, args, registry));
}

query_text build_instance_of_query(entity_id subject, const property_registry& registry) {
    constexpr std::string_view tmpl = R"(SELECT ?class WHERE {
  wd:{S} wdt:{instance-of} ?class .
}
ORDER BY ?class
)";
    return query_text(expand(tmpl, {subject.str()}, registry));
}

std::string sparql_string_literal(std::string_view value) {
    std::string out = "\"";
    for (char c : value) {
        switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\r': out += "\\r"; break;
        case '\t': out += "\\t"; break;
        default: out.push_back(c);
        }
    }
    out.push_back('"');
    return out;
}

query_text build_external_id_query(std::string_view role, std::string_view value,
                                   const property_registry& registry) {
    if (role != "doi" && role != "orcid" && role != "twitter" && role != "github") {
        throw precondition_error("unsupported external identifier kind '"
                                 + std::string(role) + "'");
    }
    std::string tmpl = "SELECT ?item WHERE {\n  ?item wdt:{" + std::string(role) + "} ";
    // The literal goes in after expansion so braces in values stay verbatim.
    auto text = expand(tmpl, {}, registry) + sparql_string_literal(value)
              + " .\n}\nORDER BY ?item\n";
    return query_text(std::move(text));
}

std::vector<std::string> projection_of(std::string_view query) {
    std::vector<std::string> out;
    auto upper = std::string(query);
    std::transform(upper.begin(), upper.end(), upper.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    auto pos = upper.find("SELECT");
    if (pos == std::string::npos) {
        return out;
    }
    int depth = 0;
    for (std::size_t i = pos + 6; i < query.size(); ++i) {
        char c = query[i];
        if (c == '(') {
            ++depth;
        } else if (c == ')') {
            --depth;
        } else if (depth == 0 && c == '{') {
            break;
        } else if (depth == 0 && upper.compare(i, 5, "WHERE") == 0) {
            break;
        } else if (c == '?' || c == '$') {
            std::size_t j = i + 1;
            while (j < query.size()
                   && (std::isalnum(static_cast<unsigned char>(query[j])) || query[j] == '_')) {
                ++j;
            }
            auto name = std::string(query.substr(i + 1, j - i - 1));
            if (depth == 0) {
                out.push_back(name);
            } else {
                // inside "(expr AS ?var)" only the alias is projected
                auto as = upper.rfind(" AS ", i);
                auto open = upper.rfind('(', i);
                if (as != std::string::npos && open != std::string::npos && as > open) {
                    out.push_back(name);
                }
            }
            i = j - 1;
        }
    }
    return out;
}

} // namespace scholia
