// Brute-force interpretation of the fixture triples. Only the query text comes
// from query_gen; every answer is computed here with plain loops.

#include <algorithm>
#include <deque>
#include <functional>
#include <set>

#include "scholia/fixture.hpp"
#include "scholia/query_gen.hpp"
#include "scholia/sparql_client.hpp"

namespace scholia::fixture {

namespace {

using row = result_row;

// SPARQL ORDER BY: unbound < blank < IRI < literal; numbers numerically.
int compare_terms(const rdf_term* a, const rdf_term* b) {
    auto rank = [](const rdf_term* t) {
        if (!t) {
            return 0;
        }
        switch (t->kind) {
        case rdf_term::type::bnode: return 1;
        case rdf_term::type::iri: return 2;
        case rdf_term::type::literal: return 3;
        }
        return 3;
    };
    int ra = rank(a);
    int rb = rank(b);
    if (ra != rb) {
        return ra < rb ? -1 : 1;
    }
    if (!a) {
        return 0;
    }
    auto numeric = [](const rdf_term* t) {
        return t->datatype == xsd_integer || t->datatype == xsd_decimal;
    };
    if (ra == 3 && numeric(a) && numeric(b)) {
        auto x = a->as_number().value_or(0);
        auto y = b->as_number().value_or(0);
        return x < y ? -1 : (x > y ? 1 : 0);
    }
    int c = a->value.compare(b->value);
    if (c != 0) {
        return c < 0 ? -1 : 1;
    }
    c = a->lang.compare(b->lang);
    if (c != 0) {
        return c < 0 ? -1 : 1;
    }
    c = a->datatype.compare(b->datatype);
    return c < 0 ? -1 : (c > 0 ? 1 : 0);
}

struct order_key {
    std::string var;
    bool descending = false;
};

void sort_rows(std::vector<row>& rows, const std::vector<order_key>& keys,
               const std::vector<std::string>& vars) {
    std::stable_sort(rows.begin(), rows.end(), [&](const row& x, const row& y) {
        for (const auto& k : keys) {
            int c = compare_terms(find(x, k.var), find(y, k.var));
            if (c != 0) {
                return k.descending ? c > 0 : c < 0;
            }
        }
        // The store may return ties in any order; fix one for reproducibility.
        for (const auto& v : vars) {
            int c = compare_terms(find(x, v), find(y, v));
            if (c != 0) {
                return c < 0;
            }
        }
        return false;
    });
}

void distinct(std::vector<row>& rows) {
    std::vector<row> out;
    for (auto& r : rows) {
        if (std::find(out.begin(), out.end(), r) == out.end()) {
            out.push_back(std::move(r));
        }
    }
    rows = std::move(out);
}

rdf_term integer(long n) {
    return rdf_term::make_literal(std::to_string(n), std::string(xsd_integer));
}

class interpreter {
public:
    explicit interpreter(const dataset& d) : d_(d) {}

    const property_registry& reg() const { return reg_; }

    rdf_term iri(entity_id id) const { return rdf_term::make_iri(id.iri()); }

    // Label service: label in the language, else the bare id.
    rdf_term label(entity_id id, const std::string& lang) const {
        if (auto l = d_.label(id, lang)) {
            return rdf_term::make_literal(*l, {}, lang);
        }
        return rdf_term::make_literal(id.str());
    }

    std::vector<const statement*> stmts(entity_id s, std::string_view role) const {
        return d_.about(s, reg_.at(role));
    }

    std::vector<entity_id> entity_values(entity_id s, std::string_view role) const {
        std::vector<entity_id> out;
        for (const auto* st : stmts(s, role)) {
            if (st->object.entity) {
                out.push_back(*st->object.entity);
            }
        }
        return out;
    }

    /// Subjects having `role` -> target.
    std::vector<entity_id> subjects(std::string_view role, entity_id target) const {
        std::vector<entity_id> out;
        for (const auto* st : d_.with_property(reg_.at(role))) {
            if (st->object.entity == target
                && std::find(out.begin(), out.end(), st->subject) == out.end()) {
                out.push_back(st->subject);
            }
        }
        return out;
    }

    /// OPTIONAL { ?s wdt:role ?x }: each value, or one unbound.
    std::vector<std::optional<rdf_term>> optional_values(entity_id s,
                                                         std::string_view role) const {
        std::vector<std::optional<rdf_term>> out;
        for (const auto* st : stmts(s, role)) {
            out.push_back(st->object.to_term());
        }
        if (out.empty()) {
            out.emplace_back();
        }
        return out;
    }

    long authorship_count(entity_id work) const {
        return static_cast<long>(stmts(work, "author").size()
                                 + stmts(work, "author-name-string").size());
    }

    /// x prop* target, reflexive, with a visited set.
    bool reaches(entity_id from, std::string_view role, entity_id target) const {
        std::set<entity_id> seen{from};
        std::deque<entity_id> queue{from};
        while (!queue.empty()) {
            auto x = queue.front();
            queue.pop_front();
            if (x == target) {
                return true;
            }
            for (auto next : entity_values(x, role)) {
                if (seen.insert(next).second) {
                    queue.push_back(next);
                }
            }
        }
        return false;
    }

    /// ?a (employer|affiliation)/part-of* org
    std::vector<entity_id> affiliated(entity_id org) const {
        std::set<entity_id> out;
        for (auto role : {"employer", "affiliation"}) {
            for (const auto* st : d_.with_property(reg_.at(role))) {
                if (st->object.entity && reaches(*st->object.entity, "part-of", org)) {
                    out.insert(st->subject);
                }
            }
        }
        return {out.begin(), out.end()};
    }

    std::vector<std::pair<entity_id, entity_id>> cites_edges() const {
        std::vector<std::pair<entity_id, entity_id>> out;
        for (const auto* st : d_.with_property(reg_.at("cites"))) {
            if (st->object.entity) {
                out.emplace_back(st->subject, *st->object.entity);
            }
        }
        return out;
    }

    const dataset& data() const { return d_; }

private:
    const dataset& d_;
    property_registry reg_;
};

void put(row& r, const std::string& var, const std::optional<rdf_term>& t) {
    if (t) {
        r[var] = *t;
    }
}

result_set finish(std::vector<std::string> vars, std::vector<row> rows,
                  const std::vector<order_key>& keys, int limit = -1) {
    distinct(rows);
    sort_rows(rows, keys, vars);
    if (limit >= 0 && rows.size() > static_cast<std::size_t>(limit)) {
        rows.resize(static_cast<std::size_t>(limit));
    }
    return {std::move(vars), std::move(rows)};
}

// -- one function per query family -------------------------------------------

result_set works_raw(const interpreter& in, entity_id s, const std::string& lang) {
    std::vector<row> rows;
    for (auto w : in.subjects("author", s)) {
        auto count = integer(in.authorship_count(w));
        for (const auto* st : in.stmts(w, "author")) {
            if (st->object.entity != s) {
                continue;
            }
            std::vector<std::optional<rdf_term>> ordinals;
            for (const auto& [q, v] : st->qualifiers) {
                if (q == in.reg().at("series-ordinal")) {
                    ordinals.push_back(v.to_term());
                }
            }
            if (ordinals.empty()) {
                ordinals.emplace_back();
            }
            for (const auto& date : in.optional_values(w, "publication-date")) {
                for (const auto& pages : in.optional_values(w, "number-of-pages")) {
                    for (const auto& ord : ordinals) {
                        row r{{"work", in.iri(w)}, {"workLabel", in.label(w, lang)},
                              {"authorCount", count}};
                        put(r, "date", date);
                        put(r, "pages", pages);
                        put(r, "ordinal", ord);
                        rows.push_back(std::move(r));
                    }
                }
            }
        }
    }
    return finish({"work", "workLabel", "date", "pages", "ordinal", "authorCount"},
                  std::move(rows), {{"work"}});
}

result_set claims_supported(const interpreter& in, entity_id s, const std::string& lang) {
    auto stated_in = in.reg().at("stated-in");
    std::vector<row> rows;
    for (const auto& st : in.data().statements) {
        bool supported = false;
        for (const auto& ref : st.references) {
            for (const auto& [p, v] : ref) {
                supported = supported || (p == stated_in && v.entity == s);
            }
        }
        if (!supported) {
            continue;
        }
        std::vector<const value*> candidates{&st.object};
        for (const auto& [q, v] : st.qualifiers) {
            candidates.push_back(&v);
        }
        for (const auto* v : candidates) {
            // ?item ?b ?value: the item must hold the value directly.
            bool direct = false;
            for (const auto* other : in.data().about(st.subject)) {
                direct = direct || other->object == *v;
            }
            if (!direct) {
                continue;
            }
            row r{{"item", in.iri(st.subject)},
                  {"itemLabel", in.label(st.subject, lang)},
                  {"property", in.iri(st.property)},
                  {"propertyLabel", in.label(st.property, lang)},
                  {"value", v->to_term()}};
            if (v->entity) {
                r["valueLabel"] = in.label(*v->entity, lang);
            }
            rows.push_back(std::move(r));
        }
    }
    return finish({"item", "itemLabel", "property", "propertyLabel", "value", "valueLabel"},
                  std::move(rows), {{"itemLabel"}});
}

result_set citation_graph(const interpreter& in, entity_id s, int depth, int cap,
                          const std::string& lang) {
    auto edges = in.cites_edges();
    std::map<entity_id, int> dist{{s, 0}};
    std::deque<entity_id> queue{s};
    while (!queue.empty()) {
        auto x = queue.front();
        queue.pop_front();
        if (dist[x] >= depth - 1) {
            continue;
        }
        for (const auto& [a, b] : edges) {
            for (auto [from, to] : {std::pair{a, b}, std::pair{b, a}}) {
                if (from == x && !dist.contains(to)) {
                    dist[to] = dist[x] + 1;
                    queue.push_back(to);
                }
            }
        }
    }
    std::vector<row> rows;
    for (const auto& [citing, cited] : edges) {
        if (dist.contains(citing) || dist.contains(cited)) {
            rows.push_back({{"citing", in.iri(citing)},
                            {"citingLabel", in.label(citing, lang)},
                            {"cited", in.iri(cited)},
                            {"citedLabel", in.label(cited, lang)}});
        }
    }
    return finish({"citing", "citingLabel", "cited", "citedLabel"}, std::move(rows),
                  {{"citing"}, {"cited"}}, cap);
}

result_set associated_authors(const interpreter& in, entity_id s, const std::string& lang,
                              int limit) {
    std::vector<row> rows;
    for (auto a : in.affiliated(s)) {
        rows.push_back({{"author", in.iri(a)},
                        {"authorLabel", in.label(a, lang)},
                        {"works", integer(static_cast<long>(in.subjects("author", a).size()))}});
    }
    return finish({"author", "authorLabel", "works"}, std::move(rows),
                  {{"works", true}, {"author"}}, limit);
}

result_set page_production(const interpreter& in, entity_id s, const std::string& lang) {
    std::vector<row> rows;
    for (auto a : in.affiliated(s)) {
        for (auto w : in.subjects("author", a)) {
            auto count = integer(in.authorship_count(w));
            for (const auto& date : in.optional_values(w, "publication-date")) {
                for (const auto& pages : in.optional_values(w, "number-of-pages")) {
                    row r{{"work", in.iri(w)},
                          {"author", in.iri(a)},
                          {"authorLabel", in.label(a, lang)},
                          {"authorCount", count}};
                    put(r, "date", date);
                    put(r, "pages", pages);
                    rows.push_back(std::move(r));
                }
            }
        }
    }
    return finish({"work", "date", "pages", "author", "authorLabel", "authorCount"},
                  std::move(rows), {{"work"}, {"author"}});
}

result_set conorm_citations(const interpreter& in, entity_id s, const std::string& lang) {
    std::vector<row> rows;
    for (auto a : in.affiliated(s)) {
        for (auto w : in.subjects("author", a)) {
            auto count = integer(in.authorship_count(w));
            for (auto c : in.subjects("cites", w)) {
                for (const auto* d : in.stmts(c, "publication-date")) {
                    auto year = year_of(d->object.text);
                    if (!year) {
                        continue;
                    }
                    rows.push_back({{"citing", in.iri(c)},
                                    {"year", integer(*year)},
                                    {"work", in.iri(w)},
                                    {"author", in.iri(a)},
                                    {"authorLabel", in.label(a, lang)},
                                    {"authorCount", count}});
                }
            }
        }
    }
    return finish({"citing", "year", "work", "author", "authorLabel", "authorCount"},
                  std::move(rows), {{"citing"}, {"work"}, {"author"}});
}

result_set publisher_scatter(const interpreter& in, entity_id s, const std::string& lang) {
    std::vector<row> rows;
    for (auto v : in.subjects("publisher", s)) {
        auto works = in.subjects("published-in", v);
        if (works.empty()) {
            continue;
        }
        long citations = 0;
        for (auto w : works) {
            for (const auto* st : in.data().with_property(in.reg().at("cites"))) {
                citations += st->object.entity == w ? 1 : 0;
            }
        }
        rows.push_back({{"venue", in.iri(v)},
                        {"venueLabel", in.label(v, lang)},
                        {"works", integer(static_cast<long>(works.size()))},
                        {"citations", integer(citations)}});
    }
    return finish({"venue", "venueLabel", "works", "citations"}, std::move(rows),
                  {{"works", true}, {"venue"}});
}

result_set topic_recent_works(const interpreter& in, entity_id s, const std::string& lang,
                              int limit) {
    std::vector<row> rows;
    for (const auto* st : in.data().with_property(in.reg().at("main-theme"))) {
        if (!st->object.entity || !in.reaches(*st->object.entity, "subclass-of", s)) {
            continue;
        }
        auto w = st->subject;
        for (const auto& date : in.optional_values(w, "publication-date")) {
            row r{{"work", in.iri(w)}, {"workLabel", in.label(w, lang)}};
            put(r, "date", date);
            rows.push_back(std::move(r));
        }
    }
    return finish({"work", "workLabel", "date"}, std::move(rows),
                  {{"date", true}, {"work"}}, limit);
}

result_set count_instances(const interpreter& in, entity_id klass) {
    long n = 0;
    for (const auto* st : in.data().with_property(in.reg().at("instance-of"))) {
        n += st->object.entity == klass ? 1 : 0;
    }
    return {{"count"}, {{{"count", integer(n)}}}};
}

result_set count_property(const interpreter& in, std::string_view role) {
    auto n = static_cast<long>(in.data().with_property(in.reg().at(role)).size());
    return {{"count"}, {{{"count", integer(n)}}}};
}

result_set external_resources(const interpreter& in, const std::string& prefix) {
    std::vector<row> rows;
    for (const auto* st : in.data().with_property(in.reg().at("external-data-url"))) {
        auto term = st->object.to_term();
        if (term.value.starts_with(prefix)) {
            rows.push_back({{"item", in.iri(st->subject)}, {"resource", term}});
        }
    }
    return finish({"item", "resource"}, std::move(rows), {{"item"}, {"resource"}});
}

result_set instance_of(const interpreter& in, entity_id s) {
    std::vector<row> rows;
    for (const auto* st : in.stmts(s, "instance-of")) {
        rows.push_back({{"class", st->object.to_term()}});
    }
    return finish({"class"}, std::move(rows), {{"class"}});
}

result_set external_id(const interpreter& in, std::string_view role, const std::string& v) {
    std::vector<row> rows;
    for (const auto* st : in.data().with_property(in.reg().at(role))) {
        if (st->object.kind == value::type::string && st->object.text == v) {
            rows.push_back({{"item", in.iri(st->subject)}});
        }
    }
    return finish({"item"}, std::move(rows), {{"item"}});
}

int to_int(const std::string& s, const std::string& what) {
    try {
        std::size_t used = 0;
        int n = std::stoi(s, &used);
        if (used == s.size()) {
            return n;
        }
    } catch (const std::exception&) {
    }
    throw precondition_error("designated: bad " + what + " '" + s + "'");
}

} // namespace

std::vector<canned_query> generate_canned(const dataset& data) {
    interpreter in(data);
    const auto& reg = in.reg();
    std::vector<canned_query> out;
    std::set<std::string> seen;
    auto add = [&](const query_text& q, result_set results) {
        auto hash = q.hash_hex();
        if (seen.insert(hash).second) {
            out.push_back({hash, normalize_whitespace(q.text()), std::move(results)});
        }
    };

    using panel_fn
        = std::function<result_set(const interpreter&, entity_id, const std::string&, int)>;
    const std::map<std::pair<std::string, std::string>, panel_fn> panels = {
        {{"author", "works-raw"},
         [](auto& i, auto s, auto& l, int) { return works_raw(i, s, l); }},
        {{"author", "works-per-year-by-role"},
         [](auto& i, auto s, auto& l, int) { return works_raw(i, s, l); }},
        {{"work", "claims-supported"},
         [](auto& i, auto s, auto& l, int) { return claims_supported(i, s, l); }},
        {{"work", "citation-graph"},
         [](auto& i, auto s, auto& l, int) {
             return citation_graph(i, s, citation_graph_panel_depth,
                                   citation_graph_panel_cap, l);
         }},
        {{"organization", "associated-authors"},
         [](auto& i, auto s, auto& l, int lim) { return associated_authors(i, s, l, lim); }},
        {{"organization", "page-production-raw"},
         [](auto& i, auto s, auto& l, int) { return page_production(i, s, l); }},
        {{"organization", "conorm-citations-raw"},
         [](auto& i, auto s, auto& l, int) { return conorm_citations(i, s, l); }},
        {{"publisher", "works-vs-citations-scatter"},
         [](auto& i, auto s, auto& l, int) { return publisher_scatter(i, s, l); }},
        {{"topic", "recent-works"},
         [](auto& i, auto s, auto& l, int lim) { return topic_recent_works(i, s, l, lim); }},
    };

    for (const auto& line : data.designated) {
        const auto& kind = line.at(0);
        auto arg = [&](std::size_t i) -> const std::string& {
            if (i >= line.size()) {
                throw precondition_error("designated: '" + kind + "' needs more fields");
            }
            return line[i];
        };
        if (kind == "panel") {
            auto a = aspect_from_segment(arg(1));
            auto it = panels.find({arg(1), arg(2)});
            if (!a || it == panels.end()) {
                throw precondition_error("designated: no oracle for panel " + arg(1) + "/"
                                         + arg(2));
            }
            panel_query_spec spec{*a, arg(2), parse_entity_id(arg(3))};
            if (line.size() > 4) {
                spec.language = line[4];
            }
            add(build_panel_query(spec, reg),
                it->second(in, spec.subject, spec.language, spec.limit));
        } else if (kind == "claims") {
            auto s = parse_entity_id(arg(1));
            add(build_claims_supported_query(s, "en", reg), claims_supported(in, s, "en"));
        } else if (kind == "citation-graph") {
            auto s = parse_entity_id(arg(1));
            int depth = to_int(arg(2), "depth");
            int cap = to_int(arg(3), "cap");
            add(build_citation_graph_query(s, depth, cap, "en", reg),
                citation_graph(in, s, depth, cap, "en"));
        } else if (kind == "count") {
            if (arg(1) == "scientific-articles") {
                add(build_count_scientific_articles(reg), count_instances(in, item(13442814)));
            } else if (arg(1) == "citations") {
                add(build_count_citations(reg), count_property(in, "cites"));
            } else {
                throw precondition_error("designated: unknown count '" + arg(1) + "'");
            }
        } else if (kind == "external-resource") {
            add(build_external_resource_query(arg(1), reg), external_resources(in, arg(1)));
        } else if (kind == "instance-of") {
            if (arg(1) == "*") {
                for (auto id : data.items()) {
                    if (id.is_item()) {
                        add(build_instance_of_query(id, reg), instance_of(in, id));
                    }
                }
            } else {
                auto s = parse_entity_id(arg(1));
                add(build_instance_of_query(s, reg), instance_of(in, s));
            }
        } else if (kind == "external-id") {
            if (arg(1) == "*") {
                for (auto role : {"doi", "orcid", "twitter", "github"}) {
                    for (const auto* st : data.with_property(reg.at(role))) {
                        add(build_external_id_query(role, st->object.text, reg),
                            external_id(in, role, st->object.text));
                    }
                }
            } else {
                add(build_external_id_query(arg(1), arg(2), reg),
                    external_id(in, arg(1), arg(2)));
            }
        } else {
            throw precondition_error("designated: unknown kind '" + kind + "'");
        }
    }
    return out;
}

} // namespace scholia::fixture
