#include "sparql_grammar.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <stdexcept>

namespace scholia::testing {

const std::set<std::string>& wdqs_prefixes() {
    static const std::set<std::string> p = {
        "wd",  "wdt",  "wikibase", "p",   "ps",   "pq",    "pr",     "psv", "pqv", "prv",
        "psn", "pqn",  "prn",      "wdv", "wds",  "wdref", "wdno",   "wdtn", "prov", "bd",
        "rdf", "rdfs", "xsd",      "owl", "skos", "schema", "geo",   "hint", "mwapi", "ontolex",
        "dct", "cc",   "wdata",    "gas"};
    return p;
}

namespace {

struct syntax_error : std::runtime_error {
    std::size_t offset;
    syntax_error(const std::string& m, std::size_t off) : std::runtime_error(m), offset(off) {}
};

enum class tk { iri, pname, var, string, langtag, dtype, number, punct, word, end };

struct token {
    tk kind;
    std::string text;
    std::size_t offset;
    std::string prefix; // pname only
};

bool name_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_'
        || static_cast<unsigned char>(c) >= 0x80;
}
bool name_char(char c) {
    return name_start(c) || std::isdigit(static_cast<unsigned char>(c)) || c == '-';
}

std::vector<token> lex(std::string_view s) {
    std::vector<token> out;
    std::size_t i = 0;
    auto push = [&](tk k, std::size_t start, std::size_t end, std::string prefix = {}) {
        out.push_back({k, std::string(s.substr(start, end - start)), start, std::move(prefix)});
    };
    while (i < s.size()) {
        char c = s[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        if (c == '#') {
            while (i < s.size() && s[i] != '\n') {
                ++i;
            }
            continue;
        }
        std::size_t start = i;
        if (c == '<') {
            std::size_t j = i + 1;
            while (j < s.size() && s[j] != '>' && s[j] != '<' && s[j] != '"' && s[j] != '{'
                   && s[j] != '}' && s[j] != '|' && s[j] != '^' && s[j] != '`' && s[j] != '\\'
                   && static_cast<unsigned char>(s[j]) > 0x20) {
                ++j;
            }
            if (j < s.size() && s[j] == '>') {
                push(tk::iri, start, j + 1);
                i = j + 1;
                continue;
            }
            if (i + 1 < s.size() && s[i + 1] == '=') {
                push(tk::punct, start, i + 2);
                i += 2;
            } else {
                push(tk::punct, start, i + 1);
                ++i;
            }
            continue;
        }
        if ((c == '?' || c == '$') && i + 1 < s.size()
            && (name_char(s[i + 1]) || std::isdigit(static_cast<unsigned char>(s[i + 1])))) {
            std::size_t j = i + 1;
            while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_'
                                    || static_cast<unsigned char>(s[j]) >= 0x80)) {
                ++j;
            }
            push(tk::var, start, j);
            i = j;
            continue;
        }
        if (c == '"' || c == '\'') {
            bool longform = s.substr(i, 3) == std::string(3, c);
            std::size_t j = i + (longform ? 3 : 1);
            for (;;) {
                if (j >= s.size()) {
                    throw syntax_error("unterminated string", start);
                }
                if (s[j] == '\\') {
                    j += 2;
                    continue;
                }
                if (longform && s.substr(j, 3) == std::string(3, c)) {
                    j += 3;
                    break;
                }
                if (!longform && s[j] == c) {
                    ++j;
                    break;
                }
                if (!longform && (s[j] == '\n' || s[j] == '\r')) {
                    throw syntax_error("newline in string", j);
                }
                ++j;
            }
            push(tk::string, start, j);
            i = j;
            continue;
        }
        if (c == '@') {
            std::size_t j = i + 1;
            while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '-')) {
                ++j;
            }
            if (j == i + 1) {
                throw syntax_error("empty language tag", start);
            }
            push(tk::langtag, start, j);
            i = j;
            continue;
        }
        if (c == '^' && i + 1 < s.size() && s[i + 1] == '^') {
            push(tk::dtype, start, i + 2);
            i += 2;
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))
            || (c == '.' && i + 1 < s.size() && std::isdigit(static_cast<unsigned char>(s[i + 1])))) {
            std::size_t j = i;
            while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) {
                ++j;
            }
            if (j < s.size() && s[j] == '.' && j + 1 < s.size()
                && std::isdigit(static_cast<unsigned char>(s[j + 1]))) {
                ++j;
                while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) {
                    ++j;
                }
            }
            if (j < s.size() && (s[j] == 'e' || s[j] == 'E')) {
                std::size_t k = j + 1;
                if (k < s.size() && (s[k] == '+' || s[k] == '-')) {
                    ++k;
                }
                if (k < s.size() && std::isdigit(static_cast<unsigned char>(s[k]))) {
                    j = k;
                    while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) {
                        ++j;
                    }
                }
            }
            push(tk::number, start, j);
            i = j;
            continue;
        }
        if (name_start(c) || c == ':') {
            std::size_t j = i;
            while (j < s.size() && (name_char(s[j]) || s[j] == '.')) {
                ++j;
            }
            while (j > i && s[j - 1] == '.') {
                --j;
            }
            if (j < s.size() && s[j] == ':') {
                std::string prefix(s.substr(i, j - i));
                std::size_t k = j + 1;
                while (k < s.size()
                       && (name_char(s[k]) || std::isdigit(static_cast<unsigned char>(s[k]))
                           || s[k] == ':' || s[k] == '.' || s[k] == '%')) {
                    ++k;
                }
                while (k > j + 1 && s[k - 1] == '.') {
                    --k;
                }
                push(tk::pname, start, k, prefix);
                i = k;
                continue;
            }
            push(tk::word, start, j);
            i = j;
            continue;
        }
        static const std::string two[] = {"!=", ">=", "&&", "||"};
        bool matched = false;
        for (const auto& t : two) {
            if (s.substr(i, 2) == t) {
                push(tk::punct, start, i + 2);
                i += 2;
                matched = true;
                break;
            }
        }
        if (matched) {
            continue;
        }
        if (std::string_view("{}()[].,;*+?/|^!=>-").find(c) != std::string_view::npos) {
            push(tk::punct, start, i + 1);
            ++i;
            continue;
        }
        throw syntax_error(std::string("unexpected character '") + c + "'", i);
    }
    out.push_back({tk::end, "", s.size(), {}});
    return out;
}

std::string upper(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    return s;
}

// name -> (min, max) argument count; max < 0 means unbounded
const std::map<std::string, std::pair<int, int>>& builtins() {
    static const std::map<std::string, std::pair<int, int>> m = {
        {"STR", {1, 1}},        {"LANG", {1, 1}},       {"LANGMATCHES", {2, 2}},
        {"DATATYPE", {1, 1}},   {"IRI", {1, 1}},        {"URI", {1, 1}},
        {"BNODE", {0, 1}},      {"RAND", {0, 0}},       {"ABS", {1, 1}},
        {"CEIL", {1, 1}},       {"FLOOR", {1, 1}},      {"ROUND", {1, 1}},
        {"CONCAT", {0, -1}},    {"SUBSTR", {2, 3}},     {"STRLEN", {1, 1}},
        {"REPLACE", {3, 4}},    {"UCASE", {1, 1}},      {"LCASE", {1, 1}},
        {"ENCODE_FOR_URI", {1, 1}}, {"CONTAINS", {2, 2}}, {"STRSTARTS", {2, 2}},
        {"STRENDS", {2, 2}},    {"STRBEFORE", {2, 2}},  {"STRAFTER", {2, 2}},
        {"YEAR", {1, 1}},       {"MONTH", {1, 1}},      {"DAY", {1, 1}},
        {"HOURS", {1, 1}},      {"MINUTES", {1, 1}},    {"SECONDS", {1, 1}},
        {"TIMEZONE", {1, 1}},   {"TZ", {1, 1}},         {"NOW", {0, 0}},
        {"UUID", {0, 0}},       {"STRUUID", {0, 0}},    {"MD5", {1, 1}},
        {"SHA1", {1, 1}},       {"SHA256", {1, 1}},     {"SHA384", {1, 1}},
        {"SHA512", {1, 1}},     {"COALESCE", {0, -1}},  {"IF", {3, 3}},
        {"STRLANG", {2, 2}},    {"STRDT", {2, 2}},      {"SAMETERM", {2, 2}},
        {"ISIRI", {1, 1}},      {"ISURI", {1, 1}},      {"ISBLANK", {1, 1}},
        {"ISLITERAL", {1, 1}},  {"ISNUMERIC", {1, 1}},  {"REGEX", {2, 3}},
    };
    return m;
}

const std::set<std::string>& aggregates() {
    static const std::set<std::string> a = {"COUNT", "SUM",    "MIN",         "MAX",
                                            "AVG",   "SAMPLE", "GROUP_CONCAT"};
    return a;
}

class parser {
public:
    parser(std::vector<token> toks, const std::set<std::string>& predeclared)
        : t_(std::move(toks)), declared_(predeclared) {}

    grammar_report run() {
        prologue();
        if (is_kw("SELECT")) {
            select_query(false);
        } else if (is_kw("ASK")) {
            next();
            while (is_kw("FROM")) {
                dataset_clause();
            }
            where_clause();
            solution_modifier(nullptr);
        } else {
            fail("expected SELECT or ASK");
        }
        if (is_kw("VALUES")) {
            inline_data();
        }
        if (peek().kind != tk::end) {
            fail("trailing input '" + peek().text + "'");
        }
        return report_;
    }

private:
    struct select_info {
        std::vector<std::string> plain_vars;
        bool has_aggregate = false;
        std::set<std::string> group_vars;
        bool grouped = false;
    };

    std::vector<token> t_;
    std::size_t pos_ = 0;
    std::set<std::string> declared_;
    grammar_report report_;
    int aggregate_depth_ = 0;
    bool saw_aggregate_ = false;

    const token& peek(std::size_t ahead = 0) const {
        return t_[std::min(pos_ + ahead, t_.size() - 1)];
    }
    const token& next() { return t_[pos_ < t_.size() - 1 ? pos_++ : pos_]; }

    [[noreturn]] void fail(const std::string& msg) const {
        throw syntax_error(msg + " near '" + peek().text + "'", peek().offset);
    }

    bool is_kw(std::string_view kw, std::size_t ahead = 0) const {
        const auto& t = peek(ahead);
        return t.kind == tk::word && upper(t.text) == kw;
    }
    bool is_p(std::string_view p, std::size_t ahead = 0) const {
        const auto& t = peek(ahead);
        return t.kind == tk::punct && t.text == p;
    }
    void expect_kw(std::string_view kw) {
        if (!is_kw(kw)) {
            fail("expected " + std::string(kw));
        }
        next();
    }
    void expect_p(std::string_view p) {
        if (!is_p(p)) {
            fail("expected '" + std::string(p) + "'");
        }
        next();
    }
    bool accept_p(std::string_view p) {
        if (is_p(p)) {
            next();
            return true;
        }
        return false;
    }
    bool accept_kw(std::string_view kw) {
        if (is_kw(kw)) {
            next();
            return true;
        }
        return false;
    }

    std::string var() {
        if (peek().kind != tk::var) {
            fail("expected a variable");
        }
        auto name = next().text.substr(1);
        report_.variables.insert(name);
        return name;
    }

    void prologue() {
        for (;;) {
            if (accept_kw("BASE")) {
                if (peek().kind != tk::iri) {
                    fail("expected IRI after BASE");
                }
                next();
            } else if (accept_kw("PREFIX")) {
                if (peek().kind != tk::pname || peek().text.back() != ':') {
                    fail("expected prefix name");
                }
                declared_.insert(next().prefix);
                if (peek().kind != tk::iri) {
                    fail("expected IRI after PREFIX");
                }
                next();
            } else {
                return;
            }
        }
    }

    void iri() {
        if (peek().kind == tk::iri) {
            next();
            return;
        }
        if (peek().kind == tk::pname) {
            const auto& p = peek().prefix;
            if (!declared_.contains(p)) {
                fail("undeclared prefix '" + p + ":'");
            }
            report_.prefixes_used.insert(p);
            next();
            return;
        }
        fail("expected an IRI");
    }

    bool at_iri() const { return peek().kind == tk::iri || peek().kind == tk::pname; }

    void dataset_clause() {
        expect_kw("FROM");
        accept_kw("NAMED");
        iri();
    }

    void select_query(bool sub) {
        expect_kw("SELECT");
        select_info info;
        if (!accept_kw("DISTINCT")) {
            accept_kw("REDUCED");
        }
        if (accept_p("*")) {
            // nothing to track
        } else {
            int n = 0;
            for (;;) {
                if (peek().kind == tk::var) {
                    info.plain_vars.push_back(var());
                } else if (is_p("(")) {
                    next();
                    saw_aggregate_ = false;
                    expression();
                    info.has_aggregate = info.has_aggregate || saw_aggregate_;
                    expect_kw("AS");
                    var();
                    expect_p(")");
                } else {
                    break;
                }
                ++n;
            }
            if (n == 0) {
                fail("empty projection");
            }
        }
        if (!sub) {
            while (is_kw("FROM")) {
                dataset_clause();
            }
        }
        where_clause();
        solution_modifier(&info);
        if (sub && is_kw("VALUES")) {
            inline_data();
        }
        if (info.has_aggregate || info.grouped) {
            for (const auto& v : info.plain_vars) {
                if (!info.group_vars.contains(v)) {
                    fail("projected variable ?" + v + " is neither grouped nor aggregated");
                }
            }
        }
    }

    void where_clause() {
        accept_kw("WHERE");
        group_graph_pattern();
    }

    void solution_modifier(select_info* info) {
        if (is_kw("GROUP")) {
            next();
            expect_kw("BY");
            if (info) {
                info->grouped = true;
            }
            int n = 0;
            for (;; ++n) {
                if (peek().kind == tk::var) {
                    auto v = var();
                    if (info) {
                        info->group_vars.insert(v);
                    }
                } else if (is_p("(")) {
                    next();
                    expression();
                    if (accept_kw("AS")) {
                        auto v = var();
                        if (info) {
                            info->group_vars.insert(v);
                        }
                    }
                    expect_p(")");
                } else if (peek().kind == tk::word && builtins().contains(upper(peek().text))) {
                    builtin_call();
                } else if (at_iri()) {
                    iri_or_function();
                } else {
                    break;
                }
            }
            if (n == 0) {
                fail("empty GROUP BY");
            }
        }
        if (accept_kw("HAVING")) {
            int n = 0;
            while (constraint_start()) {
                constraint();
                ++n;
            }
            if (n == 0) {
                fail("empty HAVING");
            }
        }
        if (is_kw("ORDER")) {
            next();
            expect_kw("BY");
            int n = 0;
            for (;; ++n) {
                if (is_kw("ASC") || is_kw("DESC")) {
                    next();
                    bracketted_expression();
                } else if (peek().kind == tk::var) {
                    var();
                } else if (constraint_start()) {
                    constraint();
                } else {
                    break;
                }
            }
            if (n == 0) {
                fail("empty ORDER BY");
            }
        }
        bool limit = false;
        bool offset = false;
        for (;;) {
            if (!limit && accept_kw("LIMIT")) {
                limit = true;
            } else if (!offset && accept_kw("OFFSET")) {
                offset = true;
            } else {
                break;
            }
            if (peek().kind != tk::number
                || peek().text.find_first_not_of("0123456789") != std::string::npos) {
                fail("expected an integer");
            }
            next();
        }
    }

    bool constraint_start() const {
        return is_p("(") || at_iri()
            || (peek().kind == tk::word
                && (builtins().contains(upper(peek().text))
                    || aggregates().contains(upper(peek().text)) || is_kw("EXISTS")
                    || is_kw("NOT")));
    }

    void constraint() {
        if (is_p("(")) {
            bracketted_expression();
        } else if (at_iri()) {
            iri_or_function();
        } else {
            builtin_call();
        }
    }

    void group_graph_pattern() {
        expect_p("{");
        if (is_kw("SELECT")) {
            select_query(true);
        } else {
            group_graph_pattern_sub();
        }
        expect_p("}");
    }

    void group_graph_pattern_sub() {
        triples_block_opt();
        while (!is_p("}")) {
            if (!graph_pattern_not_triples()) {
                fail("unexpected token in group pattern");
            }
            accept_p(".");
            triples_block_opt();
        }
    }

    bool triples_start() const {
        const auto& t = peek();
        return t.kind == tk::var || t.kind == tk::iri || t.kind == tk::pname
            || t.kind == tk::string || t.kind == tk::number || is_p("[") || is_p("(")
            || is_kw("TRUE") || is_kw("FALSE") || is_p("-") || is_p("+");
    }

    void triples_block_opt() {
        while (triples_start()) {
            triples_same_subject_path();
            if (!accept_p(".")) {
                return;
            }
        }
    }

    bool graph_pattern_not_triples() {
        if (is_p("{")) {
            group_graph_pattern();
            while (accept_kw("UNION")) {
                group_graph_pattern();
            }
            return true;
        }
        if (accept_kw("OPTIONAL") || accept_kw("MINUS")) {
            group_graph_pattern();
            return true;
        }
        if (accept_kw("GRAPH")) {
            var_or_iri();
            group_graph_pattern();
            return true;
        }
        if (accept_kw("SERVICE")) {
            accept_kw("SILENT");
            var_or_iri();
            group_graph_pattern();
            return true;
        }
        if (accept_kw("FILTER")) {
            if (!constraint_start()) {
                fail("expected a constraint after FILTER");
            }
            constraint();
            return true;
        }
        if (accept_kw("BIND")) {
            expect_p("(");
            expression();
            expect_kw("AS");
            var();
            expect_p(")");
            return true;
        }
        if (is_kw("VALUES")) {
            inline_data();
            return true;
        }
        return false;
    }

    void var_or_iri() {
        if (peek().kind == tk::var) {
            var();
        } else {
            iri();
        }
    }

    void inline_data() {
        expect_kw("VALUES");
        if (peek().kind == tk::var) {
            var();
            expect_p("{");
            while (!is_p("}")) {
                data_value();
            }
            expect_p("}");
            return;
        }
        expect_p("(");
        std::size_t width = 0;
        while (peek().kind == tk::var) {
            var();
            ++width;
        }
        expect_p(")");
        expect_p("{");
        while (accept_p("(")) {
            std::size_t n = 0;
            while (!is_p(")")) {
                data_value();
                ++n;
            }
            next();
            if (n != width) {
                fail("VALUES row width mismatch");
            }
        }
        expect_p("}");
    }

    void data_value() {
        if (accept_kw("UNDEF")) {
            return;
        }
        if (at_iri()) {
            iri();
            return;
        }
        if (!literal()) {
            fail("expected a data value");
        }
    }

    bool literal() {
        if (peek().kind == tk::string) {
            next();
            if (peek().kind == tk::langtag) {
                next();
            } else if (peek().kind == tk::dtype) {
                next();
                iri();
            }
            return true;
        }
        if (is_p("-") || is_p("+")) {
            if (peek(1).kind == tk::number) {
                next();
                next();
                return true;
            }
            return false;
        }
        if (peek().kind == tk::number) {
            next();
            return true;
        }
        if (accept_kw("TRUE") || accept_kw("FALSE")) {
            return true;
        }
        return false;
    }

    void triples_same_subject_path() {
        if (is_p("[") || is_p("(")) {
            bool nonempty = triples_node();
            if (nonempty && !path_verb_start()) {
                return;
            }
            if (!nonempty && !path_verb_start()) {
                fail("expected a predicate");
            }
            property_list_path_not_empty();
            return;
        }
        var_or_term();
        property_list_path_not_empty();
    }

    // Returns true for a non-empty blank node property list or collection.
    bool triples_node() {
        if (accept_p("[")) {
            if (accept_p("]")) {
                return false;
            }
            property_list_path_not_empty();
            expect_p("]");
            return true;
        }
        expect_p("(");
        int n = 0;
        while (!is_p(")")) {
            graph_node();
            ++n;
        }
        next();
        return n > 0;
    }

    void var_or_term() {
        if (peek().kind == tk::var) {
            var();
        } else if (at_iri()) {
            iri();
        } else if (!literal()) {
            fail("expected a subject or object");
        }
    }

    void graph_node() {
        if (is_p("[") || is_p("(")) {
            triples_node();
        } else {
            var_or_term();
        }
    }

    bool path_verb_start() const {
        return peek().kind == tk::var || at_iri() || is_kw("A") || is_p("^") || is_p("!")
            || is_p("(");
    }

    void property_list_path_not_empty() {
        verb_path_or_simple();
        object_list();
        while (accept_p(";")) {
            if (path_verb_start()) {
                verb_path_or_simple();
                object_list();
            }
        }
    }

    void verb_path_or_simple() {
        if (peek().kind == tk::var) {
            var();
        } else {
            path_alternative();
        }
    }

    void object_list() {
        graph_node();
        while (accept_p(",")) {
            graph_node();
        }
    }

    void path_alternative() {
        path_sequence();
        while (accept_p("|")) {
            path_sequence();
        }
    }
    void path_sequence() {
        path_elt_or_inverse();
        while (accept_p("/")) {
            path_elt_or_inverse();
        }
    }
    void path_elt_or_inverse() {
        accept_p("^");
        path_primary();
        if (is_p("*") || is_p("+") || is_p("?")) {
            next();
        }
    }
    void path_primary() {
        if (accept_kw("A")) {
            return;
        }
        if (at_iri()) {
            iri();
            return;
        }
        if (accept_p("!")) {
            if (accept_p("(")) {
                if (!is_p(")")) {
                    path_one_in_set();
                    while (accept_p("|")) {
                        path_one_in_set();
                    }
                }
                expect_p(")");
            } else {
                path_one_in_set();
            }
            return;
        }
        if (accept_p("(")) {
            path_alternative();
            expect_p(")");
            return;
        }
        fail("expected a property path");
    }
    void path_one_in_set() {
        accept_p("^");
        if (!accept_kw("A")) {
            iri();
        }
    }

    // expressions
    void expression() { or_expr(); }
    void or_expr() {
        and_expr();
        while (accept_p("||")) {
            and_expr();
        }
    }
    void and_expr() {
        relational();
        while (accept_p("&&")) {
            relational();
        }
    }
    void relational() {
        additive();
        if (is_p("=") || is_p("!=") || is_p("<") || is_p(">") || is_p("<=") || is_p(">=")) {
            next();
            additive();
        } else if (is_kw("IN")) {
            next();
            expression_list();
        } else if (is_kw("NOT") && is_kw("IN", 1)) {
            next();
            next();
            expression_list();
        }
    }
    void expression_list() {
        expect_p("(");
        if (accept_p(")")) {
            return;
        }
        expression();
        while (accept_p(",")) {
            expression();
        }
        expect_p(")");
    }
    void additive() {
        multiplicative();
        for (;;) {
            if (is_p("+") || is_p("-")) {
                next();
                multiplicative();
            } else if (peek().kind == tk::number
                       && (peek().text[0] == '+' || peek().text[0] == '-')) {
                next();
            } else {
                return;
            }
        }
    }
    void multiplicative() {
        unary();
        while (is_p("*") || is_p("/")) {
            next();
            unary();
        }
    }
    void unary() {
        if (is_p("!") || is_p("+") || is_p("-")) {
            next();
        }
        primary();
    }
    void primary() {
        if (is_p("(")) {
            bracketted_expression();
            return;
        }
        if (peek().kind == tk::var) {
            var();
            return;
        }
        if (at_iri()) {
            iri_or_function();
            return;
        }
        if (peek().kind == tk::word) {
            auto w = upper(peek().text);
            if (w == "TRUE" || w == "FALSE") {
                next();
                return;
            }
            builtin_call();
            return;
        }
        if (!literal()) {
            fail("expected an expression");
        }
    }
    void bracketted_expression() {
        expect_p("(");
        expression();
        expect_p(")");
    }
    void iri_or_function() {
        iri();
        if (is_p("(")) {
            next();
            if (accept_p(")")) {
                return;
            }
            accept_kw("DISTINCT");
            expression();
            while (accept_p(",")) {
                expression();
            }
            expect_p(")");
        }
    }
    void builtin_call() {
        auto w = upper(peek().text);
        if (aggregates().contains(w)) {
            next();
            aggregate(w);
            return;
        }
        if (w == "BOUND") {
            next();
            expect_p("(");
            var();
            expect_p(")");
            return;
        }
        if (w == "EXISTS") {
            next();
            group_graph_pattern();
            return;
        }
        if (w == "NOT") {
            next();
            expect_kw("EXISTS");
            group_graph_pattern();
            return;
        }
        auto it = builtins().find(w);
        if (it == builtins().end()) {
            fail("unknown function " + peek().text);
        }
        next();
        expect_p("(");
        int n = 0;
        if (!is_p(")")) {
            expression();
            ++n;
            while (accept_p(",")) {
                expression();
                ++n;
            }
        }
        expect_p(")");
        auto [lo, hi] = it->second;
        if (n < lo || (hi >= 0 && n > hi)) {
            fail(w + " takes " + std::to_string(lo) + ".." + std::to_string(hi) + " arguments");
        }
    }
    void aggregate(const std::string& name) {
        if (aggregate_depth_ > 0) {
            fail("nested aggregate");
        }
        saw_aggregate_ = true;
        ++aggregate_depth_;
        expect_p("(");
        accept_kw("DISTINCT");
        if (name == "COUNT" && accept_p("*")) {
            // COUNT(*)
        } else {
            expression();
        }
        if (name == "GROUP_CONCAT" && accept_p(";")) {
            expect_kw("SEPARATOR");
            expect_p("=");
            if (peek().kind != tk::string) {
                fail("expected separator string");
            }
            next();
        }
        expect_p(")");
        --aggregate_depth_;
    }
};

} // namespace

grammar_report check_sparql(std::string_view query, const std::set<std::string>& predeclared) {
    try {
        parser p(lex(query), predeclared);
        return p.run();
    } catch (const syntax_error& e) {
        grammar_report r;
        r.ok = false;
        r.message = std::string(e.what()) + " at offset " + std::to_string(e.offset);
        return r;
    }
}

} // namespace scholia::testing
