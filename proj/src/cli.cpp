#include "scholia/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <iostream>
#include <optional>

#include "scholia/bibgen.hpp"
#include "scholia/service.hpp"

namespace scholia::cli {

using nlohmann::json;

namespace {

int exit_code_for(const error& e) {
    const auto& k = e.kind();
    if (k == "MalformedId" || k == "UnknownPanel" || k == "PreconditionViolation"
        || k == "MalformedPrefix") {
        return exit_usage;
    }
    return exit_runtime;
}

void report(std::ostream& err, bool as_json, const std::string& kind, const std::string& message,
            int code, const std::vector<std::string>& candidates = {}) {
    if (as_json) {
        json doc = {{"error", {{"kind", kind}, {"message", message}, {"exit", code}}}};
        if (!candidates.empty()) {
            doc["error"]["candidates"] = candidates;
        }
        err << doc.dump() << "\n";
    } else {
        err << "scholia: " << kind << ": " << message << "\n";
        for (const auto& c : candidates) {
            err << "  candidate: " << c << "\n";
        }
    }
}

aspect parse_aspect(const std::string& text) {
    auto a = aspect_from_segment(text);
    if (!a) {
        throw precondition_error("unknown aspect '" + text + "'");
    }
    return *a;
}

} // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
             std::function<backend()> make_backend) {
    CLI::App app{"Scholarly profiles from a SPARQL endpoint", "scholia"};
    app.require_subcommand(1);
    bool json_errors = false;
    app.add_flag("--json-errors", json_errors, "Machine-readable errors on stderr");

    auto* bib_cmd = app.add_subcommand("write-bib-from-aux",
                                       "Write a .bib file for the item ids cited in a .aux file");
    std::string aux_path;
    std::string bib_out;
    bib_cmd->add_option("aux", aux_path, "LaTeX .aux file")->required();
    bib_cmd->add_option("--out", bib_out, "Output .bib (default: the .aux name with .bib)");

    auto* query_cmd = app.add_subcommand("query", "Run one panel query");
    std::string q_aspect, q_panel, q_subject, q_format = "json";
    query_cmd->add_option("aspect", q_aspect)->required();
    query_cmd->add_option("panel", q_panel)->required();
    query_cmd->add_option("id", q_subject)->required();
    query_cmd->add_option("--format", q_format, "json, csv or query-only")
        ->check(CLI::IsMember({"json", "csv", "query-only"}));

    auto* aspect_cmd = app.add_subcommand("aspect", "Print the guessed aspect of an item");
    std::string a_subject;
    aspect_cmd->add_option("id", a_subject)->required();

    auto* search_cmd = app.add_subcommand("search", "Search items by label");
    std::string s_term;
    int s_limit = 10;
    search_cmd->add_option("term", s_term)->required();
    search_cmd->add_option("--limit", s_limit)->check(CLI::PositiveNumber);

    auto* panels_cmd = app.add_subcommand("panels", "Print the panel catalog");
    std::string p_format = "json";
    panels_cmd->add_option("--format", p_format, "json or text")
        ->check(CLI::IsMember({"json", "text"}));

    auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP service");
    std::string bind;
    std::string ui_dir;
    serve_cmd->add_option("--bind", bind, "host:port (default SCHOLIA_BIND or 127.0.0.1:8100)");
    serve_cmd->add_option("--ui-dir", ui_dir, "Directory with the built web UI");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        if (code == 0) {
            return exit_ok;
        }
        if (json_errors) {
            report(err, true, "UsageError", e.what(), exit_usage);
        }
        return exit_usage;
    }

    std::optional<backend> lazy;
    auto clients = [&]() -> backend& {
        if (!lazy) {
            lazy = make_backend ? make_backend() : backend::from_env();
        }
        return *lazy;
    };

    try {
        if (*bib_cmd) {
            auto& b = clients();
            std::optional<std::filesystem::path> target;
            if (!bib_out.empty()) {
                target = bib_out;
            }
            auto r = bib::write_bib_from_aux(aux_path, target, *b.api, b.registry);
            err << "wrote " << r.written << " entr" << (r.written == 1 ? "y" : "ies") << " to "
                << r.out_path.string() << "\n";
            for (const auto& key : r.skipped) {
                err << "skipped non-item key: " << key << "\n";
            }
            for (const auto& [key, message] : r.failures) {
                err << "could not fetch " << key << ": " << message << "\n";
            }
        } else if (*query_cmd) {
            auto a = parse_aspect(q_aspect);
            auto id = parse_entity_id(q_subject);
            const auto* info = find_panel(a, q_panel);
            if (!info) {
                throw unknown_panel(q_aspect, q_panel);
            }
            if (q_format == "query-only") {
                panel_query_spec spec{a, q_panel, id};
                out << build_panel_query(spec, property_registry{}).text();
            } else if (q_format == "csv") {
                auto& b = clients();
                panel_query_spec spec{a, q_panel, id, b.language};
                out << to_csv(b.sparql->execute(build_panel_query(spec, b.registry)));
            } else {
                out << run_panel(clients(), a, q_panel, id).dump(2) << "\n";
            }
        } else if (*aspect_cmd) {
            auto id = parse_entity_id(a_subject);
            auto& b = clients();
            out << to_segment(guess_aspect(id, *b.sparql, b.rules, b.registry)) << "\n";
        } else if (*search_cmd) {
            auto& b = clients();
            for (const auto& hit : b.api->search_entities(s_term, s_limit, b.language)) {
                out << hit.id.str() << "\t" << hit.label << "\t" << hit.description << "\n";
            }
        } else if (*panels_cmd) {
            if (p_format == "text") {
                for (const auto& info : panel_catalog()) {
                    out << to_segment(info.owner) << "/" << info.name << "\ttier-" << info.tier
                        << "\t" << to_string(info.kind) << "\t" << info.description << "\n";
                }
            } else {
                out << panel_catalog_json().dump(2) << "\n";
            }
        } else if (*serve_cmd) {
            auto config = service_config::from_env();
            if (!bind.empty()) {
                std::tie(config.host, config.port) = parse_bind(bind);
            }
            if (!ui_dir.empty()) {
                config.ui_dir = ui_dir;
            }
            service svc(config, clients());
            svc.start();
            err << "serving on " << svc.base_url() << "/" << std::endl;
            svc.wait();
        }
    } catch (const ambiguous& e) {
        report(err, json_errors, e.kind(), e.what(), exit_runtime, e.candidates());
        return exit_runtime;
    } catch (const error& e) {
        int code = exit_code_for(e);
        report(err, json_errors, e.kind(), e.what(), code);
        return code;
    } catch (const std::exception& e) {
        report(err, json_errors, "InternalError", e.what(), exit_runtime);
        return exit_runtime;
    }
    return exit_ok;
}

} // namespace scholia::cli
