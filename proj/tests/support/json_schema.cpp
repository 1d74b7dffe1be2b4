#include "json_schema.hpp"

#include <regex>

namespace scholia::testing {

using nlohmann::json;

namespace {

bool has_type(const json& doc, const std::string& type) {
    if (type == "object") return doc.is_object();
    if (type == "array") return doc.is_array();
    if (type == "string") return doc.is_string();
    if (type == "integer") return doc.is_number_integer() || doc.is_number_unsigned();
    if (type == "number") return doc.is_number();
    if (type == "boolean") return doc.is_boolean();
    if (type == "null") return doc.is_null();
    return false;
}

void check(const json& schema, const json& doc, const std::string& path,
           std::vector<std::string>& errors) {
    auto at = [&](const std::string& m) { errors.push_back((path.empty() ? "/" : path) + ": " + m); };
    if (schema.contains("type")) {
        const auto& t = schema["type"];
        bool ok = false;
        if (t.is_array()) {
            for (const auto& x : t) {
                ok = ok || has_type(doc, x.get<std::string>());
            }
        } else {
            ok = has_type(doc, t.get<std::string>());
        }
        if (!ok) {
            at("expected type " + t.dump() + ", got " + doc.type_name());
            return;
        }
    }
    if (schema.contains("const") && doc != schema["const"]) {
        at("expected " + schema["const"].dump());
    }
    if (schema.contains("enum")) {
        bool found = false;
        for (const auto& v : schema["enum"]) {
            found = found || v == doc;
        }
        if (!found) {
            at(doc.dump() + " not in " + schema["enum"].dump());
        }
    }
    if (doc.is_string()) {
        const auto& s = doc.get_ref<const std::string&>();
        if (schema.contains("minLength") && s.size() < schema["minLength"].get<std::size_t>()) {
            at("string shorter than " + schema["minLength"].dump());
        }
        if (schema.contains("pattern")
            && !std::regex_search(s, std::regex(schema["pattern"].get<std::string>()))) {
            at("'" + s + "' does not match " + schema["pattern"].get<std::string>());
        }
    }
    if (doc.is_number() && schema.contains("minimum")
        && doc.get<double>() < schema["minimum"].get<double>()) {
        at(doc.dump() + " below minimum " + schema["minimum"].dump());
    }
    if (doc.is_array()) {
        if (schema.contains("minItems") && doc.size() < schema["minItems"].get<std::size_t>()) {
            at("fewer than " + schema["minItems"].dump() + " items");
        }
        if (schema.contains("maxItems") && doc.size() > schema["maxItems"].get<std::size_t>()) {
            at("more than " + schema["maxItems"].dump() + " items");
        }
        if (schema.contains("items")) {
            for (std::size_t i = 0; i < doc.size(); ++i) {
                check(schema["items"], doc[i], path + "/" + std::to_string(i), errors);
            }
        }
    }
    if (doc.is_object()) {
        if (schema.contains("required")) {
            for (const auto& r : schema["required"]) {
                if (!doc.contains(r.get<std::string>())) {
                    at("missing required " + r.get<std::string>());
                }
            }
        }
        const json props = schema.value("properties", json::object());
        for (const auto& [k, v] : doc.items()) {
            if (props.contains(k)) {
                check(props[k], v, path + "/" + k, errors);
            } else if (schema.contains("additionalProperties")
                       && schema["additionalProperties"] == false) {
                at("unexpected property " + k);
            }
        }
    }
}

} // namespace

std::vector<std::string> validate_schema(const json& schema, const json& doc) {
    std::vector<std::string> errors;
    check(schema, doc, "", errors);
    return errors;
}

} // namespace scholia::testing
