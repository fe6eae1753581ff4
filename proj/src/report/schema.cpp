#include "lsdev/report/schema.hpp"

#include <algorithm>
#include <cmath>

namespace lsdev::report {

namespace {

bool has_type(const nlohmann::json& v, const std::string& t) {
    if (t == "null") return v.is_null();
    if (t == "boolean") return v.is_boolean();
    if (t == "string") return v.is_string();
    if (t == "object") return v.is_object();
    if (t == "array") return v.is_array();
    if (t == "number") return v.is_number();
    if (t == "integer") {
        return v.is_number_integer() || (v.is_number_float() && std::trunc(v.get<double>()) == v.get<double>());
    }
    return false;
}

void check(const nlohmann::json& schema, const nlohmann::json& v, const std::string& at, std::vector<std::string>& out) {
    if (auto t = schema.find("type"); t != schema.end()) {
        std::vector<std::string> allowed;
        if (t->is_array()) {
            for (const auto& s : *t) allowed.push_back(s.get<std::string>());
        } else {
            allowed.push_back(t->get<std::string>());
        }
        if (std::none_of(allowed.begin(), allowed.end(), [&](const std::string& s) { return has_type(v, s); })) {
            out.push_back(at + ": unexpected type " + std::string(v.type_name()));
            return;
        }
    }
    if (auto e = schema.find("enum"); e != schema.end()) {
        if (std::find(e->begin(), e->end(), v) == e->end()) out.push_back(at + ": value not in enum");
    }
    if (auto m = schema.find("minimum"); m != schema.end() && v.is_number()) {
        if (v.get<double>() < m->get<double>()) out.push_back(at + ": below minimum");
    }
    if (v.is_object()) {
        if (auto req = schema.find("required"); req != schema.end()) {
            for (const auto& k : *req) {
                if (!v.contains(k.get<std::string>())) out.push_back(at + ": missing '" + k.get<std::string>() + "'");
            }
        }
        const auto props = schema.find("properties");
        for (auto it = v.begin(); it != v.end(); ++it) {
            if (props != schema.end() && props->contains(it.key())) {
                check((*props)[it.key()], it.value(), at + "/" + it.key(), out);
            } else if (schema.value("additionalProperties", true) == false) {
                out.push_back(at + ": unexpected property '" + it.key() + "'");
            }
        }
    }
    if (v.is_array()) {
        if (auto items = schema.find("items"); items != schema.end()) {
            for (std::size_t i = 0; i < v.size(); ++i) check(*items, v[i], at + "/" + std::to_string(i), out);
        }
    }
}

}  // namespace

std::vector<std::string> validate_schema(const nlohmann::json& schema, const nlohmann::json& doc) {
    std::vector<std::string> out;
    check(schema, doc, "", out);
    return out;
}

const nlohmann::json& report_schema() {
    static const nlohmann::json schema = nlohmann::json::parse(
#include "report_schema.inc"
    );
    return schema;
}

}  // namespace lsdev::report
