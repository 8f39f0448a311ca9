#include "litecua/actions/schema.hpp"

#include <regex>

namespace litecua::actions {

using nlohmann::json;

namespace {

bool type_matches(const std::string& type, const json& value) {
    if (type == "object") return value.is_object();
    if (type == "array") return value.is_array();
    if (type == "string") return value.is_string();
    if (type == "boolean") return value.is_boolean();
    if (type == "integer") return value.is_number_integer();
    if (type == "number") return value.is_number();
    if (type == "null") return value.is_null();
    return false;
}

}  // namespace

std::optional<std::string> schema_violation(const json& schema, const json& value,
                                            const std::string& path) {
    if (auto it = schema.find("type"); it != schema.end()) {
        if (!type_matches(it->get<std::string>(), value)) {
            return path + ": expected " + it->get<std::string>() + ", got " +
                   std::string(value.type_name());
        }
    }
    if (auto it = schema.find("enum"); it != schema.end()) {
        bool ok = false;
        for (const auto& v : *it) {
            if (v == value) {
                ok = true;
                break;
            }
        }
        if (!ok) return path + ": value not in enum " + it->dump();
    }
    if (value.is_number()) {
        double d = value.get<double>();
        if (auto it = schema.find("minimum"); it != schema.end() && d < it->get<double>()) {
            return path + ": below minimum " + it->dump();
        }
        if (auto it = schema.find("maximum"); it != schema.end() && d > it->get<double>()) {
            return path + ": above maximum " + it->dump();
        }
    }
    if (value.is_string()) {
        const auto& s = value.get_ref<const std::string&>();
        if (auto it = schema.find("minLength");
            it != schema.end() && s.size() < it->get<std::size_t>()) {
            return path + ": shorter than minLength " + it->dump();
        }
        if (auto it = schema.find("maxLength");
            it != schema.end() && s.size() > it->get<std::size_t>()) {
            return path + ": longer than maxLength " + it->dump();
        }
        if (auto it = schema.find("pattern"); it != schema.end()) {
            std::regex re(it->get<std::string>());
            if (!std::regex_search(s, re)) {
                return path + ": does not match pattern " + it->dump();
            }
        }
    }
    if (value.is_array()) {
        if (auto it = schema.find("minItems");
            it != schema.end() && value.size() < it->get<std::size_t>()) {
            return path + ": fewer than minItems " + it->dump();
        }
        if (auto it = schema.find("maxItems");
            it != schema.end() && value.size() > it->get<std::size_t>()) {
            return path + ": more than maxItems " + it->dump();
        }
        if (auto it = schema.find("items"); it != schema.end()) {
            for (std::size_t i = 0; i < value.size(); ++i) {
                auto err = schema_violation(*it, value[i], path + "[" + std::to_string(i) + "]");
                if (err) return err;
            }
        }
    }
    if (value.is_object()) {
        const json* props = nullptr;
        if (auto it = schema.find("properties"); it != schema.end()) props = &*it;
        if (auto it = schema.find("required"); it != schema.end()) {
            for (const auto& req : *it) {
                const auto& key = req.get_ref<const std::string&>();
                if (!value.contains(key)) {
                    return path + ": missing required property '" + key + "'";
                }
            }
        }
        bool allow_extra = true;
        if (auto it = schema.find("additionalProperties");
            it != schema.end() && it->is_boolean()) {
            allow_extra = it->get<bool>();
        }
        for (auto it = value.begin(); it != value.end(); ++it) {
            const json* sub = nullptr;
            if (props && props->contains(it.key())) sub = &(*props)[it.key()];
            if (!sub) {
                if (!allow_extra) return path + ": unknown property '" + it.key() + "'";
                continue;
            }
            auto err = schema_violation(*sub, it.value(), path + "." + it.key());
            if (err) return err;
        }
    }
    if (auto it = schema.find("oneOf"); it != schema.end()) {
        int matches = 0;
        std::string detail;
        for (const auto& alt : *it) {
            auto err = schema_violation(alt, value, path);
            if (!err) {
                ++matches;
            } else {
                if (!detail.empty()) detail += "; ";
                detail += *err;
            }
        }
        if (matches == 0) return path + ": no oneOf alternative matched (" + detail + ")";
        if (matches > 1) return path + ": " + std::to_string(matches) + " oneOf alternatives matched";
    }
    return std::nullopt;
}

}  // namespace litecua::actions
