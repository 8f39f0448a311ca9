#include "litecua/ctx/a11y.hpp"

#include <nlohmann/json.hpp>

namespace litecua::ctx {

using nlohmann::json;

namespace {

struct IngestState {
    int kept = 0;
    bool truncated = false;
};

RawA11yNode build_node(const json& doc, int depth, IngestState& st) {
    RawA11yNode node;
    node.role = doc.value("role", std::string{});
    node.name = doc.value("name", std::string{});
    node.description = doc.value("description", std::string{});
    if (auto it = doc.find("bounds"); it != doc.end() && it->is_object()) {
        node.bounds.x = it->value("x", 0);
        node.bounds.y = it->value("y", 0);
        node.bounds.w = std::max(0, it->value("w", 0));
        node.bounds.h = std::max(0, it->value("h", 0));
    }
    if (auto it = doc.find("states"); it != doc.end() && it->is_array()) {
        for (const auto& s : *it) {
            if (s.is_string()) node.states.insert(s.get<std::string>());
        }
    }
    if (auto it = doc.find("value"); it != doc.end() && it->is_string()) {
        node.value = it->get<std::string>();
    }
    st.kept += 1;
    if (auto it = doc.find("children"); it != doc.end() && it->is_array()) {
        for (const auto& child : *it) {
            if (!child.is_object()) continue;
            if (depth + 1 > kMaxTreeDepth || st.kept >= kMaxTreeNodes) {
                st.truncated = true;
                continue;
            }
            node.children.push_back(build_node(child, depth + 1, st));
        }
    }
    return node;
}

}  // namespace

IngestedTree ingest_a11y(const std::string& document) {
    json doc = json::parse(document, nullptr, false);
    if (doc.is_discarded()) throw MalformedTree("document is not valid JSON");
    if (!doc.is_object()) throw MalformedTree("root must be a JSON object");
    if (!doc.contains("role") || !doc["role"].is_string()) {
        throw MalformedTree("root node has no role");
    }
    IngestState st;
    IngestedTree out;
    out.root = build_node(doc, 0, st);
    out.truncated = st.truncated;
    return out;
}

int count_nodes(const RawA11yNode& root) {
    int n = 1;
    for (const auto& c : root.children) n += count_nodes(c);
    return n;
}

std::vector<std::string> preorder_roles(const RawA11yNode& root) {
    std::vector<std::string> out;
    auto walk = [&](auto&& self, const RawA11yNode& node) -> void {
        out.push_back(node.role);
        for (const auto& c : node.children) self(self, c);
    };
    walk(walk, root);
    return out;
}

}  // namespace litecua::ctx
