#include "litecua/ctx/context.hpp"

#include <sstream>
#include <unordered_map>

#include "litecua/common/hash.hpp"

namespace litecua::ctx {

using nlohmann::json;

namespace {

const std::unordered_map<std::string, Role>& role_map() {
    static const std::unordered_map<std::string, Role> map = {
        {"push-button", Role::kButton},
        {"button", Role::kButton},
        {"toggle-button", Role::kButton},
        {"text", Role::kTextField},
        {"entry", Role::kTextField},
        {"text-field", Role::kTextField},
        {"label", Role::kLabel},
        {"static-text", Role::kLabel},
        {"menu-item", Role::kMenuItem},
        {"frame", Role::kWindow},
        {"window", Role::kWindow},
        {"dialog", Role::kWindow},
        {"check-box", Role::kCheckbox},
        {"checkbox", Role::kCheckbox},
        {"scroll-bar", Role::kScrollbar},
        {"scrollbar", Role::kScrollbar},
        {"list-item", Role::kListItem},
    };
    return map;
}

bool is_interactive(Role role) {
    switch (role) {
        case Role::kButton:
        case Role::kTextField:
        case Role::kMenuItem:
        case Role::kCheckbox:
        case Role::kScrollbar:
        case Role::kListItem:
            return true;
        case Role::kLabel:
        case Role::kWindow:
        case Role::kUnknown:
            return false;
    }
    return false;
}

std::string cap_text(const std::string& text, std::size_t cap) {
    if (text.size() <= cap) return text;
    return text.substr(0, cap) + "\xE2\x80\xA6";  // U+2026 ellipsis marker
}

const std::string& usage_verb(Role role) {
    static const std::unordered_map<Role, std::string> verbs = {
        {Role::kButton, "Press to trigger"},
        {Role::kTextField, "Type into"},
        {Role::kMenuItem, "Open"},
        {Role::kCheckbox, "Toggle"},
        {Role::kScrollbar, "Scroll"},
        {Role::kWindow, "Contains"},
        {Role::kListItem, "Select"},
        {Role::kLabel, "Reads"},
        {Role::kUnknown, "Inspect"},
    };
    return verbs.at(role);
}

}  // namespace

Role canonical_role(const std::string& raw) {
    auto it = role_map().find(raw);
    return it == role_map().end() ? Role::kUnknown : it->second;
}

const std::string& role_name(Role role) {
    static const std::unordered_map<Role, std::string> names = {
        {Role::kButton, "button"},       {Role::kTextField, "text-field"},
        {Role::kLabel, "label"},         {Role::kMenuItem, "menu-item"},
        {Role::kWindow, "window"},       {Role::kCheckbox, "checkbox"},
        {Role::kScrollbar, "scrollbar"}, {Role::kListItem, "list-item"},
        {Role::kUnknown, "unknown"},
    };
    return names.at(role);
}

std::vector<UIElement> compact(const RawA11yNode& root, Size screen) {
    std::vector<UIElement> out;
    auto walk = [&](auto&& self, const RawA11yNode& node) -> void {
        // Rule 1: an invisible node hides its whole subtree. Zero-area and
        // fully off-screen nodes are dropped individually; their children are
        // still visited (layout containers often report no extent).
        if (node.states.find("visible") == node.states.end()) return;
        bool droppable = node.bounds.w <= 0 || node.bounds.h <= 0 ||
                         !node.bounds.intersects_screen(screen);
        if (!droppable) {
            Role role = canonical_role(node.role);
            bool has_value = node.value.has_value() && !node.value->empty();
            // Rule 2: splice out pure containers; children are still visited.
            bool keep = !(node.name.empty() && !has_value && !is_interactive(role));
            if (keep) {
                UIElement e;
                e.id = static_cast<int>(out.size());     // Rule 5: pre-order ids
                e.role = role;                           // Rule 3
                e.name = cap_text(node.name, kNameCap);  // Rule 4
                e.bounds = node.bounds;
                e.states = node.states;
                if (node.value) e.value = cap_text(*node.value, kValueCap);
                out.push_back(std::move(e));
            }
        }
        for (const auto& child : node.children) self(self, child);
    };
    walk(walk, root);
    return out;
}

std::vector<UIElement> annotate(std::vector<UIElement> elements) {
    for (auto& e : elements) {
        std::string subject;
        if (!e.name.empty()) {
            subject = e.name;
        } else if (e.value && !e.value->empty()) {
            subject = *e.value;
        } else {
            subject = "this " + role_name(e.role);
        }
        e.usage = usage_verb(e.role) + " " + subject;
    }
    return elements;
}

namespace {

std::string render_element_line(const UIElement& e) {
    std::ostringstream os;
    Point c = e.bounds.center();
    os << "[" << e.id << "] " << role_name(e.role) << " '" << e.name << "' @(" << c.x << ","
       << c.y << ") state=";
    bool first = true;
    for (const auto& s : e.states) {
        if (!first) os << ",";
        os << s;
        first = false;
    }
    os << " usage=" << e.usage;
    return os.str();
}

}  // namespace

std::string render_context(const ContextSnapshot& snapshot, int char_budget) {
    if (char_budget < kMinRenderBudget) {
        throw BudgetTooSmall("char_budget " + std::to_string(char_budget) + " < " +
                             std::to_string(kMinRenderBudget));
    }
    std::ostringstream header;
    header << "screen " << snapshot.screen.width << "x" << snapshot.screen.height << " step "
           << snapshot.step;

    std::vector<std::string> lines;
    lines.reserve(snapshot.elements.size());
    for (const auto& e : snapshot.elements) lines.push_back(render_element_line(e));

    auto marker = [](std::size_t omitted) {
        return "[+" + std::to_string(omitted) + " more elements]";
    };

    // Longest prefix of whole lines that fits, marker included when truncated.
    const std::size_t budget = static_cast<std::size_t>(char_budget);
    std::size_t base = header.str().size();
    std::size_t n = lines.size();
    std::size_t best = 0;
    std::size_t acc = base;
    std::vector<std::size_t> prefix(n + 1, base);
    for (std::size_t i = 0; i < n; ++i) {
        acc += 1 + lines[i].size();  // newline + line
        prefix[i + 1] = acc;
    }
    for (std::size_t k = n;; --k) {
        std::size_t len = prefix[k];
        if (k < n) len += 1 + marker(n - k).size();
        if (len <= budget) {
            best = k;
            break;
        }
        if (k == 0) break;  // header alone exceeds budget only below kMinRenderBudget
    }

    std::string out = header.str();
    for (std::size_t i = 0; i < best; ++i) {
        out += "\n";
        out += lines[i];
    }
    if (best < n) {
        out += "\n";
        out += marker(n - best);
    }
    return out;
}

nlohmann::json element_to_json(const UIElement& e) {
    json j = {
        {"id", e.id},
        {"role", role_name(e.role)},
        {"name", e.name},
        {"usage", e.usage},
        {"bounds", {{"x", e.bounds.x}, {"y", e.bounds.y}, {"w", e.bounds.w}, {"h", e.bounds.h}}},
        {"states", e.states},
    };
    if (e.value) j["value"] = *e.value;
    return j;
}

nlohmann::json snapshot_to_json(const ContextSnapshot& s) {
    json elems = json::array();
    for (const auto& e : s.elements) elems.push_back(element_to_json(e));
    return json{
        {"step", s.step},
        {"screen", {{"width", s.screen.width}, {"height", s.screen.height}}},
        {"screenshot_hash", hash_hex(s.screenshot_hash)},
        {"elements", std::move(elems)},
        {"system_info", s.system_info},
        {"captured_at", s.captured_at},
    };
}

std::uint64_t snapshot_hash(const ContextSnapshot& s) {
    return fnv1a64(snapshot_to_json(s).dump());
}

}  // namespace litecua::ctx
