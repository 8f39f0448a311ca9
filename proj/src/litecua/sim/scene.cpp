#include "litecua/sim/scene.hpp"

#include <array>
#include <set>

namespace litecua::sim {

using nlohmann::json;

namespace {

struct RoleEntry {
    WidgetRole role;
    const char* name;   // scene-file spelling
    const char* a11y;   // raw accessibility role
};

constexpr std::array<RoleEntry, 7> kRoles{{
    {WidgetRole::kButton, "button", "push-button"},
    {WidgetRole::kTextField, "text_field", "text"},
    {WidgetRole::kCheckbox, "checkbox", "check-box"},
    {WidgetRole::kLabel, "label", "label"},
    {WidgetRole::kScrollbar, "scrollbar", "scroll-bar"},
    {WidgetRole::kListItem, "list_item", "list-item"},
    {WidgetRole::kMenuItem, "menu_item", "menu-item"},
}};

[[noreturn]] void fail(const std::string& what) { throw InvalidScene(what); }

const json* opt_field(const json& obj, const char* key) {
    auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
}

std::string req_string(const json& obj, const char* key, const std::string& where) {
    const json* f = opt_field(obj, key);
    if (f == nullptr || !f->is_string()) fail(where + ": missing string field '" + key + "'");
    return f->get<std::string>();
}

int req_int(const json& obj, const char* key, const std::string& where) {
    const json* f = opt_field(obj, key);
    if (f == nullptr || !f->is_number_integer()) fail(where + ": missing integer field '" + key + "'");
    return f->get<int>();
}

Rect parse_bounds(const json& obj, const std::string& where) {
    const json* f = opt_field(obj, "bounds");
    if (f == nullptr || !f->is_object()) fail(where + ": missing object field 'bounds'");
    Rect r{req_int(*f, "x", where), req_int(*f, "y", where), req_int(*f, "w", where),
           req_int(*f, "h", where)};
    if (r.w <= 0 || r.h <= 0) fail(where + ": bounds must have positive extent");
    return r;
}

ScrollSpec parse_scroll(const json& obj, const std::string& where) {
    ScrollSpec s;
    if (const json* f = opt_field(obj, "min")) s.min = f->get<int>();
    if (const json* f = opt_field(obj, "max")) s.max = f->get<int>();
    if (const json* f = opt_field(obj, "value")) s.value = f->get<int>();
    if (const json* f = opt_field(obj, "step")) s.step = f->get<int>();
    if (const json* f = opt_field(obj, "orientation")) {
        const std::string o = f->get<std::string>();
        if (o == "horizontal") {
            s.horizontal = true;
        } else if (o != "vertical") {
            fail(where + ": orientation must be vertical or horizontal");
        }
    }
    if (s.max < s.min) fail(where + ": scroll max below min");
    if (s.value < s.min || s.value > s.max) fail(where + ": scroll value outside [min,max]");
    if (s.step < 1) fail(where + ": scroll step must be >= 1");
    return s;
}

EffectSpec parse_effect(const json& obj, const std::string& where) {
    if (!obj.is_object()) fail(where + ": effect must be an object");
    const std::string kind = req_string(obj, "effect", where);
    EffectSpec e;
    if (kind == "toggle") {
        e.kind = EffectSpec::Kind::kToggle;
        e.target = req_string(obj, "target", where);
    } else if (kind == "focus") {
        e.kind = EffectSpec::Kind::kFocus;
        e.target = req_string(obj, "target", where);
    } else if (kind == "open_window") {
        e.kind = EffectSpec::Kind::kOpenWindow;
        e.target = req_string(obj, "window", where);
    } else if (kind == "close_window") {
        e.kind = EffectSpec::Kind::kCloseWindow;
        e.target = req_string(obj, "window", where);
    } else if (kind == "set_value") {
        e.kind = EffectSpec::Kind::kSetValue;
        e.target = req_string(obj, "target", where);
        e.value = req_string(obj, "value", where);
    } else {
        fail(where + ": unknown effect '" + kind + "'");
    }
    return e;
}

WidgetSpec parse_widget(const json& obj, const std::string& where) {
    if (!obj.is_object()) fail(where + ": widget must be an object");
    WidgetSpec w;
    w.id = req_string(obj, "id", where);
    if (w.id.empty()) fail(where + ": widget id must be non-empty");
    const std::string here = where + " widget '" + w.id + "'";
    w.role = widget_role_from_name(req_string(obj, "role", here));
    w.name = req_string(obj, "name", here);
    w.bounds = parse_bounds(obj, here);
    if (const json* f = opt_field(obj, "value")) w.value = f->get<std::string>();
    if (const json* f = opt_field(obj, "checked")) w.checked = f->get<bool>();
    if (const json* f = opt_field(obj, "scroll")) w.scroll = parse_scroll(*f, here);
    // A scrollbar always has a scroll range, declared or defaulted.
    if (w.role == WidgetRole::kScrollbar && !w.scroll.has_value()) {
        w.scroll = ScrollSpec{};
        w.scroll->horizontal = w.bounds.w > w.bounds.h;
    }
    if (const json* f = opt_field(obj, "on_press")) {
        if (!f->is_array()) fail(here + ": on_press must be an array");
        for (const json& e : *f) w.on_press.push_back(parse_effect(e, here));
    }
    return w;
}

}  // namespace

const std::string& widget_role_name(WidgetRole role) {
    static const std::array<std::string, kRoles.size()> names = [] {
        std::array<std::string, kRoles.size()> out;
        for (const RoleEntry& e : kRoles) out[static_cast<std::size_t>(e.role)] = e.name;
        return out;
    }();
    return names[static_cast<std::size_t>(role)];
}

WidgetRole widget_role_from_name(const std::string& name) {
    for (const RoleEntry& e : kRoles) {
        if (name == e.name) return e.role;
    }
    fail("unknown widget role '" + name + "'");
}

const std::string& widget_role_a11y(WidgetRole role) {
    static const std::array<std::string, kRoles.size()> names = [] {
        std::array<std::string, kRoles.size()> out;
        for (const RoleEntry& e : kRoles) out[static_cast<std::size_t>(e.role)] = e.a11y;
        return out;
    }();
    return names[static_cast<std::size_t>(role)];
}

SceneSpec parse_scene(const json& doc) {
    if (!doc.is_object()) fail("scene document must be an object");
    SceneSpec spec;
    spec.scene_id = req_string(doc, "scene_id", "scene");
    if (spec.scene_id.empty()) fail("scene: scene_id must be non-empty");

    const json* screen = opt_field(doc, "screen");
    if (screen == nullptr || !screen->is_object()) fail("scene: missing object field 'screen'");
    spec.screen = {req_int(*screen, "width", "screen"), req_int(*screen, "height", "screen")};
    if (spec.screen.width <= 0 || spec.screen.height <= 0)
        fail("scene: screen dimensions must be positive");

    if (const json* f = opt_field(doc, "system_info")) {
        if (!f->is_object()) fail("scene: system_info must be an object");
        for (auto it = f->begin(); it != f->end(); ++it) {
            if (!it.value().is_string()) fail("scene: system_info values must be strings");
            spec.system_info[it.key()] = it.value().get<std::string>();
        }
    }

    const json* windows = opt_field(doc, "windows");
    if (windows == nullptr || !windows->is_array()) fail("scene: missing array field 'windows'");
    for (const json& wj : *windows) {
        if (!wj.is_object()) fail("scene: window must be an object");
        WindowSpec win;
        win.title = req_string(wj, "title", "window");
        const std::string where = "window '" + win.title + "'";
        win.bounds = parse_bounds(wj, where);
        if (const json* f = opt_field(wj, "visible")) win.visible = f->get<bool>();
        if (const json* f = opt_field(wj, "widgets")) {
            if (!f->is_array()) fail(where + ": widgets must be an array");
            for (const json& widget : *f) win.widgets.push_back(parse_widget(widget, where));
        }
        spec.windows.push_back(std::move(win));
    }

    if (const json* f = opt_field(doc, "initial_focus")) {
        if (!f->is_string()) fail("scene: initial_focus must be a string");
        spec.initial_focus = f->get<std::string>();
    }

    validate_scene(spec);
    return spec;
}

void validate_scene(const SceneSpec& spec) {
    if (spec.scene_id.empty()) fail("scene: scene_id must be non-empty");
    if (spec.screen.width <= 0 || spec.screen.height <= 0)
        fail("scene: screen dimensions must be positive");
    // Checked after the whole document is read so the error always names the
    // first offender in document order.
    std::set<std::string> titles;
    std::set<std::string> ids;
    for (const WindowSpec& win : spec.windows) {
        if (!titles.insert(win.title).second)
            fail("duplicate window title '" + win.title + "'");
        if (win.bounds.x < 0 || win.bounds.y < 0 ||
            win.bounds.x + win.bounds.w > spec.screen.width ||
            win.bounds.y + win.bounds.h > spec.screen.height) {
            fail("window '" + win.title + "' bounds leave the screen");
        }
        for (const WidgetSpec& w : win.widgets) {
            if (!ids.insert(w.id).second) fail("duplicate widget id '" + w.id + "'");
            const Rect& b = w.bounds;
            const Rect& outer = win.bounds;
            if (b.x < outer.x || b.y < outer.y || b.x + b.w > outer.x + outer.w ||
                b.y + b.h > outer.y + outer.h) {
                fail("widget '" + w.id + "' bounds leave window '" + win.title + "'");
            }
        }
    }
    for (const WindowSpec& win : spec.windows) {
        for (const WidgetSpec& w : win.widgets) {
            for (const EffectSpec& e : w.on_press) {
                const bool window_target = e.kind == EffectSpec::Kind::kOpenWindow ||
                                           e.kind == EffectSpec::Kind::kCloseWindow;
                if (window_target) {
                    if (find_window(spec, e.target) == nullptr)
                        fail("widget '" + w.id + "' targets unknown window '" + e.target + "'");
                } else if (find_widget(spec, e.target) == nullptr) {
                    fail("widget '" + w.id + "' targets unknown widget '" + e.target + "'");
                }
            }
        }
    }
    if (spec.initial_focus.has_value() && find_widget(spec, *spec.initial_focus) == nullptr)
        fail("initial_focus names unknown widget '" + *spec.initial_focus + "'");
}

SceneSpec parse_scene_text(const std::string& text) {
    json doc = json::parse(text, nullptr, /*allow_exceptions=*/false);
    if (doc.is_discarded()) fail("scene document is not valid JSON");
    return parse_scene(doc);
}

json scene_to_json(const SceneSpec& spec) {
    json windows = json::array();
    for (const WindowSpec& win : spec.windows) {
        json widgets = json::array();
        for (const WidgetSpec& w : win.widgets) {
            json wj{{"id", w.id},
                    {"role", widget_role_name(w.role)},
                    {"name", w.name},
                    {"bounds", {{"x", w.bounds.x}, {"y", w.bounds.y}, {"w", w.bounds.w}, {"h", w.bounds.h}}}};
            if (!w.value.empty()) wj["value"] = w.value;
            if (w.checked) wj["checked"] = true;
            if (w.scroll.has_value()) {
                wj["scroll"] = {{"min", w.scroll->min},
                                {"max", w.scroll->max},
                                {"value", w.scroll->value},
                                {"step", w.scroll->step},
                                {"orientation", w.scroll->horizontal ? "horizontal" : "vertical"}};
            }
            if (!w.on_press.empty()) {
                json effects = json::array();
                for (const EffectSpec& e : w.on_press) {
                    switch (e.kind) {
                        case EffectSpec::Kind::kToggle:
                            effects.push_back({{"effect", "toggle"}, {"target", e.target}});
                            break;
                        case EffectSpec::Kind::kFocus:
                            effects.push_back({{"effect", "focus"}, {"target", e.target}});
                            break;
                        case EffectSpec::Kind::kOpenWindow:
                            effects.push_back({{"effect", "open_window"}, {"window", e.target}});
                            break;
                        case EffectSpec::Kind::kCloseWindow:
                            effects.push_back({{"effect", "close_window"}, {"window", e.target}});
                            break;
                        case EffectSpec::Kind::kSetValue:
                            effects.push_back({{"effect", "set_value"},
                                               {"target", e.target},
                                               {"value", e.value}});
                            break;
                    }
                }
                wj["on_press"] = std::move(effects);
            }
            widgets.push_back(std::move(wj));
        }
        windows.push_back({{"title", win.title},
                           {"bounds",
                            {{"x", win.bounds.x},
                             {"y", win.bounds.y},
                             {"w", win.bounds.w},
                             {"h", win.bounds.h}}},
                           {"visible", win.visible},
                           {"widgets", std::move(widgets)}});
    }
    json doc{{"scene_id", spec.scene_id},
             {"screen", {{"width", spec.screen.width}, {"height", spec.screen.height}}},
             {"windows", std::move(windows)}};
    if (!spec.system_info.empty()) doc["system_info"] = spec.system_info;
    if (spec.initial_focus.has_value()) doc["initial_focus"] = *spec.initial_focus;
    return doc;
}

const WidgetSpec* find_widget(const SceneSpec& spec, const std::string& id) {
    for (const WindowSpec& win : spec.windows) {
        for (const WidgetSpec& w : win.widgets) {
            if (w.id == id) return &w;
        }
    }
    return nullptr;
}

const WindowSpec* find_window(const SceneSpec& spec, const std::string& title) {
    for (const WindowSpec& win : spec.windows) {
        if (win.title == title) return &win;
    }
    return nullptr;
}

std::string window_of_widget(const SceneSpec& spec, const std::string& id) {
    for (const WindowSpec& win : spec.windows) {
        for (const WidgetSpec& w : win.widgets) {
            if (w.id == id) return win.title;
        }
    }
    return {};
}

}  // namespace litecua::sim
