#include "litecua/sim/desktop.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "litecua/common/hash.hpp"
#include "litecua/sim/keymap.hpp"

namespace litecua::sim {

using nlohmann::json;
namespace act = litecua::actions;

namespace {

bool window_visible(const DesktopState& state, const std::string& title) {
    auto it = state.window_visible.find(title);
    return it != state.window_visible.end() && it->second;
}

bool shift_held(const DesktopState& state) {
    return std::find(state.held_keys.begin(), state.held_keys.end(), "shift") !=
           state.held_keys.end();
}

void apply_effect(DesktopState& state, const EffectSpec& e) {
    switch (e.kind) {
        case EffectSpec::Kind::kToggle: {
            WidgetState& ws = state.widgets.at(e.target);
            ws.checked = !ws.checked;
            break;
        }
        case EffectSpec::Kind::kFocus:
            state.focus = e.target;
            break;
        case EffectSpec::Kind::kOpenWindow:
            state.window_visible.at(e.target) = true;
            break;
        case EffectSpec::Kind::kCloseWindow:
            state.window_visible.at(e.target) = false;
            // A widget in an unmapped window cannot keep keyboard focus.
            if (state.focus.has_value() &&
                window_of_widget(state.scene, *state.focus) == e.target) {
                state.focus.reset();
            }
            break;
        case EffectSpec::Kind::kSetValue:
            state.widgets.at(e.target).value = e.value;
            break;
    }
}

void do_click(DesktopState& state, const std::string& id) {
    const WidgetSpec* spec = find_widget(state.scene, id);
    WidgetState& ws = state.widgets.at(id);
    ws.pressed_count += 1;

    // A second click on the same widget inside the time window counts as a
    // double click and consumes it, so a triple click is a double plus a single.
    if (state.last_click_widget == id &&
        state.time_ms - state.last_click_ms <= kDoubleClickWindowMs) {
        ws.double_clicks += 1;
        state.last_click_widget.reset();
    } else {
        state.last_click_widget = id;
        state.last_click_ms = state.time_ms;
    }

    switch (spec->role) {
        case WidgetRole::kCheckbox:
            ws.checked = !ws.checked;
            break;
        case WidgetRole::kTextField:
            state.focus = id;
            break;
        case WidgetRole::kListItem: {
            // Single-selection list: selecting one item deselects its
            // siblings in the same window.
            const std::string home = window_of_widget(state.scene, id);
            const WindowSpec* win = find_window(state.scene, home);
            for (const WidgetSpec& sibling : win->widgets) {
                if (sibling.role == WidgetRole::kListItem)
                    state.widgets.at(sibling.id).selected = sibling.id == id;
            }
            break;
        }
        default:
            break;
    }
    for (const EffectSpec& e : spec->on_press) apply_effect(state, e);
}

void drag_scrollbar(DesktopState& state, const std::string& id) {
    const WidgetSpec* spec = find_widget(state.scene, id);
    const ScrollSpec& sc = *spec->scroll;
    const Rect& b = spec->bounds;
    // The release point along the track axis picks the offset proportionally;
    // releases past either end clamp to that end.
    double ratio = sc.horizontal
                       ? (state.pointer.x - b.x) / static_cast<double>(std::max(1, b.w - 1))
                       : (state.pointer.y - b.y) / static_cast<double>(std::max(1, b.h - 1));
    ratio = std::clamp(ratio, 0.0, 1.0);
    state.widgets.at(id).scroll_offset =
        sc.min + static_cast<int>(std::llround(ratio * (sc.max - sc.min)));
}

void on_button_down(DesktopState& state, act::MouseButton b) {
    state.held_buttons.insert(act::button_name(b));
    if (b == act::MouseButton::kLeft) {
        state.press_widget = widget_at(state, state.pointer);
        state.press_point = state.pointer;
    }
}

void on_button_up(DesktopState& state, act::MouseButton b) {
    state.held_buttons.erase(act::button_name(b));
    if (b != act::MouseButton::kLeft) return;
    const std::optional<std::string> pressed = std::exchange(state.press_widget, std::nullopt);
    if (!pressed.has_value()) return;
    const WidgetSpec* spec = find_widget(state.scene, *pressed);
    if (spec->role == WidgetRole::kScrollbar && state.pointer != state.press_point) {
        drag_scrollbar(state, *pressed);
    } else if (widget_at(state, state.pointer) == pressed) {
        do_click(state, *pressed);
    }
    // Pressed here, released somewhere else: the gesture fizzles.
}

void on_key_up(DesktopState& state, const std::string& key) {
    state.held_keys.erase(std::find(state.held_keys.begin(), state.held_keys.end(), key));
    if (is_modifier_key(key) || !state.focus.has_value()) return;
    const WidgetSpec* spec = find_widget(state.scene, *state.focus);
    if (spec->role != WidgetRole::kTextField) return;
    if (std::optional<char> c = char_for_key(key, shift_held(state)))
        state.widgets.at(*state.focus).value += *c;
}

void on_wheel(DesktopState& state, const act::Wheel& w) {
    const std::optional<std::string> over = widget_at(state, state.pointer);
    if (!over.has_value()) return;
    const WidgetSpec* spec = find_widget(state.scene, *over);
    if (!spec->scroll.has_value()) return;
    const ScrollSpec& sc = *spec->scroll;
    // Wheel-down (negative dy) moves the viewport down the content, i.e. the
    // offset grows; horizontal tracks follow dx directly.
    const int delta = sc.horizontal ? w.dx * sc.step : -w.dy * sc.step;
    WidgetState& ws = state.widgets.at(*over);
    ws.scroll_offset = std::clamp(ws.scroll_offset + delta, sc.min, sc.max);
}

}  // namespace

DesktopState load_scene(const SceneSpec& spec, std::uint64_t seed) {
    validate_scene(spec);
    DesktopState state;
    state.scene = spec;
    state.rng_seed = seed;
    for (const WindowSpec& win : spec.windows) {
        state.window_visible[win.title] = win.visible;
        for (const WidgetSpec& w : win.widgets) {
            WidgetState ws;
            ws.value = w.value;
            ws.checked = w.checked;
            if (w.scroll.has_value()) ws.scroll_offset = w.scroll->value;
            state.widgets[w.id] = std::move(ws);
        }
    }
    state.focus = spec.initial_focus;
    return state;
}

void step(DesktopState& state, const act::PrimitiveCommand& cmd) {
    // All refusals are decided before any mutation, so a rejected command
    // leaves the state byte-identical.
    if (const auto* m = std::get_if<act::MoveTo>(&cmd)) {
        if (!in_screen({m->x, m->y}, state.scene.screen)) {
            throw StepRejected("out_of_bounds",
                               "move_to (" + std::to_string(m->x) + "," + std::to_string(m->y) +
                                   ") outside " + std::to_string(state.scene.screen.width) + "x" +
                                   std::to_string(state.scene.screen.height) + " screen");
        }
    } else if (const auto* bd = std::get_if<act::ButtonDown>(&cmd)) {
        if (state.held_buttons.count(act::button_name(bd->button)) != 0)
            throw StepRejected("button_already_held",
                               "button_down: " + act::button_name(bd->button) + " already held");
    } else if (const auto* bu = std::get_if<act::ButtonUp>(&cmd)) {
        if (state.held_buttons.count(act::button_name(bu->button)) == 0)
            throw StepRejected("unmatched_release",
                               "button_up: " + act::button_name(bu->button) + " is not held");
    } else if (const auto* kd = std::get_if<act::KeyDown>(&cmd)) {
        if (std::find(state.held_keys.begin(), state.held_keys.end(), kd->key) !=
            state.held_keys.end())
            throw StepRejected("key_already_held", "key_down: '" + kd->key + "' already held");
    } else if (const auto* ku = std::get_if<act::KeyUp>(&cmd)) {
        if (std::find(state.held_keys.begin(), state.held_keys.end(), ku->key) ==
            state.held_keys.end())
            throw StepRejected("unmatched_release", "key_up: '" + ku->key + "' is not held");
    } else if (const auto* sl = std::get_if<act::SleepMs>(&cmd)) {
        if (sl->ms < 0) throw StepRejected("bad_command", "sleep: negative duration");
    }

    state.tick += 1;
    if (const auto* sl = std::get_if<act::SleepMs>(&cmd)) {
        state.time_ms += (sl->ms + kTimeStepMs - 1) / kTimeStepMs * kTimeStepMs;
    } else {
        state.time_ms += kTimeStepMs;
    }

    std::visit(
        [&state](const auto& c) {
            using T = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<T, act::MoveTo>) {
                state.pointer = {c.x, c.y};
            } else if constexpr (std::is_same_v<T, act::ButtonDown>) {
                on_button_down(state, c.button);
            } else if constexpr (std::is_same_v<T, act::ButtonUp>) {
                on_button_up(state, c.button);
            } else if constexpr (std::is_same_v<T, act::KeyDown>) {
                state.held_keys.push_back(c.key);
            } else if constexpr (std::is_same_v<T, act::KeyUp>) {
                on_key_up(state, c.key);
            } else if constexpr (std::is_same_v<T, act::Wheel>) {
                on_wheel(state, c);
            } else {
                static_assert(std::is_same_v<T, act::SleepMs>);
                // Clock handling above is all a sleep does.
            }
        },
        cmd);
}

std::optional<std::string> widget_at(const DesktopState& state, Point p) {
    // Back-to-front scene order means the last hit window is topmost; once a
    // visible window contains the point it swallows the hit even when no
    // widget is under it.
    for (auto win = state.scene.windows.rbegin(); win != state.scene.windows.rend(); ++win) {
        if (!window_visible(state, win->title) || !win->bounds.contains(p)) continue;
        for (auto w = win->widgets.rbegin(); w != win->widgets.rend(); ++w) {
            if (w->bounds.contains(p)) return w->id;
        }
        return std::nullopt;
    }
    return std::nullopt;
}

int visible_widget_count(const DesktopState& state) {
    int count = 0;
    for (const WindowSpec& win : state.scene.windows) {
        if (window_visible(state, win.title)) count += static_cast<int>(win.widgets.size());
    }
    return count;
}

json state_to_json(const DesktopState& state) {
    json widgets = json::object();
    for (const auto& [id, ws] : state.widgets) {
        widgets[id] = {{"value", ws.value},
                       {"checked", ws.checked},
                       {"scroll_offset", ws.scroll_offset},
                       {"pressed_count", ws.pressed_count},
                       {"selected", ws.selected},
                       {"double_clicks", ws.double_clicks}};
    }
    json windows = json::object();
    for (const auto& [title, visible] : state.window_visible) windows[title] = visible;
    // The full scene spec rides along so consumers of a state document can
    // resolve widget names and roles without loading scene files themselves.
    return {{"scene_id", state.scene.scene_id},
            {"scene", scene_to_json(state.scene)},
            {"seed", state.rng_seed},
            {"tick", state.tick},
            {"time_ms", state.time_ms},
            {"pointer", {{"x", state.pointer.x}, {"y", state.pointer.y}}},
            {"held_buttons", state.held_buttons},
            {"held_keys", state.held_keys},
            {"focus", state.focus.has_value() ? json(*state.focus) : json(nullptr)},
            {"windows", std::move(windows)},
            {"widgets", std::move(widgets)},
            {"gesture",
             {{"press_widget",
               state.press_widget.has_value() ? json(*state.press_widget) : json(nullptr)},
              {"press_point", {{"x", state.press_point.x}, {"y", state.press_point.y}}},
              {"last_click_widget", state.last_click_widget.has_value()
                                        ? json(*state.last_click_widget)
                                        : json(nullptr)},
              {"last_click_ms", state.last_click_ms}}}};
}

std::uint64_t state_hash(const DesktopState& state) {
    return fnv1a64(state_to_json(state).dump());
}

namespace {

json widget_node(const DesktopState& state, const WidgetSpec& w) {
    const WidgetState& ws = state.widgets.at(w.id);
    std::set<std::string> states{"enabled", "visible"};
    if (state.focus == w.id) states.insert("focused");
    if (ws.checked) states.insert("checked");
    if (ws.selected) states.insert("selected");
    json node{{"role", widget_role_a11y(w.role)},
              {"name", w.name},
              {"bounds", {{"x", w.bounds.x}, {"y", w.bounds.y}, {"w", w.bounds.w}, {"h", w.bounds.h}}},
              {"states", states},
              {"children", json::array()}};
    // Text fields always report a value (possibly empty); scrollbars report
    // their offset; anything else only when a value is actually set.
    if (w.role == WidgetRole::kTextField) {
        node["value"] = ws.value;
    } else if (w.role == WidgetRole::kScrollbar) {
        node["value"] = std::to_string(ws.scroll_offset);
    } else if (!ws.value.empty()) {
        node["value"] = ws.value;
    }
    return node;
}

}  // namespace

json a11y_json(const DesktopState& state) {
    json windows = json::array();
    for (const WindowSpec& win : state.scene.windows) {
        if (!window_visible(state, win.title)) continue;
        json widgets = json::array();
        for (const WidgetSpec& w : win.widgets) widgets.push_back(widget_node(state, w));
        windows.push_back(
            {{"role", "window"},
             {"name", win.title},
             {"bounds",
              {{"x", win.bounds.x}, {"y", win.bounds.y}, {"w", win.bounds.w}, {"h", win.bounds.h}}},
             {"states", {"enabled", "visible"}},
             {"children", std::move(widgets)}});
    }
    return {{"role", "frame"},
            {"name", state.scene.scene_id},
            {"bounds",
             {{"x", 0}, {"y", 0}, {"w", state.scene.screen.width}, {"h", state.scene.screen.height}}},
            {"states", {"enabled", "visible"}},
            {"children", std::move(windows)}};
}

std::string emit_a11y(const DesktopState& state) { return a11y_json(state).dump(); }

}  // namespace litecua::sim
