#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "litecua/common/geometry.hpp"

namespace litecua::sim {

enum class WidgetRole {
    kButton,
    kTextField,
    kCheckbox,
    kLabel,
    kScrollbar,
    kListItem,
    kMenuItem,
};

// Scroll range attached to a scrollbar (implicitly) or any other widget that
// declares one. `value` is the initial offset; `step` is offset units per
// wheel notch.
struct ScrollSpec {
    int min = 0;
    int max = 100;
    int value = 0;
    int step = 1;
    bool horizontal = false;
    bool operator==(const ScrollSpec&) const = default;
};

// One declared on_press effect. `target` is a widget id for toggle/focus/
// set_value and a window title for open_window/close_window.
struct EffectSpec {
    enum class Kind { kToggle, kFocus, kOpenWindow, kCloseWindow, kSetValue };
    Kind kind = Kind::kToggle;
    std::string target;
    std::string value;  // set_value only
    bool operator==(const EffectSpec&) const = default;
};

struct WidgetSpec {
    std::string id;
    WidgetRole role = WidgetRole::kButton;
    std::string name;
    Rect bounds;  // absolute screen coordinates
    std::string value;
    bool checked = false;
    std::optional<ScrollSpec> scroll;
    std::vector<EffectSpec> on_press;
    bool operator==(const WidgetSpec&) const = default;
};

struct WindowSpec {
    std::string title;
    Rect bounds;
    bool visible = true;
    std::vector<WidgetSpec> widgets;
    bool operator==(const WindowSpec&) const = default;
};

// A full scene document. Windows are listed back-to-front: the last window in
// the list is topmost for hit testing.
struct SceneSpec {
    std::string scene_id;
    Size screen;
    std::vector<WindowSpec> windows;
    std::optional<std::string> initial_focus;  // widget id
    std::map<std::string, std::string> system_info;
    bool operator==(const SceneSpec&) const = default;
};

class InvalidScene : public std::runtime_error {
public:
    explicit InvalidScene(const std::string& what) : std::runtime_error(what) {}
};

const std::string& widget_role_name(WidgetRole role);        // "button", "text_field", ...
WidgetRole widget_role_from_name(const std::string& name);   // throws InvalidScene
const std::string& widget_role_a11y(WidgetRole role);        // "push-button", "text", ...

// Checks the cross-cutting rules: unique widget ids, unique window titles,
// windows inside the screen, widget bounds nested inside their window, effect
// targets that exist. Throws InvalidScene naming the first violated rule.
void validate_scene(const SceneSpec& spec);

// Parses a scene document and runs validate_scene on the result.
SceneSpec parse_scene(const nlohmann::json& doc);
SceneSpec parse_scene_text(const std::string& text);

nlohmann::json scene_to_json(const SceneSpec& spec);

// Looks a widget up by id across all windows; nullptr when absent.
const WidgetSpec* find_widget(const SceneSpec& spec, const std::string& id);
const WindowSpec* find_window(const SceneSpec& spec, const std::string& title);
// Title of the window holding `id`; empty when absent.
std::string window_of_widget(const SceneSpec& spec, const std::string& id);

}  // namespace litecua::sim
