#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "litecua/common/geometry.hpp"
#include "litecua/ctx/context.hpp"

namespace litecua::actions {

enum class MouseButton { kLeft, kRight, kMiddle };
enum class ScrollDirection { kUp, kDown, kLeft, kRight };

const std::string& button_name(MouseButton b);
MouseButton button_from_name(const std::string& name);
const std::string& direction_name(ScrollDirection d);

struct ElementRef {
    int element_id = 0;
    bool operator==(const ElementRef&) const = default;
};
using Target = std::variant<ElementRef, Point>;

struct ClickAction {
    Target target;
    MouseButton button = MouseButton::kLeft;
    int count = 1;  // 1 or 2
};
struct TypeAction {
    std::string text;  // <= 4096 typeable ASCII chars
};
struct ScrollAction {
    std::optional<Target> target;
    ScrollDirection direction = ScrollDirection::kDown;
    int amount = 1;  // notches, >= 1
};
struct DragAction {
    Target from;
    Target to;
};
struct WaitAction {
    double seconds = 0;  // 0..30
};
struct HotkeyAction {
    std::vector<std::string> keys;  // 1..4 key names, pressed in order
};
struct DoneAction {};
struct FailAction {
    std::string reason;
};

using SemanticAction = std::variant<ClickAction, TypeAction, ScrollAction, DragAction,
                                    WaitAction, HotkeyAction, DoneAction, FailAction>;

// Low-level GUI control signals.
struct MoveTo {
    int x = 0;
    int y = 0;
    bool operator==(const MoveTo&) const = default;
};
struct ButtonDown {
    MouseButton button = MouseButton::kLeft;
    bool operator==(const ButtonDown&) const = default;
};
struct ButtonUp {
    MouseButton button = MouseButton::kLeft;
    bool operator==(const ButtonUp&) const = default;
};
struct KeyDown {
    std::string key;
    bool operator==(const KeyDown&) const = default;
};
struct KeyUp {
    std::string key;
    bool operator==(const KeyUp&) const = default;
};
struct Wheel {
    int dx = 0;
    int dy = 0;
    bool operator==(const Wheel&) const = default;
};
struct SleepMs {
    std::int64_t ms = 0;
    bool operator==(const SleepMs&) const = default;
};

using PrimitiveCommand =
    std::variant<MoveTo, ButtonDown, ButtonUp, KeyDown, KeyUp, Wheel, SleepMs>;

class UnknownAction : public std::runtime_error {
public:
    explicit UnknownAction(const std::string& what) : std::runtime_error(what) {}
};
class SchemaViolation : public std::runtime_error {
public:
    explicit SchemaViolation(const std::string& what) : std::runtime_error(what) {}
};
class UnknownElement : public std::runtime_error {
public:
    int element_id;
    explicit UnknownElement(int id)
        : std::runtime_error("unknown element id " + std::to_string(id)), element_id(id) {}
};
class OutOfBounds : public std::runtime_error {
public:
    Point point;
    OutOfBounds(Point p, Size screen)
        : std::runtime_error("point (" + std::to_string(p.x) + "," + std::to_string(p.y) +
                             ") outside " + std::to_string(screen.width) + "x" +
                             std::to_string(screen.height) + " screen"),
          point(p) {}
};
class UnresolvedTarget : public std::logic_error {
public:
    explicit UnresolvedTarget(const std::string& what) : std::logic_error(what) {}
};

inline constexpr std::size_t kMaxTypeText = 4096;
inline constexpr std::size_t kMaxHotkeyKeys = 4;
inline constexpr double kMaxWaitSeconds = 30.0;
inline constexpr std::int64_t kDoubleClickGapMs = 80;
inline constexpr int kDragSegments = 8;

// Action names in registry order.
const std::vector<std::string>& action_names();

// Argument schema for one action, as published through the tool registry.
// The "action" discriminant itself is not part of the schema.
const nlohmann::json& action_schema(const std::string& name);

// Parses {"action": <name>, ...args}; validates args against the schema plus
// the checks schemas cannot express (typeable text, key names).
SemanticAction parse_action(const nlohmann::json& doc);

std::string action_name(const SemanticAction& action);
bool is_terminal(const SemanticAction& action);

// Canonical JSON form with defaults materialized; parse_action(action_to_json(a))
// round-trips.
nlohmann::json action_to_json(const SemanticAction& action);

// Replaces every ElementRef with the element's bounds center clamped into the
// screen; validates explicit points against the screen rectangle.
SemanticAction resolve_targets(const SemanticAction& action,
                               const std::vector<ctx::UIElement>& elements, Size screen);

// Expands a fully resolved, non-terminal action into primitive commands.
std::vector<PrimitiveCommand> compile(const SemanticAction& action);

nlohmann::json primitive_to_json(const PrimitiveCommand& cmd);
PrimitiveCommand primitive_from_json(const nlohmann::json& doc);

std::string primitive_name(const PrimitiveCommand& cmd);

}  // namespace litecua::actions
