#include "litecua/actions/action.hpp"

#include <cmath>
#include <map>

#include "litecua/actions/keys.hpp"
#include "litecua/actions/schema.hpp"

namespace litecua::actions {

using nlohmann::json;

const std::string& button_name(MouseButton b) {
    static const std::string left = "left", right = "right", middle = "middle";
    switch (b) {
        case MouseButton::kLeft: return left;
        case MouseButton::kRight: return right;
        case MouseButton::kMiddle: return middle;
    }
    return left;
}

MouseButton button_from_name(const std::string& name) {
    if (name == "left") return MouseButton::kLeft;
    if (name == "right") return MouseButton::kRight;
    if (name == "middle") return MouseButton::kMiddle;
    throw std::invalid_argument("unknown mouse button '" + name + "'");
}

const std::string& direction_name(ScrollDirection d) {
    static const std::string up = "up", down = "down", left = "left", right = "right";
    switch (d) {
        case ScrollDirection::kUp: return up;
        case ScrollDirection::kDown: return down;
        case ScrollDirection::kLeft: return left;
        case ScrollDirection::kRight: return right;
    }
    return down;
}

namespace {

ScrollDirection direction_from_name(const std::string& name) {
    if (name == "up") return ScrollDirection::kUp;
    if (name == "down") return ScrollDirection::kDown;
    if (name == "left") return ScrollDirection::kLeft;
    if (name == "right") return ScrollDirection::kRight;
    throw std::invalid_argument("unknown scroll direction '" + name + "'");
}

json target_object_schema() {
    return json{
        {"type", "object"},
        {"properties",
         {{"element_id", {{"type", "integer"}, {"minimum", 0}}},
          {"x", {{"type", "integer"}}},
          {"y", {{"type", "integer"}}}}},
        {"additionalProperties", false},
        {"oneOf", json::array({json{{"required", json::array({"element_id"})}},
                               json{{"required", json::array({"x", "y"})}}})},
    };
}

const std::map<std::string, json>& schemas() {
    static const std::map<std::string, json> map = [] {
        std::map<std::string, json> m;
        m["click"] = json{
            {"type", "object"},
            {"properties",
             {{"element_id", {{"type", "integer"}, {"minimum", 0}}},
              {"x", {{"type", "integer"}}},
              {"y", {{"type", "integer"}}},
              {"button", {{"enum", json::array({"left", "right", "middle"})}}},
              {"count", {{"enum", json::array({1, 2})}}}}},
            {"additionalProperties", false},
            {"oneOf", json::array({json{{"required", json::array({"element_id"})}},
                                   json{{"required", json::array({"x", "y"})}}})},
        };
        m["type"] = json{
            {"type", "object"},
            {"properties",
             {{"text", {{"type", "string"}, {"maxLength", kMaxTypeText}}}}},
            {"required", json::array({"text"})},
            {"additionalProperties", false},
        };
        m["scroll"] = json{
            {"type", "object"},
            {"properties",
             {{"direction", {{"enum", json::array({"up", "down", "left", "right"})}}},
              {"amount", {{"type", "integer"}, {"minimum", 1}}},
              {"element_id", {{"type", "integer"}, {"minimum", 0}}},
              {"x", {{"type", "integer"}}},
              {"y", {{"type", "integer"}}}}},
            {"required", json::array({"direction"})},
            {"additionalProperties", false},
        };
        m["drag"] = json{
            {"type", "object"},
            {"properties", {{"from", target_object_schema()}, {"to", target_object_schema()}}},
            {"required", json::array({"from", "to"})},
            {"additionalProperties", false},
        };
        m["wait"] = json{
            {"type", "object"},
            {"properties",
             {{"seconds", {{"type", "number"}, {"minimum", 0}, {"maximum", kMaxWaitSeconds}}}}},
            {"required", json::array({"seconds"})},
            {"additionalProperties", false},
        };
        m["hotkey"] = json{
            {"type", "object"},
            {"properties",
             {{"keys",
               {{"type", "array"},
                {"items", {{"type", "string"}, {"minLength", 1}}},
                {"minItems", 1},
                {"maxItems", kMaxHotkeyKeys}}}}},
            {"required", json::array({"keys"})},
            {"additionalProperties", false},
        };
        m["done"] = json{{"type", "object"}, {"additionalProperties", false}};
        m["fail"] = json{
            {"type", "object"},
            {"properties", {{"reason", {{"type", "string"}}}}},
            {"additionalProperties", false},
        };
        return m;
    }();
    return map;
}

Target target_from_fields(const json& o) {
    if (o.contains("element_id")) return ElementRef{o["element_id"].get<int>()};
    return Point{o["x"].get<int>(), o["y"].get<int>()};
}

void put_target_fields(json& o, const Target& t) {
    if (const auto* ref = std::get_if<ElementRef>(&t)) {
        o["element_id"] = ref->element_id;
    } else {
        const auto& p = std::get<Point>(t);
        o["x"] = p.x;
        o["y"] = p.y;
    }
}

}  // namespace

const std::vector<std::string>& action_names() {
    static const std::vector<std::string> names = {"click", "type",   "scroll", "drag",
                                                   "wait",  "hotkey", "done",   "fail"};
    return names;
}

const json& action_schema(const std::string& name) {
    auto it = schemas().find(name);
    if (it == schemas().end()) throw UnknownAction("unknown action '" + name + "'");
    return it->second;
}

SemanticAction parse_action(const json& doc) {
    if (!doc.is_object() || !doc.contains("action") || !doc["action"].is_string()) {
        throw SchemaViolation("$.action: required string field");
    }
    const std::string name = doc["action"].get<std::string>();
    auto it = schemas().find(name);
    if (it == schemas().end()) throw UnknownAction("unknown action '" + name + "'");

    json args = doc;
    args.erase("action");
    if (auto err = schema_violation(it->second, args)) throw SchemaViolation(*err);

    if (name == "click") {
        ClickAction a;
        a.target = target_from_fields(args);
        a.button = button_from_name(args.value("button", "left"));
        a.count = args.value("count", 1);
        return a;
    }
    if (name == "type") {
        TypeAction a;
        a.text = args["text"].get<std::string>();
        for (std::size_t i = 0; i < a.text.size(); ++i) {
            if (!is_typeable(a.text[i])) {
                throw SchemaViolation("$.text: non-typeable character at index " +
                                      std::to_string(i));
            }
        }
        return a;
    }
    if (name == "scroll") {
        ScrollAction a;
        a.direction = direction_from_name(args["direction"].get<std::string>());
        a.amount = args.value("amount", 1);
        bool has_elem = args.contains("element_id");
        bool has_x = args.contains("x"), has_y = args.contains("y");
        if (has_elem && (has_x || has_y)) {
            throw SchemaViolation("$: element_id and x/y are mutually exclusive");
        }
        if (has_x != has_y) throw SchemaViolation("$: x and y must be given together");
        if (has_elem || has_x) a.target = target_from_fields(args);
        return a;
    }
    if (name == "drag") {
        return DragAction{target_from_fields(args["from"]), target_from_fields(args["to"])};
    }
    if (name == "wait") {
        return WaitAction{args["seconds"].get<double>()};
    }
    if (name == "hotkey") {
        HotkeyAction a;
        for (const auto& k : args["keys"]) {
            std::string key = k.get<std::string>();
            if (!is_valid_key_name(key)) {
                throw SchemaViolation("$.keys: unknown key name '" + key + "'");
            }
            for (const auto& seen : a.keys) {
                if (seen == key) throw SchemaViolation("$.keys: duplicate key '" + key + "'");
            }
            a.keys.push_back(std::move(key));
        }
        return a;
    }
    if (name == "done") return DoneAction{};
    return FailAction{args.value("reason", "")};
}

std::string action_name(const SemanticAction& action) {
    return std::visit(
        [](const auto& a) -> std::string {
            using T = std::decay_t<decltype(a)>;
            if constexpr (std::is_same_v<T, ClickAction>) return "click";
            else if constexpr (std::is_same_v<T, TypeAction>) return "type";
            else if constexpr (std::is_same_v<T, ScrollAction>) return "scroll";
            else if constexpr (std::is_same_v<T, DragAction>) return "drag";
            else if constexpr (std::is_same_v<T, WaitAction>) return "wait";
            else if constexpr (std::is_same_v<T, HotkeyAction>) return "hotkey";
            else if constexpr (std::is_same_v<T, DoneAction>) return "done";
            else return "fail";
        },
        action);
}

bool is_terminal(const SemanticAction& action) {
    return std::holds_alternative<DoneAction>(action) || std::holds_alternative<FailAction>(action);
}

json action_to_json(const SemanticAction& action) {
    json out;
    out["action"] = action_name(action);
    std::visit(
        [&](const auto& a) {
            using T = std::decay_t<decltype(a)>;
            if constexpr (std::is_same_v<T, ClickAction>) {
                put_target_fields(out, a.target);
                out["button"] = button_name(a.button);
                out["count"] = a.count;
            } else if constexpr (std::is_same_v<T, TypeAction>) {
                out["text"] = a.text;
            } else if constexpr (std::is_same_v<T, ScrollAction>) {
                out["direction"] = direction_name(a.direction);
                out["amount"] = a.amount;
                if (a.target) put_target_fields(out, *a.target);
            } else if constexpr (std::is_same_v<T, DragAction>) {
                json from = json::object(), to = json::object();
                put_target_fields(from, a.from);
                put_target_fields(to, a.to);
                out["from"] = std::move(from);
                out["to"] = std::move(to);
            } else if constexpr (std::is_same_v<T, WaitAction>) {
                out["seconds"] = a.seconds;
            } else if constexpr (std::is_same_v<T, HotkeyAction>) {
                out["keys"] = a.keys;
            } else if constexpr (std::is_same_v<T, FailAction>) {
                out["reason"] = a.reason;
            }
        },
        action);
    return out;
}

namespace {

Point resolve_one(const Target& target, const std::vector<ctx::UIElement>& elements,
                  Size screen) {
    if (const auto* ref = std::get_if<ElementRef>(&target)) {
        for (const auto& e : elements) {
            if (e.id == ref->element_id) return clamp_to_screen(e.bounds.center(), screen);
        }
        throw UnknownElement(ref->element_id);
    }
    Point p = std::get<Point>(target);
    if (!in_screen(p, screen)) throw OutOfBounds(p, screen);
    return p;
}

}  // namespace

SemanticAction resolve_targets(const SemanticAction& action,
                               const std::vector<ctx::UIElement>& elements, Size screen) {
    SemanticAction out = action;
    std::visit(
        [&](auto& a) {
            using T = std::decay_t<decltype(a)>;
            if constexpr (std::is_same_v<T, ClickAction>) {
                a.target = resolve_one(a.target, elements, screen);
            } else if constexpr (std::is_same_v<T, ScrollAction>) {
                if (a.target) a.target = resolve_one(*a.target, elements, screen);
            } else if constexpr (std::is_same_v<T, DragAction>) {
                a.from = resolve_one(a.from, elements, screen);
                a.to = resolve_one(a.to, elements, screen);
            }
        },
        out);
    return out;
}

namespace {

Point point_of(const Target& t, const char* what) {
    if (const auto* p = std::get_if<Point>(&t)) return *p;
    throw UnresolvedTarget(std::string("unresolved element reference in ") + what);
}

void compile_click(const ClickAction& a, std::vector<PrimitiveCommand>& out) {
    Point p = point_of(a.target, "click");
    out.push_back(MoveTo{p.x, p.y});
    out.push_back(ButtonDown{a.button});
    out.push_back(ButtonUp{a.button});
    if (a.count == 2) {
        out.push_back(SleepMs{kDoubleClickGapMs});
        out.push_back(ButtonDown{a.button});
        out.push_back(ButtonUp{a.button});
    }
}

void compile_type(const TypeAction& a, std::vector<PrimitiveCommand>& out) {
    for (char c : a.text) {
        auto ks = keystroke_for_char(c);
        if (!ks) throw SchemaViolation("non-typeable character in type text");
        if (ks->shifted) {
            out.push_back(KeyDown{"shift"});
            out.push_back(KeyDown{ks->key});
            out.push_back(KeyUp{ks->key});
            out.push_back(KeyUp{"shift"});
        } else {
            out.push_back(KeyDown{ks->key});
            out.push_back(KeyUp{ks->key});
        }
    }
}

void compile_scroll(const ScrollAction& a, std::vector<PrimitiveCommand>& out) {
    if (a.target) {
        Point p = point_of(*a.target, "scroll");
        out.push_back(MoveTo{p.x, p.y});
    }
    int n = a.amount;
    switch (a.direction) {
        case ScrollDirection::kUp: out.push_back(Wheel{0, n}); break;
        case ScrollDirection::kDown: out.push_back(Wheel{0, -n}); break;
        case ScrollDirection::kLeft: out.push_back(Wheel{-n, 0}); break;
        case ScrollDirection::kRight: out.push_back(Wheel{n, 0}); break;
    }
}

void compile_drag(const DragAction& a, std::vector<PrimitiveCommand>& out) {
    Point from = point_of(a.from, "drag");
    Point to = point_of(a.to, "drag");
    out.push_back(MoveTo{from.x, from.y});
    out.push_back(ButtonDown{MouseButton::kLeft});
    for (int i = 1; i <= kDragSegments; ++i) {
        // Equally spaced points on the segment, final point lands exactly on `to`.
        double t = static_cast<double>(i) / kDragSegments;
        int x = static_cast<int>(std::llround(from.x + t * (to.x - from.x)));
        int y = static_cast<int>(std::llround(from.y + t * (to.y - from.y)));
        out.push_back(MoveTo{x, y});
    }
    out.push_back(ButtonUp{MouseButton::kLeft});
}

}  // namespace

std::vector<PrimitiveCommand> compile(const SemanticAction& action) {
    if (is_terminal(action)) {
        throw UnresolvedTarget("terminal action '" + action_name(action) +
                               "' never reaches the compiler");
    }
    std::vector<PrimitiveCommand> out;
    std::visit(
        [&](const auto& a) {
            using T = std::decay_t<decltype(a)>;
            if constexpr (std::is_same_v<T, ClickAction>) {
                compile_click(a, out);
            } else if constexpr (std::is_same_v<T, TypeAction>) {
                compile_type(a, out);
            } else if constexpr (std::is_same_v<T, ScrollAction>) {
                compile_scroll(a, out);
            } else if constexpr (std::is_same_v<T, DragAction>) {
                compile_drag(a, out);
            } else if constexpr (std::is_same_v<T, WaitAction>) {
                out.push_back(SleepMs{std::llround(a.seconds * 1000.0)});
            } else if constexpr (std::is_same_v<T, HotkeyAction>) {
                for (const auto& k : a.keys) out.push_back(KeyDown{k});
                for (auto it = a.keys.rbegin(); it != a.keys.rend(); ++it) {
                    out.push_back(KeyUp{*it});
                }
            }
        },
        action);
    return out;
}

json primitive_to_json(const PrimitiveCommand& cmd) {
    return std::visit(
        [](const auto& c) -> json {
            using T = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<T, MoveTo>) {
                return {{"cmd", "move_to"}, {"x", c.x}, {"y", c.y}};
            } else if constexpr (std::is_same_v<T, ButtonDown>) {
                return {{"cmd", "button_down"}, {"button", button_name(c.button)}};
            } else if constexpr (std::is_same_v<T, ButtonUp>) {
                return {{"cmd", "button_up"}, {"button", button_name(c.button)}};
            } else if constexpr (std::is_same_v<T, KeyDown>) {
                return {{"cmd", "key_down"}, {"key", c.key}};
            } else if constexpr (std::is_same_v<T, KeyUp>) {
                return {{"cmd", "key_up"}, {"key", c.key}};
            } else if constexpr (std::is_same_v<T, Wheel>) {
                return {{"cmd", "wheel"}, {"dx", c.dx}, {"dy", c.dy}};
            } else {
                return {{"cmd", "sleep"}, {"ms", c.ms}};
            }
        },
        cmd);
}

PrimitiveCommand primitive_from_json(const json& doc) {
    if (!doc.is_object() || !doc.contains("cmd") || !doc["cmd"].is_string()) {
        throw std::invalid_argument("primitive command needs a 'cmd' field");
    }
    const std::string cmd = doc["cmd"].get<std::string>();
    try {
        if (cmd == "move_to") return MoveTo{doc.at("x").get<int>(), doc.at("y").get<int>()};
        if (cmd == "button_down") {
            return ButtonDown{button_from_name(doc.at("button").get<std::string>())};
        }
        if (cmd == "button_up") {
            return ButtonUp{button_from_name(doc.at("button").get<std::string>())};
        }
        if (cmd == "key_down") return KeyDown{doc.at("key").get<std::string>()};
        if (cmd == "key_up") return KeyUp{doc.at("key").get<std::string>()};
        if (cmd == "wheel") return Wheel{doc.at("dx").get<int>(), doc.at("dy").get<int>()};
        if (cmd == "sleep") {
            auto ms = doc.at("ms").get<std::int64_t>();
            if (ms < 0) throw std::invalid_argument("sleep ms must be >= 0");
            return SleepMs{ms};
        }
    } catch (const json::exception& e) {
        throw std::invalid_argument("malformed '" + cmd + "' command: " + e.what());
    }
    throw std::invalid_argument("unknown primitive command '" + cmd + "'");
}

std::string primitive_name(const PrimitiveCommand& cmd) {
    return primitive_to_json(cmd)["cmd"].get<std::string>();
}

}  // namespace litecua::actions
