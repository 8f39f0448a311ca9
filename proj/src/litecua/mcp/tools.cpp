#include "litecua/mcp/tools.hpp"

#include <algorithm>

#include "litecua/actions/action.hpp"
#include "litecua/actions/schema.hpp"
#include "litecua/agent/agent.hpp"
#include "litecua/common/base64.hpp"
#include "litecua/common/hash.hpp"
#include "litecua/ctx/context.hpp"

namespace litecua::mcp {

using nlohmann::json;

ToolPart text_part(std::string text) {
    ToolPart p;
    p.kind = ToolPart::Kind::kText;
    p.text = std::move(text);
    return p;
}

ToolPart image_part(std::string base64, std::string media_type) {
    ToolPart p;
    p.kind = ToolPart::Kind::kImage;
    p.data = std::move(base64);
    p.media_type = std::move(media_type);
    return p;
}

ToolPart structured_part(json value) {
    ToolPart p;
    p.kind = ToolPart::Kind::kStructured;
    p.structured = std::move(value);
    return p;
}

ToolResult error_result(const std::string& message) {
    ToolResult r;
    r.is_error = true;
    r.content.push_back(text_part(message));
    return r;
}

json part_to_json(const ToolPart& part) {
    switch (part.kind) {
        case ToolPart::Kind::kText:
            return {{"type", "text"}, {"text", part.text}};
        case ToolPart::Kind::kImage:
            return {{"type", "image"}, {"data", part.data}, {"mimeType", part.media_type}};
        case ToolPart::Kind::kStructured:
            return {{"type", "structured"}, {"structured", part.structured}};
    }
    return nullptr;  // unreachable
}

json tool_result_to_json(const ToolResult& result) {
    json content = json::array();
    for (const ToolPart& part : result.content) content.push_back(part_to_json(part));
    return {{"content", std::move(content)}, {"isError", result.is_error}};
}

namespace {

json empty_object_schema() {
    return {{"type", "object"}, {"properties", json::object()}, {"additionalProperties", false}};
}

std::vector<ToolDescriptor> build_registry() {
    std::vector<ToolDescriptor> tools;
    tools.push_back({"a11y_tree",
                     "Read the current screen as a compacted table of interactable elements "
                     "with ids, roles, positions and usage hints.",
                     empty_object_schema()});
    tools.push_back({"screenshot", "Capture the current screen as a PNG image.",
                     empty_object_schema()});
    tools.push_back({"system_info", "Read system metadata (OS, installed application versions).",
                     empty_object_schema()});

    const std::map<std::string, std::string> action_descriptions{
        {"click", "Click an element by id, or a point, with the given button and count."},
        {"type", "Type text into the focused element, one keystroke at a time."},
        {"scroll", "Scroll by wheel notches in a direction, optionally over a target."},
        {"drag", "Press at one target, glide, and release at another."},
        {"wait", "Let simulated time pass without touching anything."},
        {"hotkey", "Press a chord of up to four keys, released in reverse order."},
    };
    for (const auto& [name, description] : action_descriptions)
        tools.push_back({name, description, actions::action_schema(name)});

    std::sort(tools.begin(), tools.end(),
              [](const ToolDescriptor& a, const ToolDescriptor& b) { return a.name < b.name; });
    return tools;
}

}  // namespace

const std::vector<ToolDescriptor>& tool_registry() {
    static const std::vector<ToolDescriptor> registry = build_registry();
    return registry;
}

const ToolDescriptor* find_tool(const std::string& name) {
    for (const ToolDescriptor& tool : tool_registry()) {
        if (tool.name == name) return &tool;
    }
    return nullptr;
}

json registry_to_json() {
    json tools = json::array();
    for (const ToolDescriptor& tool : tool_registry()) {
        tools.push_back({{"name", tool.name},
                         {"description", tool.description},
                         {"inputSchema", tool.input_schema}});
    }
    return tools;
}

json nest_system_info(const std::map<std::string, std::string>& flat) {
    json out = json::object();
    for (const auto& [key, value] : flat) {
        json* node = &out;
        std::size_t start = 0;
        for (std::size_t dot = key.find('.'); dot != std::string::npos;
             dot = key.find('.', start)) {
            const std::string head = key.substr(start, dot - start);
            if (!(*node)[head].is_object()) (*node)[head] = json::object();
            node = &(*node)[head];
            start = dot + 1;
        }
        (*node)[key.substr(start)] = value;
    }
    return out;
}

namespace {

ctx::ContextSnapshot snapshot_from(const vmc::RawObservation& obs) {
    return agent::perceive(obs);
}

ToolResult run_observation_tool(vmc::VmClient& vm, const std::string& name) {
    const vmc::RawObservation obs = vm.observe();
    ToolResult r;
    if (name == "screenshot") {
        r.content.push_back(image_part(base64_encode(obs.screenshot), "image/png"));
    } else if (name == "a11y_tree") {
        r.content.push_back(structured_part(ctx::snapshot_to_json(snapshot_from(obs))));
    } else {
        r.content.push_back(structured_part(nest_system_info(obs.system_info)));
    }
    return r;
}

ToolResult run_action_tool(vmc::VmClient& vm, const std::string& name, const json& args) {
    const vmc::RawObservation obs = vm.observe();
    const ctx::ContextSnapshot snapshot = snapshot_from(obs);

    json doc = args;
    doc["action"] = name;
    std::vector<actions::PrimitiveCommand> batch;
    try {
        const actions::SemanticAction parsed = actions::parse_action(doc);
        const actions::SemanticAction resolved =
            actions::resolve_targets(parsed, snapshot.elements, snapshot.screen);
        batch = actions::compile(resolved);
    } catch (const actions::UnknownAction& e) {
        return error_result(e.what());
    } catch (const actions::SchemaViolation& e) {
        return error_result(e.what());
    } catch (const actions::UnknownElement& e) {
        return error_result(e.what());
    } catch (const actions::OutOfBounds& e) {
        return error_result(e.what());
    }

    const vmc::ExecResult exec = vm.execute(batch);
    if (!exec.ok) {
        return error_result("refused at primitive " + std::to_string(exec.applied) + ": " +
                            exec.detail);
    }
    const vmc::RawObservation after = vm.observe();
    const std::uint64_t screen_hash = fnv1a64(std::string_view(
        reinterpret_cast<const char*>(after.screenshot.data()), after.screenshot.size()));
    ToolResult r;
    r.content.push_back(structured_part(
        json{{"ok", true}, {"detail", ""}, {"post_action_screen_hash", hash_hex(screen_hash)}}));
    return r;
}

}  // namespace

ToolResult call_tool(vmc::VmClient& vm, const std::string& name, const json& args) {
    const ToolDescriptor* tool = find_tool(name);
    if (tool == nullptr) throw UnknownTool(name);
    if (!args.is_object()) return error_result("arguments must be a JSON object");
    if (auto violation = actions::schema_violation(tool->input_schema, args))
        return error_result(*violation);

    try {
        if (name == "a11y_tree" || name == "screenshot" || name == "system_info")
            return run_observation_tool(vm, name);
        return run_action_tool(vm, name, args);
    } catch (const ctx::MalformedTree& e) {
        return error_result(std::string("malformed accessibility tree: ") + e.what());
    } catch (const vmc::Unreachable& e) {
        return error_result(std::string("desktop unreachable: ") + e.what());
    } catch (const vmc::TornObservation& e) {
        return error_result(e.what());
    } catch (const vmc::ProtocolError& e) {
        return error_result(e.what());
    }
}

}  // namespace litecua::mcp
