#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "litecua/vmc/client.hpp"

namespace litecua::mcp {

// A published tool: name, human description and the JSON schema its arguments
// are validated against before anything reaches the desktop.
struct ToolDescriptor {
    std::string name;  // [a-z][a-z0-9_]*
    std::string description;
    nlohmann::json input_schema;
};

struct ToolPart {
    enum class Kind { kText, kImage, kStructured };
    Kind kind = Kind::kText;
    std::string text;
    std::string data;        // base64, images only
    std::string media_type;  // images only
    nlohmann::json structured;
};

ToolPart text_part(std::string text);
ToolPart image_part(std::string base64, std::string media_type);
ToolPart structured_part(nlohmann::json value);

// Outcome of one tool call; content is never empty. Validation and downstream
// VM failures land here as is_error results, never as protocol errors.
struct ToolResult {
    bool is_error = false;
    std::vector<ToolPart> content;
};

ToolResult error_result(const std::string& message);

nlohmann::json part_to_json(const ToolPart& part);
nlohmann::json tool_result_to_json(const ToolResult& result);

class UnknownTool : public std::runtime_error {
public:
    explicit UnknownTool(const std::string& name)
        : std::runtime_error("unknown tool '" + name + "'") {}
};

// The fixed registry, sorted by name: a11y_tree, click, drag, hotkey,
// screenshot, scroll, system_info, type, wait.
const std::vector<ToolDescriptor>& tool_registry();
const ToolDescriptor* find_tool(const std::string& name);
nlohmann::json registry_to_json();

// Expands dotted keys into nested objects: {"apps.notepad": "1.0"} becomes
// {"apps": {"notepad": "1.0"}}. On a leaf/prefix collision the nested path
// wins.
nlohmann::json nest_system_info(const std::map<std::string, std::string>& flat);

// Runs one tool against the desktop behind `vm`. Observation tools read a
// fresh observation; action tools observe, validate the arguments, resolve
// targets against the element table, compile and execute. Throws UnknownTool
// for names outside the registry; every other failure is an is_error result.
ToolResult call_tool(vmc::VmClient& vm, const std::string& name, const nlohmann::json& args);

}  // namespace litecua::mcp
