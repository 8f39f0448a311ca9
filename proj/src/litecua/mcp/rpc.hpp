#pragma once

#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

namespace litecua::mcp {

// JSON-RPC 2.0 error codes used on this wire.
inline constexpr int kParseError = -32700;
inline constexpr int kInvalidRequest = -32600;
inline constexpr int kMethodNotFound = -32601;
inline constexpr int kNotInitialized = -32002;

enum class RpcKind { kRequest, kNotification, kResponse };

// One validated JSON-RPC message. Requests carry id+method, notifications
// method only, responses id plus exactly one of result/error.
struct RpcMessage {
    RpcKind kind = RpcKind::kRequest;
    nlohmann::json id;      // string or number; null for notifications
    std::string method;
    nlohmann::json params;  // defaults to an empty object
    nlohmann::json result;
    nlohmann::json error;
};

class MalformedJson : public std::runtime_error {
public:
    explicit MalformedJson(const std::string& what) : std::runtime_error(what) {}
};
class InvalidEnvelope : public std::runtime_error {
public:
    explicit InvalidEnvelope(const std::string& what) : std::runtime_error(what) {}
};

// Parses one complete frame (a line on stdio, a body over HTTP). Unknown extra
// fields are ignored. Throws MalformedJson when the frame is not JSON at all
// and InvalidEnvelope when the JSON is not a valid JSON-RPC 2.0 message; the
// transport maps those to error replies -32700 and -32600.
RpcMessage parse_frame(const std::string& frame);

nlohmann::json make_response(const nlohmann::json& id, nlohmann::json result);
nlohmann::json make_error(const nlohmann::json& id, int code, const std::string& message);

}  // namespace litecua::mcp
