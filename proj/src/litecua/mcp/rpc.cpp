#include "litecua/mcp/rpc.hpp"

namespace litecua::mcp {

using nlohmann::json;

RpcMessage parse_frame(const std::string& frame) {
    const json doc = json::parse(frame, nullptr, /*allow_exceptions=*/false);
    if (doc.is_discarded()) throw MalformedJson("frame is not valid JSON");
    if (!doc.is_object()) throw InvalidEnvelope("frame must be a JSON object");
    if (!doc.contains("jsonrpc") || doc["jsonrpc"] != "2.0")
        throw InvalidEnvelope("missing jsonrpc \"2.0\" discriminant");

    RpcMessage msg;
    const bool has_id = doc.contains("id") && !doc["id"].is_null();
    if (has_id) {
        if (!doc["id"].is_string() && !doc["id"].is_number())
            throw InvalidEnvelope("id must be a string or number");
        msg.id = doc["id"];
    }

    if (doc.contains("method")) {
        if (!doc["method"].is_string()) throw InvalidEnvelope("method must be a string");
        msg.method = doc["method"].get<std::string>();
        msg.params = doc.value("params", json::object());
        msg.kind = has_id ? RpcKind::kRequest : RpcKind::kNotification;
        return msg;
    }

    const bool has_result = doc.contains("result");
    const bool has_error = doc.contains("error");
    if (has_result == has_error)
        throw InvalidEnvelope("a response carries exactly one of result or error");
    if (!has_id) throw InvalidEnvelope("a response carries an id");
    msg.kind = RpcKind::kResponse;
    if (has_result) msg.result = doc["result"];
    if (has_error) msg.error = doc["error"];
    return msg;
}

json make_response(const json& id, json result) {
    return {{"jsonrpc", "2.0"}, {"id", id}, {"result", std::move(result)}};
}

json make_error(const json& id, int code, const std::string& message) {
    return {{"jsonrpc", "2.0"}, {"id", id}, {"error", {{"code", code}, {"message", message}}}};
}

}  // namespace litecua::mcp
