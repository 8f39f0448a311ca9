#include "litecua/mcp/server.hpp"

#include <istream>
#include <ostream>

#include <httplib.h>

namespace litecua::mcp {

using nlohmann::json;

std::optional<json> McpSession::handle_frame(const std::string& frame) {
    try {
        return handle(parse_frame(frame));
    } catch (const MalformedJson& e) {
        return make_error(nullptr, kParseError, e.what());
    } catch (const InvalidEnvelope& e) {
        return make_error(nullptr, kInvalidRequest, e.what());
    }
}

std::optional<json> McpSession::handle(const RpcMessage& msg) {
    std::lock_guard<std::mutex> lock(mu_);
    switch (msg.kind) {
        case RpcKind::kRequest:
            return dispatch_request(msg);
        case RpcKind::kNotification:
            // The only notification with meaning here completes the handshake.
            // Everything else is dropped on the floor per protocol: a
            // notification never gets a reply, not even an error.
            if (msg.method == "notifications/initialized" &&
                state_ == SessionState::kAwaitInitialized) {
                state_ = SessionState::kReady;
            }
            return std::nullopt;
        case RpcKind::kResponse:
            // We never issue server-to-client requests, so a response frame
            // has nothing to pair with. Ignore it.
            return std::nullopt;
    }
    return std::nullopt;
}

json McpSession::dispatch_request(const RpcMessage& msg) {
    if (msg.method == "initialize") {
        if (state_ != SessionState::kNew) {
            return make_error(msg.id, kInvalidRequest, "already initialized");
        }
        if (msg.params.contains("protocolVersion") &&
            msg.params.at("protocolVersion") != kProtocolVersion) {
            return make_error(msg.id, kInvalidRequest,
                              std::string("unsupported protocol version: ") +
                                  msg.params.at("protocolVersion").dump());
        }
        state_ = SessionState::kAwaitInitialized;
        json result = {
            {"protocolVersion", kProtocolVersion},
            {"capabilities", json{{"tools", json::object()}}},
            {"serverInfo", json{{"name", kServerName}, {"version", kServerVersion}}},
        };
        return make_response(msg.id, result);
    }

    if (msg.method == "tools/list") {
        if (state_ != SessionState::kReady) {
            return make_error(msg.id, kNotInitialized, "session not initialized");
        }
        return make_response(msg.id, json{{"tools", registry_to_json()}});
    }

    if (msg.method == "tools/call") {
        if (state_ != SessionState::kReady) {
            return make_error(msg.id, kNotInitialized, "session not initialized");
        }
        if (!msg.params.contains("name") || !msg.params.at("name").is_string()) {
            return make_error(msg.id, kInvalidRequest, "tools/call needs a string 'name'");
        }
        json args = json::object();
        if (msg.params.contains("arguments")) args = msg.params.at("arguments");
        try {
            ToolResult res = call_tool(vm_, msg.params.at("name").get<std::string>(), args);
            return make_response(msg.id, tool_result_to_json(res));
        } catch (const UnknownTool& e) {
            return make_error(msg.id, kMethodNotFound, e.what());
        }
    }

    return make_error(msg.id, kMethodNotFound, "unknown method: " + msg.method);
}

void serve_stdio(McpSession& session, std::istream& in, std::ostream& out) {
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::optional<json> reply = session.handle_frame(line);
        if (reply) {
            out << reply->dump() << '\n';
            out.flush();
        }
    }
}

McpHttpServer::McpHttpServer(vmc::VmClient& vm)
    : session_(vm), http_(std::make_unique<httplib::Server>()) {
    http_->Post("/mcp", [this](const httplib::Request& req, httplib::Response& res) {
        std::optional<json> reply = session_.handle_frame(req.body);
        if (reply) {
            res.status = 200;
            res.set_content(reply->dump(), "application/json");
        } else {
            res.status = 204;
        }
    });
}

McpHttpServer::~McpHttpServer() { stop(); }

void McpHttpServer::start(const std::string& host, int port) {
    host_ = host;
    if (port == 0) {
        port_ = http_->bind_to_any_port(host.c_str());
        if (port_ < 0) throw McpBindFailure("could not bind " + host + " to any port");
    } else {
        if (!http_->bind_to_port(host.c_str(), port)) {
            throw McpBindFailure("could not bind " + host + ":" + std::to_string(port));
        }
        port_ = port;
    }
    serving_ = std::thread([this] { http_->listen_after_bind(); });
    http_->wait_until_ready();
}

void McpHttpServer::stop() {
    if (http_ && http_->is_running()) http_->stop();
    if (serving_.joinable()) serving_.join();
}

std::string McpHttpServer::url() const {
    std::string host = host_ == "0.0.0.0" ? "127.0.0.1" : host_;
    return "http://" + host + ":" + std::to_string(port_);
}

}  // namespace litecua::mcp
