#pragma once

#include <iosfwd>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>

#include <nlohmann/json.hpp>

#include "litecua/mcp/rpc.hpp"
#include "litecua/mcp/tools.hpp"
#include "litecua/vmc/client.hpp"

namespace httplib {
class Server;
}

namespace litecua::mcp {

inline constexpr const char* kProtocolVersion = "2024-11-05";
inline constexpr const char* kServerName = "litecua-mcp";
inline constexpr const char* kServerVersion = "0.1.0";

// initialize moves NEW to AWAIT_INITIALIZED; the client's initialized
// notification completes the handshake. tools/* before READY get -32002.
enum class SessionState { kNew, kAwaitInitialized, kReady };

// One MCP session over one desktop connection. Handles one frame at a time;
// dispatch is serialized by an internal lock so both transports can share a
// session safely.
class McpSession {
public:
    explicit McpSession(vmc::VmClient& vm) : vm_(vm) {}

    // Full pipeline for one raw frame: parse, dispatch, reply. Parse failures
    // become -32700/-32600 error replies. Notifications yield no reply.
    std::optional<nlohmann::json> handle_frame(const std::string& frame);

    std::optional<nlohmann::json> handle(const RpcMessage& msg);

    SessionState state() const { return state_; }

private:
    nlohmann::json dispatch_request(const RpcMessage& msg);

    vmc::VmClient& vm_;
    SessionState state_ = SessionState::kNew;
    std::mutex mu_;
};

// Newline-delimited JSON transport: one document per line, LF-terminated.
// Runs until end of stream.
void serve_stdio(McpSession& session, std::istream& in, std::ostream& out);

class McpBindFailure : public std::runtime_error {
public:
    explicit McpBindFailure(const std::string& what) : std::runtime_error(what) {}
};

// HTTP transport: POST /mcp with one JSON-RPC document per request body.
// Notifications are answered with 204 and an empty body.
class McpHttpServer {
public:
    explicit McpHttpServer(vmc::VmClient& vm);
    ~McpHttpServer();

    McpHttpServer(const McpHttpServer&) = delete;
    McpHttpServer& operator=(const McpHttpServer&) = delete;

    void start(const std::string& host, int port);  // throws McpBindFailure
    void stop();
    int port() const { return port_; }
    std::string url() const;

    McpSession& session() { return session_; }

private:
    McpSession session_;
    std::unique_ptr<httplib::Server> http_;
    std::thread serving_;
    std::string host_;
    int port_ = 0;
};

}  // namespace litecua::mcp
