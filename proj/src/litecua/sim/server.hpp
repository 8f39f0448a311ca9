#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>

#include "litecua/sim/desktop.hpp"
#include "litecua/sim/scene.hpp"

namespace httplib {
class Server;
}

namespace litecua::sim {

using SceneLibrary = std::map<std::string, SceneSpec>;

// Reads every "*.json" under `dir` as one scene (filename stem must equal the
// scene_id inside). Throws InvalidScene on parse/validation failure or when
// the directory holds no scenes.
SceneLibrary load_scene_dir(const std::string& dir);

class BindFailure : public std::runtime_error {
public:
    explicit BindFailure(const std::string& what) : std::runtime_error(what) {}
};

// The wire server around one DesktopState.
//
//   GET  /screenshot  image/png
//   GET  /a11y        raw accessibility document
//   GET  /system      flat string map
//   GET  /tick        {"tick": n}
//   GET  /health      {"status": "ok"|"degraded", "scene_id": .., "tick": n}
//   GET  /state       full state dump (debugging / evaluation)
//   POST /execute     {"commands": [...]} applied atomically, fail-stop
//   POST /reset       {"scene_id": .., "seed": ..}
//
// Every response carries "X-VMC-Version: 1" and an "X-Tick" header with the
// tick the response was produced at. Error bodies are
// {"error": {"code", "message", "index"?}}; malformed requests get HTTP 400,
// refused primitives 409, unknown scenes 404.
//
// One mutex owns the state: /execute and /reset hold it for the whole batch,
// observation handlers take it just long enough to copy what they serve.
class SimServer {
public:
    // The initial state is load_scene(library[default_scene], seed).
    SimServer(SceneLibrary library, std::string default_scene, std::uint64_t seed = 0);
    ~SimServer();

    SimServer(const SimServer&) = delete;
    SimServer& operator=(const SimServer&) = delete;

    // Binds and serves on a background thread. Port 0 picks a free port.
    // Throws BindFailure when the address cannot be bound.
    void start(const std::string& host, int port);
    void stop();

    int port() const { return port_; }
    std::string url() const;

    // Direct access for in-process checks; takes the state lock.
    DesktopState state_snapshot() const;

    // Holds the state lock from the outside, e.g. to observe the degraded
    // health status deterministically in tests.
    std::unique_lock<std::mutex> lock_state_for_test() const;

private:
    void install_routes();

    SceneLibrary library_;
    mutable std::mutex mu_;
    DesktopState state_;

    std::unique_ptr<httplib::Server> http_;
    std::thread serving_;
    std::string host_;
    int port_ = 0;
};

}  // namespace litecua::sim
