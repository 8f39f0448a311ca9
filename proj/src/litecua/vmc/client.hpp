#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "litecua/actions/action.hpp"
#include "litecua/common/geometry.hpp"

namespace httplib {
class Client;
}

namespace litecua::vmc {

// One multi-channel sensing of the remote desktop, all channels taken at the
// same tick.
struct RawObservation {
    std::vector<std::uint8_t> screenshot;  // PNG bytes
    Size screen;                           // from the PNG header
    std::string a11y;                      // raw accessibility document
    std::map<std::string, std::string> system_info;
    std::int64_t tick = 0;
};

// Outcome of one /execute batch. ok means every primitive applied; on a
// refusal, applied holds the index of the refused primitive (= the count that
// did apply) and detail carries the server's code and message.
struct ExecResult {
    bool ok = false;
    int applied = 0;
    std::string detail;
    std::int64_t tick_after = 0;
};

class Unreachable : public std::runtime_error {
public:
    explicit Unreachable(const std::string& what) : std::runtime_error(what) {}
};
// The three observation channels kept disagreeing about the tick.
class TornObservation : public std::runtime_error {
public:
    explicit TornObservation(const std::string& what) : std::runtime_error(what) {}
};
class UnknownScene : public std::runtime_error {
public:
    explicit UnknownScene(const std::string& what) : std::runtime_error(what) {}
};
// The server answered, but not in the shape the wire contract promises.
class ProtocolError : public std::runtime_error {
public:
    explicit ProtocolError(const std::string& what) : std::runtime_error(what) {}
};

inline constexpr std::size_t kMaxBatch = 512;
inline constexpr int kObserveRetries = 3;

// Blocking client for the wire contract; one in-flight request per instance.
class VmClient {
public:
    explicit VmClient(std::string base_url, double timeout_s = 10.0);
    ~VmClient();

    VmClient(const VmClient&) = delete;
    VmClient& operator=(const VmClient&) = delete;

    // GET /tick then /screenshot, /a11y and /system against that tick; the
    // burst retries up to kObserveRetries times when the ticks disagree, then
    // throws TornObservation. Never mutates server state.
    RawObservation observe();

    // POST /execute. The batch must be non-empty and at most kMaxBatch long;
    // violations throw std::invalid_argument before anything is sent.
    ExecResult execute(const std::vector<actions::PrimitiveCommand>& batch);

    // POST /reset; afterwards the server state equals a fresh load of the
    // scene and the tick is 0.
    void reset(const std::string& scene_id, std::uint64_t seed);

    struct Health {
        std::string status;  // "ok" or "degraded"
        std::string scene_id;
        std::int64_t tick = -1;
    };
    Health health();

    // GET /state: the simulator's full state dump, used by evaluation.
    nlohmann::json state();

    const std::string& base_url() const { return base_; }

private:
    std::string base_;
    std::unique_ptr<httplib::Client> http_;
};

}  // namespace litecua::vmc
