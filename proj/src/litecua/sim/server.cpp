#include "litecua/sim/server.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "litecua/actions/action.hpp"
#include "litecua/sim/raster.hpp"

namespace litecua::sim {

using nlohmann::json;
namespace fs = std::filesystem;

SceneLibrary load_scene_dir(const std::string& dir) {
    std::error_code ec;
    if (!fs::is_directory(dir, ec)) throw InvalidScene("not a scene directory: " + dir);
    SceneLibrary library;
    for (const fs::directory_entry& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file() || entry.path().extension() != ".json") continue;
        std::ifstream in(entry.path());
        std::stringstream buffer;
        buffer << in.rdbuf();
        SceneSpec spec;
        try {
            spec = parse_scene_text(buffer.str());
        } catch (const InvalidScene& e) {
            throw InvalidScene(entry.path().filename().string() + ": " + e.what());
        }
        if (spec.scene_id != entry.path().stem().string()) {
            throw InvalidScene(entry.path().filename().string() + ": scene_id '" + spec.scene_id +
                               "' does not match the filename");
        }
        library[spec.scene_id] = std::move(spec);
    }
    if (library.empty()) throw InvalidScene("no scene files in " + dir);
    return library;
}

namespace {

void finish(httplib::Response& res, std::int64_t tick, int status, const std::string& body,
            const std::string& content_type) {
    res.status = status;
    res.set_header("X-VMC-Version", "1");
    res.set_header("X-Tick", std::to_string(tick));
    res.set_content(body, content_type);
}

void finish_json(httplib::Response& res, std::int64_t tick, int status, const json& body) {
    finish(res, tick, status, body.dump(), "application/json");
}

void finish_error(httplib::Response& res, std::int64_t tick, int status, const std::string& code,
                  const std::string& message, std::optional<int> index = std::nullopt) {
    json err{{"code", code}, {"message", message}};
    if (index.has_value()) err["index"] = *index;
    finish_json(res, tick, status, json{{"error", std::move(err)}});
}

}  // namespace

SimServer::SimServer(SceneLibrary library, std::string default_scene, std::uint64_t seed)
    : library_(std::move(library)) {
    auto it = library_.find(default_scene);
    if (it == library_.end()) throw InvalidScene("unknown default scene '" + default_scene + "'");
    state_ = load_scene(it->second, seed);
}

SimServer::~SimServer() { stop(); }

void SimServer::start(const std::string& host, int port) {
    http_ = std::make_unique<httplib::Server>();
    install_routes();
    host_ = host;
    if (port == 0) {
        port_ = http_->bind_to_any_port(host);
        if (port_ <= 0) throw BindFailure("cannot bind " + host + " on any port");
    } else {
        if (!http_->bind_to_port(host, port))
            throw BindFailure("cannot bind " + host + ":" + std::to_string(port));
        port_ = port;
    }
    serving_ = std::thread([this] { http_->listen_after_bind(); });
    http_->wait_until_ready();
}

void SimServer::stop() {
    if (http_) http_->stop();
    if (serving_.joinable()) serving_.join();
    http_.reset();
}

std::string SimServer::url() const {
    return "http://" + (host_ == "0.0.0.0" ? "127.0.0.1" : host_) + ":" + std::to_string(port_);
}

DesktopState SimServer::state_snapshot() const {
    std::lock_guard<std::mutex> lock(mu_);
    return state_;
}

std::unique_lock<std::mutex> SimServer::lock_state_for_test() const {
    return std::unique_lock<std::mutex>(mu_);
}

void SimServer::install_routes() {
    http_->Get("/screenshot", [this](const httplib::Request&, httplib::Response& res) {
        std::vector<std::uint8_t> png;
        std::int64_t tick;
        {
            std::lock_guard<std::mutex> lock(mu_);
            png = emit_screenshot(state_);
            tick = state_.tick;
        }
        finish(res, tick, 200, std::string(png.begin(), png.end()), "image/png");
    });

    http_->Get("/a11y", [this](const httplib::Request&, httplib::Response& res) {
        std::string doc;
        std::int64_t tick;
        {
            std::lock_guard<std::mutex> lock(mu_);
            doc = emit_a11y(state_);
            tick = state_.tick;
        }
        finish(res, tick, 200, doc, "application/json");
    });

    http_->Get("/system", [this](const httplib::Request&, httplib::Response& res) {
        json info;
        std::int64_t tick;
        {
            std::lock_guard<std::mutex> lock(mu_);
            info = json(state_.scene.system_info);
            tick = state_.tick;
        }
        finish_json(res, tick, 200, info);
    });

    http_->Get("/tick", [this](const httplib::Request&, httplib::Response& res) {
        std::int64_t tick;
        {
            std::lock_guard<std::mutex> lock(mu_);
            tick = state_.tick;
        }
        finish_json(res, tick, 200, json{{"tick", tick}});
    });

    http_->Get("/health", [this](const httplib::Request&, httplib::Response& res) {
        // try_lock instead of lock: a health probe must answer immediately,
        // and a held state lock means a mutation is in flight.
        std::unique_lock<std::mutex> lock(mu_, std::try_to_lock);
        if (!lock.owns_lock()) {
            finish_json(res, -1, 200, json{{"status", "degraded"}});
            return;
        }
        finish_json(res, state_.tick, 200,
                    json{{"status", "ok"}, {"scene_id", state_.scene.scene_id}, {"tick", state_.tick}});
    });

    http_->Get("/state", [this](const httplib::Request&, httplib::Response& res) {
        json doc;
        std::int64_t tick;
        {
            std::lock_guard<std::mutex> lock(mu_);
            doc = state_to_json(state_);
            tick = state_.tick;
        }
        finish_json(res, tick, 200, doc);
    });

    http_->Post("/execute", [this](const httplib::Request& req, httplib::Response& res) {
        std::lock_guard<std::mutex> lock(mu_);
        const json body = json::parse(req.body, nullptr, /*allow_exceptions=*/false);
        if (body.is_discarded() || !body.is_object() || !body.contains("commands") ||
            !body["commands"].is_array()) {
            finish_error(res, state_.tick, 400, "bad_request",
                         "body must be {\"commands\": [...]}");
            return;
        }
        const json& commands = body["commands"];
        int applied = 0;
        for (const json& cj : commands) {
            actions::PrimitiveCommand cmd;
            try {
                cmd = actions::primitive_from_json(cj);
            } catch (const std::invalid_argument& e) {
                finish_error(res, state_.tick, 400, "bad_command", e.what(), applied);
                return;
            }
            try {
                step(state_, cmd);
            } catch (const StepRejected& e) {
                finish_error(res, state_.tick, 409, e.code, e.what(), applied);
                return;
            }
            applied += 1;
        }
        finish_json(res, state_.tick, 200,
                    json{{"ok", true}, {"applied", applied}, {"detail", ""}, {"tick_after", state_.tick}});
    });

    http_->Post("/reset", [this](const httplib::Request& req, httplib::Response& res) {
        std::lock_guard<std::mutex> lock(mu_);
        const json body = json::parse(req.body, nullptr, /*allow_exceptions=*/false);
        if (body.is_discarded() || !body.is_object() || !body.contains("scene_id") ||
            !body["scene_id"].is_string()) {
            finish_error(res, state_.tick, 400, "bad_request",
                         "body must be {\"scene_id\": .., \"seed\": ..}");
            return;
        }
        const std::string scene_id = body["scene_id"].get<std::string>();
        std::uint64_t seed = 0;
        if (body.contains("seed") && body["seed"].is_number_integer())
            seed = body["seed"].get<std::uint64_t>();
        auto it = library_.find(scene_id);
        if (it == library_.end()) {
            finish_error(res, state_.tick, 404, "unknown_scene",
                         "no scene named '" + scene_id + "'");
            return;
        }
        state_ = load_scene(it->second, seed);
        finish_json(res, state_.tick, 200,
                    json{{"ok", true}, {"scene_id", scene_id}, {"tick", state_.tick}});
    });
}

}  // namespace litecua::sim
