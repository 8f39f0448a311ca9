#include "litecua/vmc/client.hpp"

#include <cmath>

#include <httplib.h>

#include "litecua/sim/png.hpp"

namespace litecua::vmc {

using nlohmann::json;

namespace {

json parse_body(const httplib::Result& res, const char* where) {
    json body = json::parse(res->body, nullptr, /*allow_exceptions=*/false);
    if (body.is_discarded())
        throw ProtocolError(std::string(where) + ": response body is not JSON");
    return body;
}

[[noreturn]] void throw_unreachable(const std::string& base, const char* where,
                                    const httplib::Result& res) {
    throw Unreachable(base + where + ": " + httplib::to_string(res.error()));
}

std::int64_t tick_header(const httplib::Result& res) {
    const std::string value = res->get_header_value("X-Tick");
    if (value.empty()) return -1;
    return std::stoll(value);
}

}  // namespace

VmClient::VmClient(std::string base_url, double timeout_s) : base_(std::move(base_url)) {
    http_ = std::make_unique<httplib::Client>(base_);
    const auto whole = std::chrono::milliseconds(static_cast<std::int64_t>(timeout_s * 1000));
    http_->set_connection_timeout(whole);
    http_->set_read_timeout(whole);
    http_->set_write_timeout(whole);
}

VmClient::~VmClient() = default;

RawObservation VmClient::observe() {
    httplib::Result tick_res = http_->Get("/tick");
    if (!tick_res) throw_unreachable(base_, "/tick", tick_res);
    std::int64_t tick = parse_body(tick_res, "/tick").at("tick").get<std::int64_t>();

    for (int attempt = 0; attempt <= kObserveRetries; ++attempt) {
        const httplib::Headers burst{{"X-Tick", std::to_string(tick)}};
        RawObservation obs;
        obs.tick = tick;
        bool torn = false;
        std::int64_t latest = tick;

        auto fetch = [&](const char* path) -> std::string {
            httplib::Result res = http_->Get(path, burst);
            if (!res) throw_unreachable(base_, path, res);
            if (res->status != 200)
                throw ProtocolError(base_ + path + ": HTTP " + std::to_string(res->status));
            const std::int64_t at = tick_header(res);
            if (at != tick) {
                torn = true;
                latest = std::max(latest, at);
            }
            return res->body;
        };

        const std::string shot = fetch("/screenshot");
        obs.screenshot.assign(shot.begin(), shot.end());
        obs.a11y = fetch("/a11y");
        const json system = json::parse(fetch("/system"), nullptr, false);

        if (torn) {
            tick = latest;
            continue;
        }
        if (system.is_discarded() || !system.is_object())
            throw ProtocolError(base_ + "/system: not a JSON object");
        for (auto it = system.begin(); it != system.end(); ++it) {
            if (!it.value().is_string())
                throw ProtocolError(base_ + "/system: values must be strings");
            obs.system_info[it.key()] = it.value().get<std::string>();
        }
        const auto dims = sim::png_dimensions(obs.screenshot.data(), obs.screenshot.size());
        if (!dims.has_value()) throw ProtocolError(base_ + "/screenshot: not a PNG");
        obs.screen = {dims->first, dims->second};
        return obs;
    }
    throw TornObservation(base_ + ": observation still torn after " +
                          std::to_string(kObserveRetries) + " retries");
}

ExecResult VmClient::execute(const std::vector<actions::PrimitiveCommand>& batch) {
    if (batch.empty()) throw std::invalid_argument("execute: empty batch");
    if (batch.size() > kMaxBatch)
        throw std::invalid_argument("execute: batch of " + std::to_string(batch.size()) +
                                    " exceeds " + std::to_string(kMaxBatch));
    json commands = json::array();
    for (const actions::PrimitiveCommand& cmd : batch)
        commands.push_back(actions::primitive_to_json(cmd));

    httplib::Result res =
        http_->Post("/execute", json{{"commands", std::move(commands)}}.dump(), "application/json");
    if (!res) throw_unreachable(base_, "/execute", res);

    const json body = parse_body(res, "/execute");
    ExecResult out;
    out.tick_after = tick_header(res);
    if (res->status == 200) {
        out.ok = body.at("ok").get<bool>();
        out.applied = body.at("applied").get<int>();
        out.detail = body.at("detail").get<std::string>();
        out.tick_after = body.at("tick_after").get<std::int64_t>();
        if (out.ok && out.applied != static_cast<int>(batch.size()))
            throw ProtocolError("/execute: ok but applied " + std::to_string(out.applied) +
                                " of " + std::to_string(batch.size()));
        return out;
    }
    if (body.contains("error") && body["error"].contains("index")) {
        const json& err = body["error"];
        out.ok = false;
        out.applied = err["index"].get<int>();
        out.detail = err.value("code", "rejected") + ": " + err.value("message", "");
        return out;
    }
    throw ProtocolError(base_ + "/execute: HTTP " + std::to_string(res->status) + " " + res->body);
}

void VmClient::reset(const std::string& scene_id, std::uint64_t seed) {
    httplib::Result res = http_->Post(
        "/reset", json{{"scene_id", scene_id}, {"seed", seed}}.dump(), "application/json");
    if (!res) throw_unreachable(base_, "/reset", res);
    if (res->status == 200) return;
    const json body = parse_body(res, "/reset");
    if (body.contains("error") && body["error"].value("code", "") == "unknown_scene")
        throw UnknownScene("no scene named '" + scene_id + "'");
    throw ProtocolError(base_ + "/reset: HTTP " + std::to_string(res->status) + " " + res->body);
}

VmClient::Health VmClient::health() {
    httplib::Result res = http_->Get("/health");
    if (!res) throw_unreachable(base_, "/health", res);
    const json body = parse_body(res, "/health");
    Health out;
    out.status = body.value("status", "");
    out.scene_id = body.value("scene_id", "");
    if (body.contains("tick")) out.tick = body["tick"].get<std::int64_t>();
    return out;
}

json VmClient::state() {
    httplib::Result res = http_->Get("/state");
    if (!res) throw_unreachable(base_, "/state", res);
    if (res->status != 200)
        throw ProtocolError(base_ + "/state: HTTP " + std::to_string(res->status));
    return parse_body(res, "/state");
}

}  // namespace litecua::vmc
