#include "litecua/agent/policy.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <httplib.h>

#include "litecua/common/base64.hpp"

namespace litecua::agent {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kSystemRules =
    "You operate a desktop computer one step at a time.\n"
    "Rules:\n"
    "- Look at the element table and the screenshot before acting.\n"
    "- Prefer element_id targets over raw coordinates.\n"
    "- Take exactly one action per turn.\n"
    "- After changing something, expect the next observation to confirm it.\n"
    "- When the task is complete, emit the done action; if it cannot be\n"
    "  completed, emit fail with a reason.\n"
    "Reply with a short thought, then exactly one action as a fenced JSON\n"
    "object with an \"action\" field. Add \"subtask_done\": true when the\n"
    "current subtask is finished.";

constexpr const char* kPlanRules =
    "Decompose the task into a short ordered list of subtasks. Reply with a "
    "fenced JSON array of strings, nothing else inside the fence.";

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

bool is_point_match(const json& m) {
    return m.is_array() && m.size() == 2 && m[0].is_number_integer() && m[1].is_number_integer();
}

void check_match_shape(const json& step, const char* key) {
    if (!step.contains(key)) return;
    const json& m = step.at(key);
    if (m.is_string() || is_point_match(m)) return;
    throw ScriptError(std::string(key) + " must be an element name or an [x, y] pair, got " +
                      m.dump());
}

// Element name or point -> the target fields parse_action expects.
std::optional<json> ground_match(const json& m, const std::vector<ctx::UIElement>& elements) {
    if (m.is_string()) {
        for (const ctx::UIElement& e : elements) {
            if (e.name == m.get<std::string>()) return json{{"element_id", e.id}};
        }
        return std::nullopt;
    }
    return json{{"x", m[0]}, {"y", m[1]}};
}

Decision fail_decision(std::string thought, std::string reason) {
    return {std::move(thought), actions::FailAction{std::move(reason)}, false};
}

}  // namespace

ScriptTable parse_script_entry(const json& entry) {
    ScriptTable table;
    json steps;
    if (entry.is_array()) {
        steps = entry;
    } else if (entry.is_object() && entry.contains("steps") && entry.at("steps").is_array()) {
        steps = entry.at("steps");
        table.loop = entry.value("loop", false);
    } else {
        throw ScriptError("script entry must be a steps array or {\"steps\": [...], \"loop\": bool}");
    }
    if (steps.empty()) throw ScriptError("script entry has no steps");
    for (const json& step : steps) {
        if (!step.is_object() || !step.contains("action") || !step.at("action").is_string()) {
            throw ScriptError("script step needs a string \"action\": " + step.dump());
        }
        check_match_shape(step, "match");
        check_match_shape(step, "match_from");
        check_match_shape(step, "match_to");
        table.steps.push_back(step);
    }
    return table;
}

ScriptBook load_scripts(const std::string& dir) {
    if (!fs::is_directory(dir)) throw ScriptError("script directory not found: " + dir);
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.path().extension() == ".json") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());

    ScriptBook book;
    for (const fs::path& file : files) {
        std::ifstream in(file);
        json doc = json::parse(in, nullptr, false);
        if (doc.is_discarded() || !doc.is_object()) {
            throw ScriptError("script file is not a JSON object: " + file.string());
        }
        for (const auto& [task_id, entry] : doc.items()) {
            if (book.count(task_id)) {
                throw ScriptError("duplicate script for task '" + task_id + "' in " + file.string());
            }
            try {
                book[task_id] = parse_script_entry(entry);
            } catch (const ScriptError& e) {
                throw ScriptError(file.string() + ", task '" + task_id + "': " + e.what());
            }
        }
    }
    return book;
}

std::vector<std::string> ScriptedPolicy::plan(const TaskGoal& goal, const ctx::ContextSnapshot&) {
    return {goal.instruction};
}

Decision ScriptedPolicy::decide(const TaskGoal& goal, const PlanState&,
                                const std::vector<StepRecord>& history,
                                const ctx::ContextSnapshot& snapshot, const vmc::RawObservation&) {
    const auto it = book_.find(goal.task_id);
    if (it == book_.end()) return fail_decision("scripted", "no script for task '" + goal.task_id + "'");
    const ScriptTable& table = it->second;

    std::size_t idx = history.size();  // step n executes row n-1
    if (idx >= table.steps.size()) {
        if (!table.loop) {
            return fail_decision("scripted", "script for '" + goal.task_id + "' exhausted");
        }
        idx %= table.steps.size();
    }

    json doc = table.steps[idx];
    const std::string thought = doc.is_object() ? doc.value("thought", "scripted") : "scripted";
    const bool subtask_done = doc.value("subtask_done", false);
    doc.erase("thought");
    doc.erase("subtask_done");

    // Ground name/point matches against what is on screen right now.
    for (const char* key : {"match", "match_from", "match_to"}) {
        if (!doc.contains(key)) continue;
        std::optional<json> target = ground_match(doc.at(key), snapshot.elements);
        if (!target) {
            return fail_decision(thought,
                                 "no element named '" + doc.at(key).get<std::string>() + "' on screen");
        }
        if (std::string(key) == "match") {
            for (const auto& [k, v] : target->items()) doc[k] = v;
        } else {
            doc[std::string(key) == "match_from" ? "from" : "to"] = *target;
        }
        doc.erase(key);
    }

    try {
        return {thought, actions::parse_action(doc), subtask_done};
    } catch (const std::exception& e) {
        // A malformed row is an authoring bug; surface it as a failed episode
        // rather than tearing down the whole suite.
        return fail_decision(thought, std::string("script error: ") + e.what());
    }
}

std::vector<std::string> NullPolicy::plan(const TaskGoal& goal, const ctx::ContextSnapshot&) {
    return {goal.instruction};
}

Decision NullPolicy::decide(const TaskGoal&, const PlanState&, const std::vector<StepRecord>&,
                            const ctx::ContextSnapshot&, const vmc::RawObservation&) {
    return {"idle", actions::WaitAction{1.0}, false};
}

LlmConfig LlmConfig::from_env() {
    const auto env = [](const char* name) {
        const char* v = std::getenv(name);
        return v ? std::string(v) : std::string();
    };
    LlmConfig cfg;
    cfg.url = env("LITECUA_LLM_URL");
    cfg.key = env("LITECUA_LLM_KEY");
    cfg.model = env("LITECUA_MODEL");
    return cfg;
}

std::optional<std::pair<std::string, json>> extract_fenced(const std::string& reply) {
    const std::size_t open = reply.find("```");
    if (open == std::string::npos) return std::nullopt;
    std::size_t start = open + 3;
    // Skip an optional language tag line ("json\n").
    std::size_t tag_end = start;
    while (tag_end < reply.size() && std::isalpha(static_cast<unsigned char>(reply[tag_end]))) {
        ++tag_end;
    }
    if (tag_end < reply.size() && (reply[tag_end] == '\n' || reply[tag_end] == '\r')) {
        start = tag_end;
    }
    const std::size_t close = reply.find("```", start);
    if (close == std::string::npos) return std::nullopt;

    json doc = json::parse(reply.substr(start, close - start), nullptr, false);
    if (doc.is_discarded()) return std::nullopt;
    return std::make_pair(trim(reply.substr(0, open)), std::move(doc));
}

std::string LlmPolicy::complete(const json& messages) {
    if (config_.url.empty()) throw PolicyFailure("no model endpoint configured (LITECUA_LLM_URL)");

    // Split the endpoint URL into client base and request path.
    const std::size_t scheme = config_.url.find("://");
    const std::size_t path_at =
        scheme == std::string::npos ? config_.url.find('/') : config_.url.find('/', scheme + 3);
    const std::string base = path_at == std::string::npos ? config_.url : config_.url.substr(0, path_at);
    const std::string path = path_at == std::string::npos ? "/" : config_.url.substr(path_at);

    httplib::Client http(base);
    http.set_connection_timeout(std::chrono::milliseconds(static_cast<int>(config_.timeout_s * 1000)));
    http.set_read_timeout(std::chrono::milliseconds(static_cast<int>(config_.timeout_s * 1000)));
    httplib::Headers headers;
    if (!config_.key.empty()) headers.emplace("Authorization", "Bearer " + config_.key);

    const json body = {{"model", config_.model}, {"messages", messages}, {"temperature", 0}};
    auto res = http.Post(path, headers, body.dump(), "application/json");
    if (!res) throw PolicyFailure("model endpoint unreachable: " + config_.url);
    if (res->status != 200) {
        throw PolicyFailure("model endpoint returned status " + std::to_string(res->status));
    }
    const json reply = json::parse(res->body, nullptr, false);
    if (reply.is_discarded()) throw PolicyFailure("model endpoint reply is not JSON");

    // OpenAI-style shape first, then a bare {"content": "..."} fallback.
    if (reply.contains("choices") && reply["choices"].is_array() && !reply["choices"].empty()) {
        const json& msg = reply["choices"][0];
        if (msg.contains("message") && msg["message"].contains("content") &&
            msg["message"]["content"].is_string()) {
            return msg["message"]["content"].get<std::string>();
        }
    }
    if (reply.contains("content") && reply["content"].is_string()) {
        return reply["content"].get<std::string>();
    }
    throw PolicyFailure("no assistant text in model reply");
}

std::vector<std::string> LlmPolicy::plan(const TaskGoal& goal, const ctx::ContextSnapshot& snapshot) {
    const json messages = json::array(
        {{{"role", "system"}, {"content", kPlanRules}},
         {{"role", "user"},
          {"content", "Task: " + goal.instruction + "\n\nCurrent screen:\n" +
                          ctx::render_context(snapshot, kPromptContextBudget)}}});
    const std::string reply = complete(messages);
    const auto fenced = extract_fenced(reply);
    if (!fenced || !fenced->second.is_array()) throw PolicyFailure("unparseable decomposition");
    std::vector<std::string> subtasks;
    for (const json& item : fenced->second) {
        if (!item.is_string()) throw PolicyFailure("unparseable decomposition");
        subtasks.push_back(item.get<std::string>());
    }
    if (subtasks.empty()) throw PolicyFailure("unparseable decomposition");
    return subtasks;
}

Decision LlmPolicy::decide(const TaskGoal& goal, const PlanState& plan,
                           const std::vector<StepRecord>& history,
                           const ctx::ContextSnapshot& snapshot, const vmc::RawObservation& raw) {
    std::ostringstream text;
    text << "Task: " << goal.instruction << "\n\nPlan:\n";
    for (std::size_t i = 0; i < plan.subtasks.size(); ++i) {
        const char* mark = plan.subtasks[i].status == SubtaskStatus::kDone      ? "[x]"
                           : plan.subtasks[i].status == SubtaskStatus::kActive  ? "[>]"
                                                                                : "[ ]";
        text << "  " << mark << " " << plan.subtasks[i].description << "\n";
    }
    text << "\nScreen elements:\n" << ctx::render_context(snapshot, kPromptContextBudget) << "\n";
    if (!history.empty()) {
        text << "\nRecent steps:\n";
        const std::size_t from =
            history.size() > kHistoryWindow ? history.size() - kHistoryWindow : 0;
        for (std::size_t i = from; i < history.size(); ++i) {
            const StepRecord& rec = history[i];
            text << "  step " << rec.step << ": " << rec.thought << " -> "
                 << actions::action_to_json(rec.action).dump();
            if (rec.exec) text << (rec.exec->ok ? " (ok)" : " (failed: " + rec.exec->detail + ")");
            text << "\n";
        }
    }
    text << "\nSteps used: " << history.size() << " of " << goal.budget << ".";

    const json messages = json::array(
        {{{"role", "system"}, {"content", kSystemRules}},
         {{"role", "user"},
          {"content",
           json::array(
               {{{"type", "text"}, {"text", text.str()}},
                {{"type", "image_url"},
                 {"image_url",
                  {{"url", "data:image/png;base64," + base64_encode(raw.screenshot)}}}}})}}});

    for (int attempt = 0; attempt <= kParseRetries; ++attempt) {
        std::string reply;
        try {
            reply = complete(messages);
        } catch (const PolicyFailure& e) {
            // Transport or endpoint-shape trouble will not improve by asking
            // again with the same prompt; end the episode with the reason.
            return fail_decision("", e.what());
        }
        const auto fenced = extract_fenced(reply);
        if (!fenced || !fenced->second.is_object()) continue;
        json doc = fenced->second;
        const bool subtask_done = doc.value("subtask_done", false);
        doc.erase("subtask_done");
        try {
            return {fenced->first, actions::parse_action(doc), subtask_done};
        } catch (const std::exception&) {
            continue;
        }
    }
    return fail_decision("", "unparseable policy output");
}

}  // namespace litecua::agent
