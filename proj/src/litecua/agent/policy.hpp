#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "litecua/agent/agent.hpp"

namespace litecua::agent {

// How many recent steps the model policy replays into its prompt.
inline constexpr int kHistoryWindow = 5;
// Character budget for the element table rendered into the prompt.
inline constexpr int kPromptContextBudget = 4096;
// One initial request plus this many retries before giving up on a step.
inline constexpr int kParseRetries = 2;

class ScriptError : public std::runtime_error {
public:
    explicit ScriptError(const std::string& what) : std::runtime_error(what) {}
};

// One task's scripted steps. Each step is a JSON action document where targets
// may be written as "match": element name or [x, y] (and "match_from" /
// "match_to" for drags); names are grounded against the live snapshot at
// decision time. loop repeats the table forever instead of failing at the end.
struct ScriptTable {
    std::vector<nlohmann::json> steps;
    bool loop = false;
};

using ScriptBook = std::map<std::string, ScriptTable>;

// Reads every *.json file in dir. Each file maps task_id -> steps array or
// {"steps": [...], "loop": bool}. A task_id appearing twice is an error.
ScriptBook load_scripts(const std::string& dir);
ScriptTable parse_script_entry(const nlohmann::json& entry);

// Deterministic table-driven reasoner used by every test. plan() is always
// the single whole-instruction subtask.
class ScriptedPolicy : public Policy {
public:
    explicit ScriptedPolicy(ScriptBook book) : book_(std::move(book)) {}

    std::vector<std::string> plan(const TaskGoal& goal,
                                  const ctx::ContextSnapshot& snapshot) override;
    Decision decide(const TaskGoal& goal, const PlanState& plan,
                    const std::vector<StepRecord>& history, const ctx::ContextSnapshot& snapshot,
                    const vmc::RawObservation& raw) override;

private:
    ScriptBook book_;
};

// Does nothing, forever: every step waits one second. The budget-exhaustion
// baseline.
class NullPolicy : public Policy {
public:
    std::vector<std::string> plan(const TaskGoal& goal,
                                  const ctx::ContextSnapshot& snapshot) override;
    Decision decide(const TaskGoal& goal, const PlanState& plan,
                    const std::vector<StepRecord>& history, const ctx::ContextSnapshot& snapshot,
                    const vmc::RawObservation& raw) override;
};

struct LlmConfig {
    std::string url;    // chat-completion endpoint, e.g. http://host:port/v1/chat/completions
    std::string key;    // sent as "Authorization: Bearer <key>" when non-empty
    std::string model;
    double timeout_s = 60.0;

    // Reads LITECUA_LLM_URL, LITECUA_LLM_KEY, LITECUA_MODEL.
    static LlmConfig from_env();
};

// Splits a reply into the prose before the first fenced code block and the
// parsed JSON inside it. Empty when there is no fence or the block is not JSON.
std::optional<std::pair<std::string, nlohmann::json>> extract_fenced(const std::string& reply);

// Model-backed reasoner speaking a generic chat-completion JSON shape. Each
// decision sends the goal, plan, rendered element table, the last few steps,
// and the current screenshot; the reply's fenced JSON block is the action and
// the text before it the thought.
class LlmPolicy : public Policy {
public:
    explicit LlmPolicy(LlmConfig config) : config_(std::move(config)) {}

    std::vector<std::string> plan(const TaskGoal& goal,
                                  const ctx::ContextSnapshot& snapshot) override;
    Decision decide(const TaskGoal& goal, const PlanState& plan,
                    const std::vector<StepRecord>& history, const ctx::ContextSnapshot& snapshot,
                    const vmc::RawObservation& raw) override;

private:
    // One round trip; returns the assistant's text. Throws PolicyFailure on
    // transport or shape problems.
    std::string complete(const nlohmann::json& messages);

    LlmConfig config_;
};

}  // namespace litecua::agent
