#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "litecua/actions/action.hpp"
#include "litecua/ctx/context.hpp"
#include "litecua/vmc/client.hpp"

namespace litecua::agent {

inline constexpr int kDefaultBudget = 50;

// How many characters of rendered context each step record keeps. Generous
// enough to hold every fixture scene; the log stays readable either way.
inline constexpr int kLogContextBudget = 2048;

struct TaskGoal {
    std::string task_id;
    std::string instruction;
    std::string domain;
    std::string scene_id;
    int budget = kDefaultBudget;  // must be >= 1
};

enum class SubtaskStatus { kPending, kActive, kDone, kAbandoned };

struct Subtask {
    std::string description;
    SubtaskStatus status = SubtaskStatus::kPending;
};

// The orchestrator's working memory: an ordered decomposition with a cursor on
// the subtask currently being pursued. At most one subtask is active.
struct PlanState {
    std::vector<Subtask> subtasks;
    std::size_t cursor = 0;
};

struct StepRecord {
    int step = 0;  // 1-based, strictly increasing
    std::string snapshot_hash;
    std::string context_text;
    std::string thought;
    actions::SemanticAction action;
    // Engaged for actions that went to the machine (even refused ones);
    // empty for terminal Done/Fail markers, which produce no wire traffic.
    std::optional<vmc::ExecResult> exec;
};

enum class TerminatedBy { kDone, kFail, kBudgetExhausted, kError };

std::string terminated_by_name(TerminatedBy t);

struct Outcome {
    TerminatedBy terminated_by = TerminatedBy::kError;
    int steps_used = 0;
    double score = 0.0;  // filled by the harness after evaluation
    std::string error;   // only for kError
};

struct Trajectory {
    std::string task_id;
    std::vector<StepRecord> records;
    Outcome outcome;
    std::vector<std::string> warnings;
};

class PolicyFailure : public std::runtime_error {
public:
    explicit PolicyFailure(const std::string& what) : std::runtime_error(what) {}
};

// What the reasoner hands back each step: an interpretation of the current
// state plus the one action to take. subtask_done advances the plan cursor.
struct Decision {
    std::string thought;
    actions::SemanticAction action;
    bool subtask_done = false;
};

// The reasoning port. The episode loop never knows whether decisions come from
// a fixed table or a model endpoint.
class Policy {
public:
    virtual ~Policy() = default;

    // Initial task decomposition, one description per subtask. Throwing
    // PolicyFailure makes the orchestrator fall back to a single subtask.
    virtual std::vector<std::string> plan(const TaskGoal& goal,
                                          const ctx::ContextSnapshot& snapshot) = 0;

    virtual Decision decide(const TaskGoal& goal, const PlanState& plan,
                            const std::vector<StepRecord>& history,
                            const ctx::ContextSnapshot& snapshot,
                            const vmc::RawObservation& raw) = 0;
};

// Raw observation -> contextualized snapshot (ingest, compact, annotate).
ctx::ContextSnapshot perceive(const vmc::RawObservation& raw);

// Builds the initial plan through the policy. A PolicyFailure falls back to a
// single subtask covering the whole instruction and leaves a warning.
PlanState orchestrate(const TaskGoal& goal, const ctx::ContextSnapshot& snapshot, Policy& policy,
                      std::vector<std::string>* warnings = nullptr);

// Marks the active subtask done and activates the next pending one.
void advance_plan(PlanState& plan);

// Executes one semantic action. Terminal actions return nothing and touch no
// wire. Grounding failures (unknown element, off-screen point) come back as a
// failed ExecResult so the episode can continue; transport errors propagate.
std::optional<vmc::ExecResult> act(const actions::SemanticAction& action,
                                   const ctx::ContextSnapshot& snapshot, vmc::VmClient& vm);

// The perceive-reason-act loop. The caller is responsible for resetting the
// machine to the right scene and seed beforehand.
Trajectory run_episode(const TaskGoal& goal, vmc::VmClient& vm, Policy& policy);

// Trajectory log serialization: one JSON document per line, step records in
// order, then a single outcome record that echoes the task so the log alone
// suffices for replay. extra is merged into the outcome line (seed, evaluator).
nlohmann::json record_to_json(const StepRecord& rec);
nlohmann::json outcome_to_json(const Trajectory& traj, const TaskGoal& goal);
void write_trajectory(std::ostream& out, const Trajectory& traj, const TaskGoal& goal,
                      const nlohmann::json& extra = nlohmann::json::object());

}  // namespace litecua::agent
