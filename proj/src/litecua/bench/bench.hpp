#pragma once

#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "litecua/agent/agent.hpp"

namespace litecua::bench {

class InvalidTask : public std::runtime_error {
public:
    InvalidTask(const std::string& file, const std::string& reason)
        : std::runtime_error(file + ": " + reason), file(file), reason(reason) {}
    std::string file;
    std::string reason;
};

class MissingScene : public std::runtime_error {
public:
    MissingScene(const std::string& file, const std::string& scene_id)
        : std::runtime_error(file + ": scene '" + scene_id + "' not found"), scene_id(scene_id) {}
    std::string scene_id;
};

// One benchmark task: a goal, the seed the machine is reset with, and the
// predicate tree that scores the final state.
struct TaskSpec {
    agent::TaskGoal goal;
    long seed = 0;
    nlohmann::json evaluator;
};

// Throws std::runtime_error with a reason when the predicate tree is not one
// of: all_of{children, weights?}, any_of{children}, element_value_equals
// {name, value}, element_checked{name, expected}, window_open{title, expected},
// pressed_at_least{name, count}.
void validate_evaluator(const nlohmann::json& node);

// Parses every *.json file in dir (one task per file) and returns the tasks
// ordered by task_id. known_scenes guards scene references at load time.
std::vector<TaskSpec> load_tasks(const std::string& dir, const std::set<std::string>& known_scenes);

// Scores a final machine state document (the /state shape, scene included)
// against a predicate tree. Leaves score 1 or 0; any_of takes the max of its
// children; all_of their weighted mean (uniform when weights are omitted).
// A leaf naming an unknown element scores 0 and leaves a warning.
double evaluate(const nlohmann::json& state, const nlohmann::json& evaluator,
                std::vector<std::string>* warnings = nullptr);

struct ResultRow {
    std::string task_id;
    std::string domain;
    double score = 0.0;
    int steps_used = 0;
    std::string terminated_by;
    std::string error;
};

struct DomainRow {
    std::string domain;
    double score_sum = 0.0;
    int task_count = 0;
    double average_steps = 0.0;

    bool operator==(const DomainRow&) const = default;
};

struct RunReport {
    std::vector<DomainRow> rows;  // sorted by domain
    DomainRow total;              // domain = "Total"
    double success_rate = 0.0;    // 100 * total score over total tasks

    bool operator==(const RunReport&) const = default;
};

// Groups results by domain. Values are kept exact here; rounding belongs to
// rendering. Throws std::invalid_argument on an empty result set.
RunReport aggregate(const std::vector<ResultRow>& results);

// The text table: a header, one row per domain, a Total row, and a final
// success-rate line. Integral score sums print bare ("13"), fractional ones
// with two decimals ("2.10"); step averages get one decimal.
std::string render_text(const RunReport& report);

nlohmann::json report_to_json(const RunReport& report);
RunReport report_from_json(const nlohmann::json& doc);

nlohmann::json result_to_json(const ResultRow& row);
ResultRow result_from_json(const nlohmann::json& doc);

// Reads <dir>/results.jsonl back into rows (the re-aggregation path).
std::vector<ResultRow> load_results(const std::string& dir);

struct SuiteOptions {
    std::string vm_url;      // machine endpoint (single-worker mode)
    std::string out_dir;     // trajectory logs + results.jsonl land here
    std::string scenes_dir;  // required for parallel > 1: each worker gets its own machine
    int parallel = 1;
    int budget_override = 0;  // 0 keeps each task's own budget
};

struct SuiteOutcome {
    RunReport report;
    std::vector<ResultRow> results;  // sorted by task_id
    int episode_errors = 0;
};

// Runs every task: reset, episode, final-state evaluation, trajectory log.
// Episode failures score 0 and are recorded; the suite always finishes.
SuiteOutcome run_suite(const std::vector<TaskSpec>& tasks, agent::Policy& policy,
                       const SuiteOptions& options);

struct ReplayOutcome {
    double stored_score = 0.0;
    double replayed_score = 0.0;
    int steps_replayed = 0;
    bool match = false;
};

// Re-executes a trajectory log's actions against a freshly reset machine and
// rescores the final state with the evaluator stored in the outcome line.
ReplayOutcome replay_trajectory(const std::string& file, vmc::VmClient& client);

}  // namespace litecua::bench
