#include "litecua/bench/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <thread>

#include "litecua/sim/server.hpp"
#include "litecua/vmc/client.hpp"

namespace litecua::bench {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void require(bool ok, const std::string& reason) {
    if (!ok) throw std::runtime_error(reason);
}

}  // namespace

void validate_evaluator(const json& node) {
    require(node.is_object(), "evaluator node must be an object, got " + node.dump());
    require(node.contains("type") && node.at("type").is_string(), "evaluator node needs a string type");
    const std::string type = node.at("type");

    if (type == "all_of" || type == "any_of") {
        require(node.contains("children") && node.at("children").is_array() &&
                    !node.at("children").empty(),
                type + " needs a non-empty children array");
        for (const json& child : node.at("children")) validate_evaluator(child);
        if (type == "all_of" && node.contains("weights")) {
            const json& w = node.at("weights");
            require(w.is_array() && w.size() == node.at("children").size(),
                    "weights must match the child count");
            for (const json& x : w) {
                require(x.is_number() && x.get<double>() > 0, "weights must be positive numbers");
            }
        }
        return;
    }
    if (type == "element_value_equals") {
        require(node.contains("name") && node.at("name").is_string(), type + " needs a string name");
        require(node.contains("value") && node.at("value").is_string(), type + " needs a string value");
        return;
    }
    if (type == "element_checked") {
        require(node.contains("name") && node.at("name").is_string(), type + " needs a string name");
        require(node.contains("expected") && node.at("expected").is_boolean(),
                type + " needs a boolean expected");
        return;
    }
    if (type == "window_open") {
        require(node.contains("title") && node.at("title").is_string(), type + " needs a string title");
        require(node.contains("expected") && node.at("expected").is_boolean(),
                type + " needs a boolean expected");
        return;
    }
    if (type == "pressed_at_least") {
        require(node.contains("name") && node.at("name").is_string(), type + " needs a string name");
        require(node.contains("count") && node.at("count").is_number_integer() &&
                    node.at("count").get<int>() >= 1,
                type + " needs an integer count >= 1");
        return;
    }
    throw std::runtime_error("unknown evaluator node type '" + type + "'");
}

std::vector<TaskSpec> load_tasks(const std::string& dir, const std::set<std::string>& known_scenes) {
    if (!fs::is_directory(dir)) throw InvalidTask(dir, "not a directory");
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.path().extension() == ".json") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());

    std::vector<TaskSpec> tasks;
    std::set<std::string> seen_ids;
    for (const fs::path& file : files) {
        std::ifstream in(file);
        const json doc = json::parse(in, nullptr, false);
        if (doc.is_discarded() || !doc.is_object()) throw InvalidTask(file.string(), "not a JSON object");

        TaskSpec task;
        try {
            for (const char* field : {"task_id", "instruction", "domain", "scene_id"}) {
                require(doc.contains(field) && doc.at(field).is_string(),
                        std::string("missing string field '") + field + "'");
            }
            task.goal.task_id = doc.at("task_id");
            task.goal.instruction = doc.at("instruction");
            task.goal.domain = doc.at("domain");
            task.goal.scene_id = doc.at("scene_id");
            task.goal.budget = doc.value("budget", agent::kDefaultBudget);
            require(task.goal.budget >= 1, "budget must be >= 1");
            task.seed = doc.value("seed", 0L);
            require(doc.contains("evaluator"), "missing evaluator");
            validate_evaluator(doc.at("evaluator"));
            task.evaluator = doc.at("evaluator");
        } catch (const std::runtime_error& e) {
            throw InvalidTask(file.string(), e.what());
        }

        if (!seen_ids.insert(task.goal.task_id).second) {
            throw InvalidTask(file.string(), "duplicate task_id '" + task.goal.task_id + "'");
        }
        if (!known_scenes.count(task.goal.scene_id)) {
            throw MissingScene(file.string(), task.goal.scene_id);
        }
        tasks.push_back(std::move(task));
    }
    std::sort(tasks.begin(), tasks.end(),
              [](const TaskSpec& a, const TaskSpec& b) { return a.goal.task_id < b.goal.task_id; });
    return tasks;
}

namespace {

void warn(std::vector<std::string>* warnings, const std::string& message) {
    if (warnings) warnings->push_back(message);
}

struct FoundWidget {
    const json* state;  // the live widget state entry
    std::string role;
};

// Display-name lookup via the scene spec embedded in the state document.
std::optional<FoundWidget> find_by_name(const json& state, const std::string& name) {
    for (const json& win : state.at("scene").at("windows")) {
        for (const json& w : win.at("widgets")) {
            if (w.at("name") == name) {
                const std::string id = w.at("id").get<std::string>();
                return FoundWidget{&state.at("widgets").at(id), w.at("role").get<std::string>()};
            }
        }
    }
    return std::nullopt;
}

double eval_node(const json& state, const json& node, std::vector<std::string>* warnings) {
    const std::string type = node.at("type").get<std::string>();

    if (type == "all_of") {
        const json& children = node.at("children");
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < children.size(); ++i) {
            const double w = node.contains("weights") ? node.at("weights").at(i).get<double>() : 1.0;
            num += w * eval_node(state, children.at(i), warnings);
            den += w;
        }
        return num / den;
    }
    if (type == "any_of") {
        double best = 0.0;
        for (const json& child : node.at("children")) {
            best = std::max(best, eval_node(state, child, warnings));
        }
        return best;
    }
    if (type == "window_open") {
        const std::string title = node.at("title").get<std::string>();
        const json& windows = state.at("windows");
        if (!windows.contains(title)) {
            warn(warnings, "unknown window '" + title + "'");
            return 0.0;
        }
        return windows.at(title).get<bool>() == node.at("expected").get<bool>() ? 1.0 : 0.0;
    }

    const std::string name = node.at("name").get<std::string>();
    const auto found = find_by_name(state, name);
    if (!found) {
        warn(warnings, "unknown element name '" + name + "'");
        return 0.0;
    }
    if (type == "element_value_equals") {
        // Scrollbars read as their offset, the same view a11y consumers get.
        const std::string actual = found->role == "scrollbar"
                                       ? std::to_string(found->state->at("scroll_offset").get<int>())
                                       : found->state->at("value").get<std::string>();
        return actual == node.at("value").get<std::string>() ? 1.0 : 0.0;
    }
    if (type == "element_checked") {
        return found->state->at("checked").get<bool>() == node.at("expected").get<bool>() ? 1.0 : 0.0;
    }
    if (type == "pressed_at_least") {
        return found->state->at("pressed_count").get<int>() >= node.at("count").get<int>() ? 1.0 : 0.0;
    }
    throw std::runtime_error("unknown evaluator node type '" + type + "'");
}

}  // namespace

double evaluate(const json& state, const json& evaluator, std::vector<std::string>* warnings) {
    return std::clamp(eval_node(state, evaluator, warnings), 0.0, 1.0);
}

RunReport aggregate(const std::vector<ResultRow>& results) {
    if (results.empty()) throw std::invalid_argument("cannot aggregate an empty result set");

    struct Bucket {
        double score = 0.0;
        int count = 0;
        long steps = 0;
    };
    std::map<std::string, Bucket> buckets;
    Bucket total;
    for (const ResultRow& r : results) {
        Bucket& b = buckets[r.domain];
        b.score += r.score;
        b.count += 1;
        b.steps += r.steps_used;
        total.score += r.score;
        total.count += 1;
        total.steps += r.steps_used;
    }

    RunReport report;
    for (const auto& [domain, b] : buckets) {
        report.rows.push_back({domain, b.score, b.count, static_cast<double>(b.steps) / b.count});
    }
    report.total = {"Total", total.score, total.count, static_cast<double>(total.steps) / total.count};
    report.success_rate = 100.0 * total.score / total.count;
    return report;
}

namespace {

std::string fmt(const char* spec, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), spec, v);
    return buf;
}

// "13" for whole sums, "54.10" otherwise.
std::string fmt_score(double s) {
    if (std::fabs(s - std::round(s)) < 1e-9) {
        return std::to_string(static_cast<long long>(std::llround(s)));
    }
    return fmt("%.2f", s);
}

std::string render_row(const DomainRow& row) {
    return row.domain + "  " + fmt_score(row.score_sum) + "/" + std::to_string(row.task_count) +
           "  " + fmt("%.1f", row.average_steps);
}

}  // namespace

std::string render_text(const RunReport& report) {
    std::string out = "Domain  Score  Average Steps\n";
    for (const DomainRow& row : report.rows) out += render_row(row) + "\n";
    out += render_row(report.total) + "\n";
    out += "Success rate: " + fmt("%.2f", report.success_rate) + "%\n";
    return out;
}

namespace {

json domain_row_to_json(const DomainRow& row) {
    return {{"domain", row.domain},
            {"score_sum", row.score_sum},
            {"task_count", row.task_count},
            {"average_steps", row.average_steps}};
}

DomainRow domain_row_from_json(const json& doc) {
    return {doc.at("domain").get<std::string>(), doc.at("score_sum").get<double>(),
            doc.at("task_count").get<int>(), doc.at("average_steps").get<double>()};
}

}  // namespace

json report_to_json(const RunReport& report) {
    json rows = json::array();
    for (const DomainRow& row : report.rows) rows.push_back(domain_row_to_json(row));
    return {{"rows", std::move(rows)},
            {"total", domain_row_to_json(report.total)},
            {"success_rate", report.success_rate}};
}

RunReport report_from_json(const json& doc) {
    RunReport report;
    for (const json& row : doc.at("rows")) report.rows.push_back(domain_row_from_json(row));
    report.total = domain_row_from_json(doc.at("total"));
    report.success_rate = doc.at("success_rate").get<double>();
    return report;
}

json result_to_json(const ResultRow& row) {
    return {{"task_id", row.task_id},     {"domain", row.domain},
            {"score", row.score},         {"steps_used", row.steps_used},
            {"terminated_by", row.terminated_by}, {"error", row.error}};
}

ResultRow result_from_json(const json& doc) {
    return {doc.at("task_id").get<std::string>(),
            doc.at("domain").get<std::string>(),
            doc.at("score").get<double>(),
            doc.at("steps_used").get<int>(),
            doc.at("terminated_by").get<std::string>(),
            doc.value("error", "")};
}

std::vector<ResultRow> load_results(const std::string& dir) {
    const fs::path file = fs::path(dir) / "results.jsonl";
    std::ifstream in(file);
    if (!in) throw std::runtime_error("cannot read " + file.string());
    std::vector<ResultRow> rows;
    for (std::string line; std::getline(in, line);) {
        if (line.empty()) continue;
        rows.push_back(result_from_json(json::parse(line)));
    }
    return rows;
}

namespace {

ResultRow run_one(const TaskSpec& task, agent::Policy& policy, vmc::VmClient& client,
                  const SuiteOptions& options) {
    agent::TaskGoal goal = task.goal;
    if (options.budget_override > 0) goal.budget = options.budget_override;

    ResultRow row;
    row.task_id = goal.task_id;
    row.domain = goal.domain;
    try {
        client.reset(goal.scene_id, task.seed);
        agent::Trajectory traj = agent::run_episode(goal, client, policy);
        if (traj.outcome.terminated_by != agent::TerminatedBy::kError) {
            traj.outcome.score = evaluate(client.state(), task.evaluator, &traj.warnings);
        }
        row.score = traj.outcome.score;
        row.steps_used = traj.outcome.steps_used;
        row.terminated_by = agent::terminated_by_name(traj.outcome.terminated_by);
        row.error = traj.outcome.error;
        if (!options.out_dir.empty()) {
            std::ofstream log(fs::path(options.out_dir) / (goal.task_id + ".jsonl"));
            agent::write_trajectory(log, traj, goal,
                                    json{{"seed", task.seed}, {"evaluator", task.evaluator}});
        }
    } catch (const std::exception& e) {
        // Reset failures, transport loss outside the episode, broken
        // evaluators: score 0, note the reason, keep the suite moving.
        row.score = 0.0;
        row.terminated_by = "error";
        row.error = e.what();
    }
    return row;
}

}  // namespace

SuiteOutcome run_suite(const std::vector<TaskSpec>& tasks, agent::Policy& policy,
                       const SuiteOptions& options) {
    if (tasks.empty()) throw std::invalid_argument("no tasks to run");
    if (options.parallel > 1 && options.scenes_dir.empty()) {
        throw std::invalid_argument("parallel runs need a scenes directory for per-worker machines");
    }
    if (!options.out_dir.empty()) fs::create_directories(options.out_dir);

    std::vector<ResultRow> results(tasks.size());
    if (options.parallel <= 1) {
        vmc::VmClient client(options.vm_url);
        for (std::size_t i = 0; i < tasks.size(); ++i) {
            results[i] = run_one(tasks[i], policy, client, options);
        }
    } else {
        const sim::SceneLibrary scenes = sim::load_scene_dir(options.scenes_dir);
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> workers;
        const int n = std::min<int>(options.parallel, static_cast<int>(tasks.size()));
        for (int w = 0; w < n; ++w) {
            workers.emplace_back([&] {
                sim::SimServer server(scenes, scenes.begin()->first);
                server.start("127.0.0.1", 0);
                vmc::VmClient client(server.url());
                for (std::size_t i = next.fetch_add(1); i < tasks.size(); i = next.fetch_add(1)) {
                    results[i] = run_one(tasks[i], policy, client, options);
                }
            });
        }
        for (std::thread& t : workers) t.join();
    }

    std::sort(results.begin(), results.end(),
              [](const ResultRow& a, const ResultRow& b) { return a.task_id < b.task_id; });
    if (!options.out_dir.empty()) {
        std::ofstream out(fs::path(options.out_dir) / "results.jsonl");
        for (const ResultRow& row : results) out << result_to_json(row).dump() << '\n';
    }

    SuiteOutcome outcome;
    outcome.report = aggregate(results);
    outcome.results = std::move(results);
    for (const ResultRow& row : outcome.results) outcome.episode_errors += row.terminated_by == "error";
    return outcome;
}

ReplayOutcome replay_trajectory(const std::string& file, vmc::VmClient& client) {
    std::ifstream in(file);
    if (!in) throw std::runtime_error("cannot read trajectory " + file);

    std::vector<json> steps;
    json outcome;
    for (std::string line; std::getline(in, line);) {
        if (line.empty()) continue;
        json doc = json::parse(line);
        if (doc.at("type") == "step") {
            steps.push_back(std::move(doc));
        } else if (doc.at("type") == "outcome") {
            outcome = std::move(doc);
        }
    }
    if (outcome.is_null()) throw std::runtime_error("trajectory has no outcome line: " + file);

    client.reset(outcome.at("scene_id").get<std::string>(), outcome.at("seed").get<long>());

    ReplayOutcome result;
    for (const json& step : steps) {
        const actions::SemanticAction action = actions::parse_action(step.at("action"));
        if (actions::is_terminal(action)) break;
        const ctx::ContextSnapshot snap = agent::perceive(client.observe());
        (void)agent::act(action, snap, client);
        ++result.steps_replayed;
    }

    result.stored_score = outcome.at("score").get<double>();
    result.replayed_score = evaluate(client.state(), outcome.at("evaluator"));
    result.match = std::fabs(result.stored_score - result.replayed_score) < 1e-9;
    return result;
}

}  // namespace litecua::bench
