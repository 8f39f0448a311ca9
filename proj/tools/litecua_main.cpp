// litecua: one binary for the whole workbench.
//
//   serve   run the simulated desktop over HTTP
//   mcp     expose a running machine as MCP tools (stdio or HTTP)
//   run     drive a task suite end to end and report scores
//   report  re-aggregate a stored results file
//   replay  re-execute a trajectory log and check its score
//
// Exit codes: 0 on success, 1 for usage problems, 2 when a suite finished
// with episode errors or a replay failed to match.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <map>
#include <memory>
#include <set>
#include <string>

#include <CLI11.hpp>

#include "litecua/agent/policy.hpp"
#include "litecua/bench/bench.hpp"
#include "litecua/mcp/server.hpp"
#include "litecua/sim/scene.hpp"
#include "litecua/sim/server.hpp"
#include "litecua/vmc/client.hpp"

using namespace litecua;

namespace {

struct Bind {
    std::string host;
    int port = 0;
};

Bind parse_bind(const std::string& spec) {
    const auto colon = spec.rfind(':');
    if (colon == std::string::npos || colon == 0 || colon + 1 == spec.size()) {
        throw CLI::ValidationError("--bind", "expected addr:port, got '" + spec + "'");
    }
    Bind bind;
    bind.host = spec.substr(0, colon);
    try {
        bind.port = std::stoi(spec.substr(colon + 1));
    } catch (const std::exception&) {
        throw CLI::ValidationError("--bind", "port is not a number in '" + spec + "'");
    }
    if (bind.port < 0 || bind.port > 65535) {
        throw CLI::ValidationError("--bind", "port out of range in '" + spec + "'");
    }
    return bind;
}

[[noreturn]] void block_forever() {
    // The serving threads own all the work from here on.
    std::promise<void>().get_future().wait();
    std::abort();  // unreachable
}

int cmd_serve(const std::string& scenes_dir, const std::string& bind_spec) {
    const Bind bind = parse_bind(bind_spec);
    const sim::SceneLibrary scenes = sim::load_scene_dir(scenes_dir);
    if (scenes.empty()) {
        std::cerr << "error: no scene files in " << scenes_dir << "\n";
        return 1;
    }
    sim::SimServer server(scenes, scenes.begin()->first);
    server.start(bind.host, bind.port);
    std::cout << "simulated desktop at " << server.url() << "\n";
    std::cout << "scenes:";
    for (const auto& [name, scene] : scenes) std::cout << " " << name;
    std::cout << " (default: " << scenes.begin()->first << ")\n" << std::flush;
    block_forever();
}

int cmd_mcp(const std::string& transport, const std::string& bind_spec, const std::string& vm_url) {
    vmc::VmClient vm(vm_url);
    if (transport == "stdio") {
        mcp::McpSession session(vm);
        mcp::serve_stdio(session, std::cin, std::cout);
        return 0;  // client hung up
    }
    const Bind bind = parse_bind(bind_spec);
    mcp::McpHttpServer server(vm);
    server.start(bind.host, bind.port);
    std::cerr << "MCP endpoint at " << server.url() << " (machine: " << vm_url << ")\n";
    block_forever();
}

int cmd_run(const std::string& tasks_dir, const std::string& vm_url, const std::string& policy_name,
            const std::string& scripts_dir, const std::string& scenes_dir, int budget,
            const std::string& out_dir, int parallel) {
    // With a scene library at hand tasks are validated against it up front;
    // without one, scene names are taken on faith and a bad one surfaces as
    // an episode error when the machine rejects the reset.
    std::set<std::string> known_scenes;
    if (!scenes_dir.empty()) {
        for (const auto& [name, scene] : sim::load_scene_dir(scenes_dir)) known_scenes.insert(name);
    }
    std::vector<bench::TaskSpec> tasks = bench::load_tasks(
        tasks_dir, known_scenes.empty() ? [&] {
            std::set<std::string> trust;
            for (const auto& entry : std::filesystem::directory_iterator(tasks_dir)) {
                if (entry.path().extension() != ".json") continue;
                std::ifstream in(entry.path());
                const auto doc = nlohmann::json::parse(in, nullptr, false);
                if (doc.is_object() && doc.contains("scene_id") && doc.at("scene_id").is_string()) {
                    trust.insert(doc.at("scene_id").get<std::string>());
                }
            }
            return trust;
        }() : known_scenes);

    std::unique_ptr<agent::Policy> policy;
    if (policy_name == "scripted") {
        if (scripts_dir.empty()) {
            std::cerr << "error: --policy scripted needs --scripts <dir>\n";
            return 1;
        }
        policy = std::make_unique<agent::ScriptedPolicy>(agent::load_scripts(scripts_dir));
    } else if (policy_name == "llm") {
        const agent::LlmConfig cfg = agent::LlmConfig::from_env();
        if (cfg.url.empty()) {
            std::cerr << "error: --policy llm needs LITECUA_LLM_URL in the environment\n";
            return 1;
        }
        policy = std::make_unique<agent::LlmPolicy>(cfg);
    } else if (policy_name == "null") {
        policy = std::make_unique<agent::NullPolicy>();
    } else {
        std::cerr << "error: unknown policy '" << policy_name << "'\n";
        return 1;
    }

    bench::SuiteOptions options;
    options.vm_url = vm_url;
    options.out_dir = out_dir;
    options.scenes_dir = scenes_dir;
    options.parallel = parallel;
    options.budget_override = budget;
    const bench::SuiteOutcome outcome = bench::run_suite(tasks, *policy, options);

    std::cout << bench::render_text(outcome.report);
    if (outcome.episode_errors > 0) {
        std::cerr << outcome.episode_errors << " of " << outcome.results.size()
                  << " episodes ended in errors\n";
        return 2;
    }
    return 0;
}

int cmd_report(const std::string& in_dir, const std::string& format) {
    const bench::RunReport report = bench::aggregate(bench::load_results(in_dir));
    if (format == "json") {
        std::cout << bench::report_to_json(report).dump(2) << "\n";
    } else {
        std::cout << bench::render_text(report);
    }
    return 0;
}

int cmd_replay(const std::string& trajectory, const std::string& vm_url) {
    vmc::VmClient client(vm_url);
    const bench::ReplayOutcome outcome = bench::replay_trajectory(trajectory, client);
    std::cout << "steps replayed: " << outcome.steps_replayed << "\n";
    std::cout << "stored score:   " << outcome.stored_score << "\n";
    std::cout << "replayed score: " << outcome.replayed_score << "\n";
    std::cout << (outcome.match ? "match\n" : "MISMATCH\n");
    return outcome.match ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"simulated-desktop agent workbench"};
    app.require_subcommand(1);

    // serve
    std::string scenes_dir, bind_spec = "127.0.0.1:8000";
    auto* serve = app.add_subcommand("serve", "run the simulated desktop");
    serve->add_option("--scenes", scenes_dir, "scene library directory")
        ->required()
        ->check(CLI::ExistingDirectory);
    serve->add_option("--bind", bind_spec, "listen address (addr:port)");

    // mcp
    std::string transport = "stdio", mcp_bind = "127.0.0.1:8100", vm_url = "http://127.0.0.1:8000";
    auto* mcp_cmd = app.add_subcommand("mcp", "serve MCP tools for a running machine");
    mcp_cmd->add_option("--transport", transport, "stdio or http")
        ->check(CLI::IsMember({"stdio", "http"}));
    mcp_cmd->add_option("--bind", mcp_bind, "listen address for http transport");
    mcp_cmd->add_option("--vm", vm_url, "machine base URL");

    // run
    std::string tasks_dir, scripts_dir, run_scenes, out_dir, policy_name = "scripted";
    std::string run_vm = "http://127.0.0.1:8000";
    int budget = 0, parallel = 1;
    auto* run = app.add_subcommand("run", "run a benchmark suite");
    run->add_option("--tasks", tasks_dir, "task spec directory")
        ->required()
        ->check(CLI::ExistingDirectory);
    run->add_option("--vm", run_vm, "machine base URL");
    run->add_option("--policy", policy_name, "scripted, llm, or null");
    run->add_option("--scripts", scripts_dir, "script book directory (for --policy scripted)");
    run->add_option("--scenes", run_scenes, "scene library (validates tasks; enables --parallel)");
    run->add_option("--budget", budget, "override every task's step budget");
    run->add_option("--out", out_dir, "write results.jsonl and per-task logs here");
    run->add_option("--parallel", parallel, "worker count, each with its own machine")
        ->check(CLI::PositiveNumber);

    // report
    std::string in_dir, format = "text";
    auto* report = app.add_subcommand("report", "re-aggregate stored results");
    report->add_option("--in", in_dir, "directory holding results.jsonl")
        ->required()
        ->check(CLI::ExistingDirectory);
    report->add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));

    // replay
    std::string trajectory;
    std::string replay_vm = "http://127.0.0.1:8000";
    auto* replay = app.add_subcommand("replay", "verify a trajectory log against a machine");
    replay->add_option("--trajectory", trajectory, "trajectory .jsonl file")
        ->required()
        ->check(CLI::ExistingFile);
    replay->add_option("--vm", replay_vm, "machine base URL");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // CLI11 hands each parse failure its own exit code; flatten them so
        // callers only ever see 0 (help/version) or 1 (usage error).
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (serve->parsed()) return cmd_serve(scenes_dir, bind_spec);
        if (mcp_cmd->parsed()) return cmd_mcp(transport, mcp_bind, vm_url);
        if (run->parsed()) {
            return cmd_run(tasks_dir, run_vm, policy_name, scripts_dir, run_scenes, budget, out_dir,
                           parallel);
        }
        if (report->parsed()) return cmd_report(in_dir, format);
        if (replay->parsed()) return cmd_replay(trajectory, replay_vm);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
