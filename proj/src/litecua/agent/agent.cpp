#include "litecua/agent/agent.hpp"

#include <ostream>
#include <stdexcept>

#include "litecua/common/hash.hpp"
#include "litecua/ctx/a11y.hpp"

namespace litecua::agent {

using nlohmann::json;

std::string terminated_by_name(TerminatedBy t) {
    switch (t) {
        case TerminatedBy::kDone: return "done";
        case TerminatedBy::kFail: return "fail";
        case TerminatedBy::kBudgetExhausted: return "budget_exhausted";
        case TerminatedBy::kError: return "error";
    }
    return "error";
}

ctx::ContextSnapshot perceive(const vmc::RawObservation& raw) {
    const ctx::IngestedTree tree = ctx::ingest_a11y(raw.a11y);
    ctx::ContextSnapshot snapshot;
    snapshot.step = static_cast<int>(raw.tick);
    snapshot.screen = raw.screen;
    snapshot.screenshot_hash = fnv1a64(
        std::string_view(reinterpret_cast<const char*>(raw.screenshot.data()), raw.screenshot.size()));
    snapshot.elements = ctx::annotate(ctx::compact(tree.root, raw.screen));
    snapshot.system_info = raw.system_info;
    snapshot.captured_at = raw.tick;
    return snapshot;
}

PlanState orchestrate(const TaskGoal& goal, const ctx::ContextSnapshot& snapshot, Policy& policy,
                      std::vector<std::string>* warnings) {
    PlanState plan;
    std::vector<std::string> descriptions;
    try {
        descriptions = policy.plan(goal, snapshot);
        if (descriptions.empty()) throw PolicyFailure("policy proposed an empty plan");
    } catch (const PolicyFailure& e) {
        if (warnings) {
            warnings->push_back(std::string("plan fallback: ") + e.what());
        }
        descriptions = {goal.instruction};
    }
    for (const std::string& d : descriptions) plan.subtasks.push_back({d, SubtaskStatus::kPending});
    plan.subtasks.front().status = SubtaskStatus::kActive;
    plan.cursor = 0;
    return plan;
}

void advance_plan(PlanState& plan) {
    if (plan.subtasks.empty()) return;
    if (plan.subtasks[plan.cursor].status == SubtaskStatus::kActive) {
        plan.subtasks[plan.cursor].status = SubtaskStatus::kDone;
    }
    if (plan.cursor + 1 < plan.subtasks.size()) {
        ++plan.cursor;
        plan.subtasks[plan.cursor].status = SubtaskStatus::kActive;
    }
}

std::optional<vmc::ExecResult> act(const actions::SemanticAction& action,
                                   const ctx::ContextSnapshot& snapshot, vmc::VmClient& vm) {
    if (actions::is_terminal(action)) return std::nullopt;

    std::vector<actions::PrimitiveCommand> batch;
    try {
        const actions::SemanticAction resolved =
            actions::resolve_targets(action, snapshot.elements, snapshot.screen);
        batch = actions::compile(resolved);
    } catch (const actions::UnknownElement& e) {
        return vmc::ExecResult{false, 0, e.what(), snapshot.step};
    } catch (const actions::OutOfBounds& e) {
        return vmc::ExecResult{false, 0, e.what(), snapshot.step};
    }
    if (batch.empty()) {
        // Nothing to send (e.g. typing an empty string); trivially fine.
        return vmc::ExecResult{true, 0, "", snapshot.step};
    }
    return vm.execute(batch);
}

Trajectory run_episode(const TaskGoal& goal, vmc::VmClient& vm, Policy& policy) {
    if (goal.budget < 1) throw std::invalid_argument("episode budget must be >= 1");

    Trajectory traj;
    traj.task_id = goal.task_id;
    try {
        vmc::RawObservation raw = vm.observe();
        ctx::ContextSnapshot snap = perceive(raw);
        PlanState plan = orchestrate(goal, snap, policy, &traj.warnings);

        for (;;) {
            const Decision decision = policy.decide(goal, plan, traj.records, snap, raw);

            StepRecord rec;
            rec.step = static_cast<int>(traj.records.size()) + 1;
            rec.snapshot_hash = hash_hex(ctx::snapshot_hash(snap));
            rec.context_text = ctx::render_context(snap, kLogContextBudget);
            rec.thought = decision.thought;
            rec.action = decision.action;
            rec.exec = act(decision.action, snap, vm);
            traj.records.push_back(std::move(rec));

            if (actions::is_terminal(decision.action)) {
                traj.outcome.terminated_by = std::holds_alternative<actions::DoneAction>(decision.action)
                                                 ? TerminatedBy::kDone
                                                 : TerminatedBy::kFail;
                break;
            }
            if (static_cast<int>(traj.records.size()) >= goal.budget) {
                traj.outcome.terminated_by = TerminatedBy::kBudgetExhausted;
                break;
            }
            if (decision.subtask_done) advance_plan(plan);

            raw = vm.observe();
            snap = perceive(raw);
        }
    } catch (const vmc::Unreachable& e) {
        traj.outcome.terminated_by = TerminatedBy::kError;
        traj.outcome.error = e.what();
    } catch (const vmc::TornObservation& e) {
        traj.outcome.terminated_by = TerminatedBy::kError;
        traj.outcome.error = e.what();
    } catch (const vmc::ProtocolError& e) {
        traj.outcome.terminated_by = TerminatedBy::kError;
        traj.outcome.error = e.what();
    } catch (const ctx::MalformedTree& e) {
        traj.outcome.terminated_by = TerminatedBy::kError;
        traj.outcome.error = e.what();
    }
    traj.outcome.steps_used = static_cast<int>(traj.records.size());
    return traj;
}

json record_to_json(const StepRecord& rec) {
    json exec = nullptr;
    if (rec.exec) {
        exec = {{"ok", rec.exec->ok},
                {"applied", rec.exec->applied},
                {"detail", rec.exec->detail},
                {"tick_after", rec.exec->tick_after}};
    }
    return {{"type", "step"},
            {"step", rec.step},
            {"snapshot_hash", rec.snapshot_hash},
            {"context_text", rec.context_text},
            {"thought", rec.thought},
            {"action", actions::action_to_json(rec.action)},
            {"exec", std::move(exec)}};
}

json outcome_to_json(const Trajectory& traj, const TaskGoal& goal) {
    return {{"type", "outcome"},
            {"task_id", goal.task_id},
            {"instruction", goal.instruction},
            {"domain", goal.domain},
            {"scene_id", goal.scene_id},
            {"budget", goal.budget},
            {"terminated_by", terminated_by_name(traj.outcome.terminated_by)},
            {"steps_used", traj.outcome.steps_used},
            {"score", traj.outcome.score},
            {"error", traj.outcome.error},
            {"warnings", traj.warnings}};
}

void write_trajectory(std::ostream& out, const Trajectory& traj, const TaskGoal& goal,
                      const json& extra) {
    for (const StepRecord& rec : traj.records) out << record_to_json(rec).dump() << '\n';
    json outcome = outcome_to_json(traj, goal);
    for (const auto& [key, value] : extra.items()) outcome[key] = value;
    out << outcome.dump() << '\n';
}

}  // namespace litecua::agent
