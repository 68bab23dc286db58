#pragma once

#include "magent/core/action.hpp"
#include "magent/core/behavior.hpp"
#include "magent/core/context.hpp"

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace magent {

/// Bookkeeping a composite keeps per child.
struct ChildSlot
{
    BehaviorPtr behavior;
    StepOutcome last = StepOutcome::running();
    std::uint64_t steps = 0;

    ChildSlot() = default;
    explicit ChildSlot(BehaviorPtr b) : behavior(std::move(b)) {}
    ChildSlot(const ChildSlot& other);
    ChildSlot& operator=(const ChildSlot& other);
    ChildSlot(ChildSlot&&) noexcept = default;
    ChildSlot& operator=(ChildSlot&&) noexcept = default;

    bool finished() const noexcept { return behavior->done(); }
    StepOutcome step(AgentContext& ctx);
};

nlohmann::json save_children(const std::vector<ChildSlot>& children);
std::vector<ChildSlot> load_children(const nlohmann::json& j, const LoadContext& ctx);

/// Runs children one at a time, in order. Order of the children that have not started yet
/// may be changed with `reorder`.
class Sequential final : public Behavior
{
public:
    explicit Sequential(std::vector<BehaviorPtr> children);

    std::string_view kind() const override { return "Sequential"; }
    BehaviorPtr clone() const override { return std::make_unique<Sequential>(*this); }

    /// `order` lists the indices (into `children()`) of every pending child in their new
    /// order. Throws Errc::ReorderStartedChild if it names a started or finished child or is
    /// not a permutation of the pending ones.
    void reorder(const std::vector<std::size_t>& order);

    const std::vector<ChildSlot>& children() const noexcept { return children_; }
    std::size_t current() const noexcept { return current_; }

    static BehaviorPtr load(const nlohmann::json& j, const LoadContext& ctx);

protected:
    StepOutcome do_step(AgentContext& ctx) override;
    void save_fields(nlohmann::json& out) const override;

private:
    std::vector<ChildSlot> children_;
    std::size_t current_ = 0;
};

enum class Completion
{
    All,
    Any,
};

/// Interleaves its children: each composite step gives every runnable, unfinished child
/// exactly one step, in child order.
class Parallel final : public Behavior
{
public:
    explicit Parallel(std::vector<BehaviorPtr> children, Completion completion = Completion::All);

    std::string_view kind() const override { return "Parallel"; }
    BehaviorPtr clone() const override { return std::make_unique<Parallel>(*this); }

    const std::vector<ChildSlot>& children() const noexcept { return children_; }
    Completion completion() const noexcept { return completion_; }

    static BehaviorPtr load(const nlohmann::json& j, const LoadContext& ctx);

protected:
    StepOutcome do_step(AgentContext& ctx) override;
    void save_fields(nlohmann::json& out) const override;

private:
    std::vector<ChildSlot> children_;
    Completion completion_;
};

inline constexpr std::string_view kFsmEventTag = "FSM_EVENT";

/// States carry an entry activity; events come from FSM_EVENT messages (payload = label)
/// or from the label an activity returns.
struct FsmDefinition
{
    std::map<std::string, ActionDescriptor> states;
    std::map<std::pair<std::string, std::string>, std::string> transitions;
    std::string start;
    std::set<std::string> terminals;

    /// Throws Errc::InvalidFsm.
    void validate() const;

    bool operator==(const FsmDefinition&) const = default;
};

nlohmann::json to_json(const FsmDefinition& def);
/// Transitions are a list of {"from", "event", "to"}; a repeated (from, event) pair is invalid.
/// Throws Errc::InvalidFsm.
FsmDefinition fsm_definition_from_json(const nlohmann::json& j);

/// Every entered state is traced as Custom{"fsm": "enter", "state": name}.
class Fsm final : public Behavior
{
public:
    /// Throws Errc::InvalidFsm.
    explicit Fsm(FsmDefinition def);

    std::string_view kind() const override { return "Fsm"; }
    BehaviorPtr clone() const override { return std::make_unique<Fsm>(*this); }

    const FsmDefinition& definition() const noexcept { return def_; }
    const std::string& state() const noexcept { return state_; }
    const std::vector<std::string>& path() const noexcept { return path_; }

    static BehaviorPtr load(const nlohmann::json& j, const LoadContext& ctx);

protected:
    StepOutcome do_step(AgentContext& ctx) override;
    void save_fields(nlohmann::json& out) const override;

private:
    bool enter(AgentContext& ctx, const std::string& state);
    StepOutcome idle() const;

    FsmDefinition def_;
    std::string state_;
    std::vector<std::string> path_;
    std::optional<std::string> pending_;
};

BehaviorPtr sequential(std::vector<BehaviorPtr> children);
BehaviorPtr parallel(std::vector<BehaviorPtr> children, Completion completion = Completion::All);
BehaviorPtr fsm(FsmDefinition def);

void register_composite_behaviors(BehaviorCodec& codec);

} // namespace magent
