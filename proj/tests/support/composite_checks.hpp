#pragma once

#include "magent/core/behavior.hpp"
#include "magent/behaviors/composite.hpp"
#include "magent/core/context.hpp"
#include "magent/registry.hpp"
#include "scenarios.hpp"

#include <cstdint>
#include <memory>
#include <string>

namespace magent::testing {

/// Stays Running for `left` steps, noting `label` each time, then finishes.
class Spinner final : public Behavior
{
public:
    Spinner(std::string label, std::uint64_t left) : label_(std::move(label)), left_(left) {}

    std::string_view kind() const override { return "Spinner"; }
    BehaviorPtr clone() const override { return std::make_unique<Spinner>(*this); }

    static BehaviorPtr load(const nlohmann::json& j, const LoadContext&);

protected:
    StepOutcome do_step(AgentContext& ctx) override;
    void save_fields(nlohmann::json& out) const override;

private:
    std::string label_;
    std::uint64_t left_;
};

/// A composite written only against the public stepping contract: one child per step,
/// taking turns, skipping finished or waiting children.
class TakeTurns final : public Behavior
{
public:
    explicit TakeTurns(std::vector<BehaviorPtr> children);

    std::string_view kind() const override { return "TakeTurns"; }
    BehaviorPtr clone() const override { return std::make_unique<TakeTurns>(*this); }

    static BehaviorPtr load(const nlohmann::json& j, const LoadContext& ctx);

protected:
    StepOutcome do_step(AgentContext& ctx) override;
    void save_fields(nlohmann::json& out) const override;

private:
    std::vector<ChildSlot> children_;
    std::size_t turn_ = 0;
};

/// Default registry plus Spinner and TakeTurns.
std::shared_ptr<Registry> composite_registry();

/// Random Sequential lists: every child's effects come after those of earlier children
/// and every child contributes.
CheckResult sequential_ordering(std::uint64_t seed, int cases);
/// Random Parallel sets: step counts of running children never differ by more than one.
CheckResult parallel_fairness(std::uint64_t seed, int cases);
/// Random FSMs fed random events: entered states always form a walk from the start.
CheckResult fsm_paths(std::uint64_t seed, int cases);
/// Random 3-deep trees mixing the built-in composites with TakeTurns, some migrating
/// mid-run: one effect per leaf, always quiescent.
CheckResult nested_trees(std::uint64_t seed, int cases);
/// TakeTurns over spinners and a listener, migrated mid-run: x y x y x z.
CheckResult custom_composite(AdapterKind kind);

} // namespace magent::testing
