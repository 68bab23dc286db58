#pragma once

#include "magent/core/action.hpp"
#include "magent/core/agent_shell.hpp"
#include "magent/core/behavior.hpp"
#include "magent/core/message.hpp"
#include "magent/core/outcome.hpp"
#include "magent/core/trace.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace magent {

struct SendEffect
{
    Message message;
};

struct SpawnEffect
{
    AgentId id;
    LocationId at;
    std::vector<BehaviorPtr> behaviors;
};

struct AttachEffect
{
    AgentId target;
    BehaviorPtr behavior;
};

struct MigrateEffect
{
    LocationId dest;
};

struct TraceEffect
{
    TraceKind kind;
    nlohmann::json detail;
};

struct TerminateEffect
{
};

using Effect = std::variant<SendEffect, SpawnEffect, AttachEffect, MigrateEffect, TraceEffect, TerminateEffect>;

/// Side effects of one behavior step, in the order they were requested. The platform
/// applies them together once the step returns.
using StepEffects = std::vector<Effect>;

/// What the platform lends to a stepping behavior besides the agent's own shell.
class ContextServices
{
public:
    virtual ~ContextServices() = default;

    /// Agent ids are issued by the platform even for spawns that are still buffered.
    virtual AgentId reserve_agent_id() = 0;
    virtual std::string next_conversation_id() = 0;
    virtual std::optional<std::string> location_name(LocationId id) const = 0;
    virtual std::optional<LocationId> find_location(std::string_view name) const = 0;
    virtual const ActionRegistry& actions() const = 0;
    virtual const BehaviorCodec& codec() const = 0;
};

/// The behavior's view of the world during one step.
class AgentContext
{
public:
    AgentContext(AgentShell& self, VirtualTime now, ContextServices& services, StepEffects& effects)
        : self_(self), now_(now), services_(services), effects_(effects)
    {
    }

    VirtualTime now() const noexcept { return now_; }
    AgentId self() const noexcept { return self_.id; }
    LocationId location() const noexcept { return self_.current; }
    LocationId home() const noexcept { return self_.home; }
    const std::optional<MigrationRecord>& last_migration() const noexcept { return self_.last_migration; }
    std::string location_name(LocationId id) const;
    std::optional<LocationId> find_location(std::string_view name) const { return services_.find_location(name); }

    StateStore& state() noexcept { return self_.state; }
    const std::deque<Message>& inbox() const noexcept { return self_.inbox; }

    const Message* peek(const OnMessage& filter) const;
    /// Removes and returns the oldest matching message.
    std::optional<Message> take(const OnMessage& filter);

    bool satisfied(const WakeCondition& wake) const;
    bool satisfied_any(const std::vector<WakeCondition>& wake) const;
    /// Whether a behavior whose previous outcome was `last` may be stepped now.
    bool runnable(const StepOutcome& last) const;

    const Message& send(AgentId to, std::string type_tag, std::string conversation_id, Bytes payload = {});
    void migrate(LocationId dest);
    AgentId spawn(LocationId at, std::vector<BehaviorPtr> behaviors);
    void attach(AgentId target, BehaviorPtr behavior);
    void emit(TraceKind kind, nlohmann::json detail);
    void terminate_self();

    std::string new_conversation_id() { return services_.next_conversation_id(); }

    /// Runs a registered action; exceptions propagate.
    std::optional<Bytes> invoke(const ActionDescriptor& a, const Message* trigger = nullptr);
    /// Runs a registered action; a failure is traced as Custom{error} and yields nullopt.
    std::optional<Bytes> invoke_guarded(const ActionDescriptor& a, const Message* trigger = nullptr);

    ContextServices& services() noexcept { return services_; }
    const BehaviorCodec& codec() const { return services_.codec(); }
    /// For instantiating behavior specs at runtime; location names resolve via the platform.
    LoadContext load_context() const;

private:
    AgentShell& self_;
    VirtualTime now_;
    ContextServices& services_;
    StepEffects& effects_;
};

} // namespace magent
