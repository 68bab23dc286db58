#pragma once

#include "magent/core/context.hpp"
#include "magent/platform/adapter.hpp"

#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <tuple>

namespace magent {

/// Deterministic discrete-event platform with a virtual clock.
///
/// Each processed tick runs three phases: due deliveries, due migration ends, then one
/// step of every live, resident agent in AgentId order. Migrating agents travel as
/// serialized bytes and are revived from them on arrival.
class SimPlatform final : public PlatformAdapter, private ContextServices
{
public:
    explicit SimPlatform(SimConfig config, std::shared_ptr<Registry> registry = nullptr);

    LocationId create_location(std::string name) override;
    AgentId spawn_agent(LocationId at, std::vector<BehaviorPtr> behaviors) override;
    void send(Message msg) override;
    void migrate(AgentId agent, LocationId dest) override;
    VirtualTime now() const override { return now_; }
    RunReport run(RunUntil until) override;

    void attach_behavior(AgentId target, BehaviorPtr behavior) override;
    bool is_live(AgentId agent) const override { return agents_.contains(agent); }
    bool is_migrating(AgentId agent) const override;
    std::vector<AgentId> live_agents() const override;
    std::optional<Bytes> snapshot(AgentId agent) const override;
    std::optional<LocationId> location_of(AgentId agent) const override;

    std::optional<LocationId> find_location(std::string_view name) const override;
    std::optional<std::string> location_name(LocationId id) const override;

    const TraceLog& trace() const override { return trace_; }
    Registry& registry() override { return *registry_; }
    std::string new_conversation_id() override;
    const SimConfig& config() const override { return config_; }

private:
    struct Transit
    {
        Bytes shell;
        LocationId from;
        LocationId to;
        VirtualTime started = 0;
        std::deque<Message> arrived; // delivered while travelling
    };

    struct Agent
    {
        std::optional<AgentShell> shell; // empty while in transit
        std::optional<Transit> transit;
    };

    enum class Phase
    {
        Deliver,
        MigrateEnd,
    };

    struct Pending
    {
        Message message; // Deliver
        std::uint64_t number = 0;
        AgentId agent;   // MigrateEnd
    };

    using Key = std::tuple<VirtualTime, Phase, std::uint64_t>;

    // ContextServices
    AgentId reserve_agent_id() override;
    std::string next_conversation_id() override { return new_conversation_id(); }
    const ActionRegistry& actions() const override;
    const BehaviorCodec& codec() const override;

    bool tick_started() const noexcept { return started_ && *started_ >= now_; }
    VirtualTime eligible_from() const noexcept { return tick_started() ? now_ + 1 : now_; }
    std::optional<VirtualTime> next_tick() const;
    void process_tick();
    /// True when the agent migrated and already arrived within this step.
    bool step(AgentId id);

    void require_location(LocationId id) const;
    void place_agent(AgentId id, LocationId at, std::vector<BehaviorPtr> behaviors, std::optional<AgentId> parent);
    void post(Message msg);
    void deliver(const Message& msg, std::uint64_t number);
    void begin_migration(AgentId id, LocationId dest);
    void end_migration(AgentId id);
    void terminate(AgentId id);

    SimConfig config_;
    std::shared_ptr<Registry> registry_;
    std::mt19937_64 rng_;
    VirtualTime now_ = 0;
    std::optional<VirtualTime> started_;

    std::map<LocationId, std::string> locations_;
    std::map<AgentId, Agent> agents_;
    std::map<Key, Pending> queue_;
    std::map<std::pair<AgentId, AgentId>, VirtualTime> channel_due_;
    std::uint64_t next_agent_ = 1;
    std::uint64_t next_location_ = 1;
    std::uint64_t next_seq_ = 0;
    std::uint64_t next_message_ = 0;
    std::uint64_t next_conversation_ = 0;
    TraceLog trace_;
};

} // namespace magent
