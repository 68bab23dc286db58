#pragma once

#include "magent/core/context.hpp"
#include "magent/platform/adapter.hpp"

#include <map>
#include <memory>
#include <optional>
#include <random>
#include <vector>

namespace magent::testing {

/// Second adapter used to show the behavior framework does not depend on SimPlatform.
///
/// Advances one tick at a time, keeps messages in a flat in-flight list and moves
/// agents by flipping a flag instead of serializing them. Timing rules match the
/// adapter contract; implementation shares nothing with SimPlatform except the stepper.
class InMemoryPlatform final : public PlatformAdapter, private ContextServices
{
public:
    explicit InMemoryPlatform(SimConfig config, std::shared_ptr<Registry> registry = nullptr);

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
    struct Trip
    {
        LocationId to;
        VirtualTime started = 0;
        VirtualTime due = 0;
    };

    struct Resident
    {
        AgentShell shell;
        std::optional<Trip> trip;
    };

    struct InFlight
    {
        Message message;
        std::uint64_t number = 0;
        VirtualTime due = 0;
    };

    AgentId reserve_agent_id() override { return AgentId{next_agent_++}; }
    std::string next_conversation_id() override { return new_conversation_id(); }
    const ActionRegistry& actions() const override;
    const BehaviorCodec& codec() const override;

    bool busy(VirtualTime t) const;
    bool has_future_work() const;
    void tick();
    bool step(AgentId id);
    void dispatch(Message msg);
    void hand_over(const Message& msg, std::uint64_t number);
    void depart(AgentId id, LocationId dest);
    void arrive(AgentId id);
    void remove(AgentId id);
    VirtualTime eligible() const { return ticked_ && *ticked_ >= now_ ? now_ + 1 : now_; }

    SimConfig config_;
    std::shared_ptr<Registry> registry_;
    std::mt19937_64 rng_;
    VirtualTime now_ = 0;
    std::optional<VirtualTime> ticked_;
    std::vector<std::string> locations_; // LocationId = index + 1
    std::map<AgentId, Resident> agents_;
    std::vector<InFlight> in_flight_;
    std::map<std::pair<AgentId, AgentId>, VirtualTime> channel_due_;
    std::uint64_t next_agent_ = 1;
    std::uint64_t messages_ = 0;
    std::uint64_t conversations_ = 0;
    TraceLog trace_;
};

} // namespace magent::testing
