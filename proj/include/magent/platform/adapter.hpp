#pragma once

#include "magent/core/agent_shell.hpp"
#include "magent/core/behavior.hpp"
#include "magent/core/message.hpp"
#include "magent/core/trace.hpp"
#include "magent/core/types.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace magent {

struct Registry;

struct FixedLatency
{
    Ticks ticks = 0;
    bool operator==(const FixedLatency&) const = default;
};

/// Inclusive range, drawn from the platform's seeded generator.
struct UniformLatency
{
    Ticks lo = 0;
    Ticks hi = 0;
    bool operator==(const UniformLatency&) const = default;
};

struct PerLinkLatency
{
    std::map<std::pair<LocationId, LocationId>, Ticks> links;
    Ticks fallback = 0;
    bool operator==(const PerLinkLatency&) const = default;
};

using LatencyModel = std::variant<FixedLatency, UniformLatency, PerLinkLatency>;

/// Throws Errc::InvalidLatency when lo > hi.
void validate(const LatencyModel& model);

/// The one place latencies are drawn; every adapter routes its draws through here.
Ticks draw_latency(const LatencyModel& model, std::mt19937_64& rng, LocationId from, LocationId to);

/// An agent that completes a zero-latency migration inside its own step is stepped again
/// on the same tick at its destination, at most this many times per tick.
inline constexpr int kMaxSameTickHops = 64;

struct SimConfig
{
    std::uint64_t seed = 0;
    LatencyModel message_latency = FixedLatency{1};
    LatencyModel migration_latency = FixedLatency{1};
    VirtualTime max_ticks = 100'000;
};

/// Stop condition for `run`: a tick, or quiescence when `tick` is empty.
struct RunUntil
{
    std::optional<VirtualTime> tick;

    static RunUntil quiescent() { return {}; }
    static RunUntil at(VirtualTime t) { return RunUntil{t}; }
};

enum class StopReason
{
    Quiescent,
    ReachedUntil,
    TickBudgetExceeded,
};

struct RunReport
{
    StopReason reason = StopReason::Quiescent;
    VirtualTime end_tick = 0;
};

/// The contract between the behavior framework and an agent substrate.
///
/// Behaviors never see an adapter; they only see AgentContext. Scenario code
/// (assessment, CLI) talks to this interface and never to a concrete platform.
class PlatformAdapter
{
public:
    virtual ~PlatformAdapter() = default;

    /// Throws Errc::DuplicateLocationName.
    virtual LocationId create_location(std::string name) = 0;
    /// Throws Errc::UnknownLocation. An empty behavior list terminates the agent immediately.
    virtual AgentId spawn_agent(LocationId at, std::vector<BehaviorPtr> behaviors) = 0;
    /// Throws Errc::UnknownAgent when the sender is not live. Failed deliveries are traced only.
    virtual void send(Message msg) = 0;
    /// Throws Errc::UnknownAgent, Errc::UnknownLocation, Errc::AlreadyMigrating.
    virtual void migrate(AgentId agent, LocationId dest) = 0;
    virtual VirtualTime now() const = 0;
    virtual RunReport run(RunUntil until) = 0;

    /// Appends a behavior; it is stepped from the next step phase on. Throws Errc::UnknownAgent.
    virtual void attach_behavior(AgentId target, BehaviorPtr behavior) = 0;
    virtual bool is_live(AgentId agent) const = 0;
    virtual bool is_migrating(AgentId agent) const = 0;
    virtual std::vector<AgentId> live_agents() const = 0;
    /// Serialized shell of a live agent (also while in transit).
    virtual std::optional<Bytes> snapshot(AgentId agent) const = 0;
    virtual std::optional<LocationId> location_of(AgentId agent) const = 0;

    virtual std::optional<LocationId> find_location(std::string_view name) const = 0;
    virtual std::optional<std::string> location_name(LocationId id) const = 0;

    virtual const TraceLog& trace() const = 0;
    virtual Registry& registry() = 0;
    virtual std::string new_conversation_id() = 0;
    virtual const SimConfig& config() const = 0;

    /// Decodes a snapshot with this platform's codec.
    AgentShell inspect(AgentId agent);
    LoadContext load_context();
};

/// Deterministic seed-derived conversation id.
std::string make_conversation_id(std::uint64_t seed, std::uint64_t counter);

} // namespace magent
