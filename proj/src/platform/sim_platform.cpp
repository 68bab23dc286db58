#include "magent/platform/sim_platform.hpp"

#include "magent/core/error.hpp"
#include "magent/core/stepper.hpp"
#include "magent/registry.hpp"

#include <algorithm>

namespace magent {

namespace {

template <class... Ts>
struct Overloaded : Ts...
{
    using Ts::operator()...;
};

} // namespace

SimPlatform::SimPlatform(SimConfig config, std::shared_ptr<Registry> registry)
    : config_(std::move(config)), registry_(registry ? std::move(registry) : make_default_registry()),
      rng_(config_.seed)
{
    validate(config_.message_latency);
    validate(config_.migration_latency);
}

// ---------------------------------------------------------------------------- public API

LocationId SimPlatform::create_location(std::string name)
{
    if (find_location(name))
        throw Error(Errc::DuplicateLocationName, name);
    const LocationId id{next_location_++};
    locations_.emplace(id, std::move(name));
    return id;
}

AgentId SimPlatform::spawn_agent(LocationId at, std::vector<BehaviorPtr> behaviors)
{
    require_location(at);
    const AgentId id = reserve_agent_id();
    place_agent(id, at, std::move(behaviors), std::nullopt);
    return id;
}

void SimPlatform::send(Message msg)
{
    if (!is_live(msg.sender))
        throw Error(Errc::UnknownAgent, "sender " + to_string(msg.sender) + " is not live");
    post(std::move(msg));
}

void SimPlatform::migrate(AgentId agent, LocationId dest)
{
    if (!is_live(agent))
        throw Error(Errc::UnknownAgent, to_string(agent) + " is not live");
    require_location(dest);
    if (is_migrating(agent))
        throw Error(Errc::AlreadyMigrating, to_string(agent));
    begin_migration(agent, dest);
}

RunReport SimPlatform::run(RunUntil until)
{
    if (until.tick && *until.tick < now_)
        return {StopReason::ReachedUntil, now_};
    for (;;)
    {
        const auto t = next_tick();
        if (!t)
        {
            if (until.tick)
                now_ = *until.tick;
            return {StopReason::Quiescent, now_};
        }
        if (until.tick && *t > *until.tick)
        {
            now_ = *until.tick;
            return {StopReason::ReachedUntil, now_};
        }
        if (*t > config_.max_ticks)
            return {StopReason::TickBudgetExceeded, now_};
        now_ = *t;
        process_tick();
    }
}

void SimPlatform::attach_behavior(AgentId target, BehaviorPtr behavior)
{
    auto it = agents_.find(target);
    if (it == agents_.end())
        throw Error(Errc::UnknownAgent, to_string(target) + " is not live");
    Agent& a = it->second;
    if (a.shell)
    {
        a.shell->behaviors.push_back(BehaviorSlot{std::move(behavior), StepOutcome::running(), eligible_from()});
        return;
    }
    AgentShell shell = deserialize_shell(a.transit->shell, load_context());
    shell.behaviors.push_back(BehaviorSlot{std::move(behavior), StepOutcome::running(), eligible_from()});
    a.transit->shell = serialize(shell);
}

bool SimPlatform::is_migrating(AgentId agent) const
{
    auto it = agents_.find(agent);
    return it != agents_.end() && it->second.transit.has_value();
}

std::vector<AgentId> SimPlatform::live_agents() const
{
    std::vector<AgentId> out;
    out.reserve(agents_.size());
    for (const auto& [id, _] : agents_)
        out.push_back(id);
    return out;
}

std::optional<Bytes> SimPlatform::snapshot(AgentId agent) const
{
    auto it = agents_.find(agent);
    if (it == agents_.end())
        return std::nullopt;
    const Agent& a = it->second;
    if (a.shell)
        return serialize(*a.shell);
    if (a.transit->arrived.empty())
        return a.transit->shell;
    auto j = nlohmann::json::parse(a.transit->shell);
    for (const auto& m : a.transit->arrived)
        j["inbox"].push_back(to_json(m));
    return j.dump();
}

std::optional<LocationId> SimPlatform::location_of(AgentId agent) const
{
    auto it = agents_.find(agent);
    if (it == agents_.end() || !it->second.shell)
        return std::nullopt;
    return it->second.shell->current;
}

std::optional<LocationId> SimPlatform::find_location(std::string_view name) const
{
    for (const auto& [id, n] : locations_)
    {
        if (n == name)
            return id;
    }
    return std::nullopt;
}

std::optional<std::string> SimPlatform::location_name(LocationId id) const
{
    auto it = locations_.find(id);
    if (it == locations_.end())
        return std::nullopt;
    return it->second;
}

std::string SimPlatform::new_conversation_id()
{
    return make_conversation_id(config_.seed, next_conversation_++);
}

AgentId SimPlatform::reserve_agent_id()
{
    return AgentId{next_agent_++};
}

const ActionRegistry& SimPlatform::actions() const
{
    return registry_->actions;
}

const BehaviorCodec& SimPlatform::codec() const
{
    return registry_->behaviors;
}

// ---------------------------------------------------------------------------- event loop

std::optional<VirtualTime> SimPlatform::next_tick() const
{
    if (!tick_started())
    {
        if (!queue_.empty() && std::get<0>(queue_.begin()->first) == now_)
            return now_;
        for (const auto& [_, a] : agents_)
        {
            if (!a.shell)
                continue;
            for (const auto& slot : a.shell->behaviors)
            {
                if (slot_runnable(slot, *a.shell, now_))
                    return now_;
            }
        }
    }
    std::optional<VirtualTime> best;
    if (!queue_.empty())
        best = std::get<0>(queue_.begin()->first);
    for (const auto& [_, a] : agents_)
    {
        if (!a.shell)
            continue;
        if (auto w = next_wake(*a.shell, now_); w && (!best || *w < *best))
            best = w;
    }
    return best;
}

void SimPlatform::process_tick()
{
    started_ = now_;
    while (!queue_.empty() && std::get<0>(queue_.begin()->first) == now_)
    {
        auto node = queue_.extract(queue_.begin());
        if (std::get<1>(node.key()) == Phase::Deliver)
            deliver(node.mapped().message, node.mapped().number);
        else
            end_migration(node.mapped().agent);
    }
    std::vector<AgentId> order;
    for (const auto& [id, a] : agents_)
    {
        if (a.shell)
            order.push_back(id);
    }
    for (AgentId id : order)
    {
        // An agent that lands within its own step (zero latency) continues at its destination.
        for (int hop = 0; hop < kMaxSameTickHops && step(id); ++hop)
        {
        }
    }
}

bool SimPlatform::step(AgentId id)
{
    auto it = agents_.find(id);
    if (it == agents_.end() || !it->second.shell)
        return false;
    AgentShell& shell = *it->second.shell;

    bool terminate_requested = false;
    std::optional<LocationId> migrate_to;

    step_agent(shell, now_, *this, [&](std::size_t index, const StepOutcome& outcome, StepEffects& effects) {
        const std::string kind(shell.behaviors[index].behavior->kind());
        for (auto& effect : effects)
        {
            std::visit(Overloaded{
                           [&](SendEffect& e) { post(std::move(e.message)); },
                           [&](SpawnEffect& e) {
                               if (!locations_.contains(e.at))
                               {
                                   trace_.append(now_, TraceKind::Custom, id,
                                                 {{"error", "UnknownLocation"}, {"location", e.at.value}});
                                   return;
                               }
                               place_agent(e.id, e.at, std::move(e.behaviors), id);
                           },
                           [&](AttachEffect& e) {
                               if (!is_live(e.target))
                               {
                                   trace_.append(now_, TraceKind::Custom, id,
                                                 {{"error", "UnknownAgent"}, {"target", e.target.value}});
                                   return;
                               }
                               attach_behavior(e.target, std::move(e.behavior));
                           },
                           [&](MigrateEffect& e) {
                               if (!locations_.contains(e.dest))
                               {
                                   trace_.append(now_, TraceKind::Custom, id,
                                                 {{"error", "UnknownLocation"}, {"location", e.dest.value}});
                                   return;
                               }
                               if (!migrate_to)
                                   migrate_to = e.dest;
                           },
                           [&](TraceEffect& e) { trace_.append(now_, e.kind, id, std::move(e.detail)); },
                           [&](TerminateEffect&) { terminate_requested = true; },
                       },
                       effect);
        }
        if (outcome.is_done())
            trace_.append(now_, TraceKind::BehaviorDone, id, {{"behavior", kind}, {"index", index}});
        return !terminate_requested && !migrate_to;
    });

    if (terminate_requested || shell.behaviors.empty())
    {
        terminate(id);
        return false;
    }
    if (!migrate_to)
        return false;
    begin_migration(id, *migrate_to);
    return !is_migrating(id);
}

// ---------------------------------------------------------------------------- helpers

void SimPlatform::require_location(LocationId id) const
{
    if (!locations_.contains(id))
        throw Error(Errc::UnknownLocation, to_string(id));
}

void SimPlatform::place_agent(AgentId id, LocationId at, std::vector<BehaviorPtr> behaviors,
                              std::optional<AgentId> parent)
{
    AgentShell shell;
    shell.id = id;
    shell.home = at;
    shell.current = at;
    for (auto& b : behaviors)
        shell.behaviors.push_back(BehaviorSlot{std::move(b), StepOutcome::running(), eligible_from()});
    const bool empty = shell.behaviors.empty();
    agents_[id].shell = std::move(shell);

    nlohmann::json detail = {{"location", locations_.at(at)}};
    if (parent)
        detail["parent"] = parent->value;
    trace_.append(now_, TraceKind::Spawn, id, std::move(detail));
    if (empty)
        terminate(id);
}

void SimPlatform::post(Message msg)
{
    const std::uint64_t number = next_message_++;
    const Agent& sender = agents_.at(msg.sender);
    const LocationId from = sender.shell ? sender.shell->current : sender.transit->from;
    LocationId to = from;
    if (auto it = agents_.find(msg.receiver); it != agents_.end())
        to = it->second.shell ? it->second.shell->current : it->second.transit->to;

    VirtualTime due = saturating_add(now_, draw_latency(config_.message_latency, rng_, from, to));
    // Channels are FIFO per sender/receiver pair: a message never overtakes an earlier one.
    auto& last = channel_due_[{msg.sender, msg.receiver}];
    due = std::max(due, last);
    last = due;
    trace_.append(now_, TraceKind::Send, msg.sender,
                  {{"msg", number},
                   {"to", msg.receiver.value},
                   {"type", msg.type_tag},
                   {"conversation", msg.conversation_id},
                   {"due", due}});
    if (due == now_ && tick_started())
        deliver(msg, number);
    else
        queue_.emplace(Key{due, Phase::Deliver, next_seq_++}, Pending{std::move(msg), number, {}});
}

void SimPlatform::deliver(const Message& msg, std::uint64_t number)
{
    nlohmann::json detail = {{"msg", number},
                             {"from", msg.sender.value},
                             {"type", msg.type_tag},
                             {"conversation", msg.conversation_id}};
    auto it = agents_.find(msg.receiver);
    if (it == agents_.end())
    {
        detail["status"] = "failed";
    }
    else
    {
        detail["status"] = "ok";
        if (it->second.shell)
        {
            it->second.shell->inbox.push_back(msg);
        }
        else
        {
            it->second.transit->arrived.push_back(msg);
            detail["in_transit"] = true;
        }
    }
    trace_.append(now_, TraceKind::Deliver, msg.receiver, std::move(detail));
}

void SimPlatform::begin_migration(AgentId id, LocationId dest)
{
    Agent& a = agents_.at(id);
    const LocationId from = a.shell->current;
    const VirtualTime due = saturating_add(now_, draw_latency(config_.migration_latency, rng_, from, dest));
    trace_.append(now_, TraceKind::MigrateStart, id,
                  {{"from", locations_.at(from)}, {"to", locations_.at(dest)}, {"due", due}});

    a.transit = Transit{serialize(*a.shell), from, dest, now_, {}};
    a.shell.reset();
    if (due == now_ && tick_started())
        end_migration(id);
    else
        queue_.emplace(Key{due, Phase::MigrateEnd, next_seq_++}, Pending{{}, 0, id});
}

void SimPlatform::end_migration(AgentId id)
{
    Agent& a = agents_.at(id);
    Transit t = std::move(*a.transit);
    a.transit.reset();

    AgentShell shell = deserialize_shell(t.shell, load_context());
    shell.current = t.to;
    shell.last_migration = MigrationRecord{t.from, t.to, t.started, now_};
    for (auto& m : t.arrived)
        shell.inbox.push_back(std::move(m));
    a.shell = std::move(shell);

    trace_.append(now_, TraceKind::MigrateEnd, id,
                  {{"from", locations_.at(t.from)}, {"to", locations_.at(t.to)}, {"latency", now_ - t.started}});
}

void SimPlatform::terminate(AgentId id)
{
    agents_.erase(id);
    trace_.append(now_, TraceKind::Terminate, id);
}

} // namespace magent
