#include "magent/core/context.hpp"

#include "magent/core/error.hpp"

namespace magent {

std::string AgentContext::location_name(LocationId id) const
{
    return services_.location_name(id).value_or(to_string(id));
}

const Message* AgentContext::peek(const OnMessage& filter) const
{
    for (const auto& m : self_.inbox)
    {
        if (filter.matches(m))
            return &m;
    }
    return nullptr;
}

std::optional<Message> AgentContext::take(const OnMessage& filter)
{
    for (auto it = self_.inbox.begin(); it != self_.inbox.end(); ++it)
    {
        if (filter.matches(*it))
        {
            Message m = std::move(*it);
            self_.inbox.erase(it);
            return m;
        }
    }
    return std::nullopt;
}

bool AgentContext::satisfied(const WakeCondition& wake) const
{
    return std::visit(
        [&](const auto& w) -> bool {
            using T = std::decay_t<decltype(w)>;
            if constexpr (std::is_same_v<T, AtTime>)
                return now_ >= w.tick;
            else if constexpr (std::is_same_v<T, OnMessage>)
                return peek(w) != nullptr;
            else
                return self_.current == w.location;
        },
        wake);
}

bool AgentContext::satisfied_any(const std::vector<WakeCondition>& wake) const
{
    for (const auto& w : wake)
    {
        if (satisfied(w))
            return true;
    }
    return false;
}

bool AgentContext::runnable(const StepOutcome& last) const
{
    switch (last.kind())
    {
    case StepOutcome::Kind::Running: return true;
    case StepOutcome::Kind::Done: return false;
    case StepOutcome::Kind::Blocked: return satisfied_any(last.wake());
    }
    return false;
}

const Message& AgentContext::send(AgentId to, std::string type_tag, std::string conversation_id, Bytes payload)
{
    auto msg = make_message(self_.id, to, std::move(type_tag), std::move(conversation_id), std::move(payload), now_);
    effects_.emplace_back(SendEffect{std::move(msg)});
    return std::get<SendEffect>(effects_.back()).message;
}

void AgentContext::migrate(LocationId dest)
{
    effects_.emplace_back(MigrateEffect{dest});
}

AgentId AgentContext::spawn(LocationId at, std::vector<BehaviorPtr> behaviors)
{
    const AgentId id = services_.reserve_agent_id();
    effects_.emplace_back(SpawnEffect{id, at, std::move(behaviors)});
    return id;
}

void AgentContext::attach(AgentId target, BehaviorPtr behavior)
{
    effects_.emplace_back(AttachEffect{target, std::move(behavior)});
}

void AgentContext::emit(TraceKind kind, nlohmann::json detail)
{
    effects_.emplace_back(TraceEffect{kind, std::move(detail)});
}

void AgentContext::terminate_self()
{
    effects_.emplace_back(TerminateEffect{});
}

std::optional<Bytes> AgentContext::invoke(const ActionDescriptor& a, const Message* trigger)
{
    return services_.actions().invoke(a, *this, trigger);
}

std::optional<Bytes> AgentContext::invoke_guarded(const ActionDescriptor& a, const Message* trigger)
{
    try
    {
        return invoke(a, trigger);
    }
    catch (const std::exception& e)
    {
        emit(TraceKind::Custom, {{"error", e.what()}, {"action", a.name}});
        return std::nullopt;
    }
}

LoadContext AgentContext::load_context() const
{
    LoadContext load{&services_.codec(), {}, {}};
    load.resolve_location = [&services = services_](const nlohmann::json& j) {
        std::optional<LocationId> id;
        if (j.is_string())
            id = services.find_location(j.get<std::string>());
        if (!id)
            throw Error(Errc::UnknownLocation, j.dump());
        return *id;
    };
    return load;
}

} // namespace magent
