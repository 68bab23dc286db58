#include "magent/core/agent_shell.hpp"

#include "magent/core/error.hpp"

namespace magent {

AgentShell AgentShell::clone() const
{
    AgentShell out;
    out.id = id;
    out.home = home;
    out.current = current;
    out.state = state;
    out.inbox = inbox;
    out.last_migration = last_migration;
    out.behaviors.reserve(behaviors.size());
    for (const auto& slot : behaviors)
    {
        out.behaviors.push_back(BehaviorSlot{slot.behavior->clone(), slot.last, slot.eligible_from});
    }
    return out;
}

bool operator==(const AgentShell& a, const AgentShell& b)
{
    if (a.id != b.id || a.home != b.home || a.current != b.current || a.state != b.state || a.inbox != b.inbox ||
        a.last_migration != b.last_migration || a.behaviors.size() != b.behaviors.size())
    {
        return false;
    }
    for (std::size_t i = 0; i < a.behaviors.size(); ++i)
    {
        const auto& x = a.behaviors[i];
        const auto& y = b.behaviors[i];
        if (x.last != y.last || x.eligible_from != y.eligible_from || !same_state(*x.behavior, *y.behavior))
        {
            return false;
        }
    }
    return true;
}

nlohmann::json to_json(const AgentShell& shell)
{
    nlohmann::json behaviors = nlohmann::json::array();
    for (const auto& slot : shell.behaviors)
    {
        behaviors.push_back({{"behavior", slot.behavior->save()},
                             {"last", to_json(slot.last)},
                             {"eligible_from", slot.eligible_from}});
    }
    nlohmann::json inbox = nlohmann::json::array();
    for (const auto& m : shell.inbox)
    {
        inbox.push_back(to_json(m));
    }
    nlohmann::json state = nlohmann::json::object();
    for (const auto& [k, v] : shell.state)
    {
        state[k] = hex_encode(v);
    }
    nlohmann::json migration = nullptr;
    if (shell.last_migration)
    {
        const auto& m = *shell.last_migration;
        migration = {{"from", m.from.value}, {"to", m.to.value}, {"started", m.started}, {"ended", m.ended}};
    }
    return {{"id", shell.id.value},          {"home", shell.home.value}, {"current", shell.current.value},
            {"behaviors", std::move(behaviors)}, {"state", std::move(state)}, {"inbox", std::move(inbox)},
            {"last_migration", std::move(migration)}};
}

AgentShell shell_from_json(const nlohmann::json& j, const LoadContext& ctx)
{
    try
    {
        AgentShell shell;
        shell.id = AgentId{j.at("id").get<std::uint64_t>()};
        shell.home = LocationId{j.at("home").get<std::uint64_t>()};
        shell.current = LocationId{j.at("current").get<std::uint64_t>()};
        for (const auto& b : j.at("behaviors"))
        {
            shell.behaviors.push_back(BehaviorSlot{ctx.behavior(b.at("behavior")), outcome_from_json(b.at("last")),
                                                   b.at("eligible_from").get<VirtualTime>()});
        }
        for (const auto& [k, v] : j.at("state").items())
        {
            shell.state[k] = hex_decode(v.get<std::string>());
        }
        for (const auto& m : j.at("inbox"))
        {
            shell.inbox.push_back(message_from_json(m));
        }
        if (const auto& m = j.at("last_migration"); !m.is_null())
        {
            shell.last_migration = MigrationRecord{LocationId{m.at("from").get<std::uint64_t>()},
                                                   LocationId{m.at("to").get<std::uint64_t>()},
                                                   m.at("started").get<VirtualTime>(), m.at("ended").get<VirtualTime>()};
        }
        return shell;
    }
    catch (const nlohmann::json::exception& e)
    {
        throw Error(Errc::Serialization, std::string("agent shell: ") + e.what());
    }
}

Bytes serialize(const AgentShell& shell)
{
    return to_json(shell).dump();
}

AgentShell deserialize_shell(const Bytes& bytes, const LoadContext& ctx)
{
    nlohmann::json j;
    try
    {
        j = nlohmann::json::parse(bytes);
    }
    catch (const nlohmann::json::exception& e)
    {
        throw Error(Errc::Serialization, std::string("agent shell bytes: ") + e.what());
    }
    return shell_from_json(j, ctx);
}

} // namespace magent
