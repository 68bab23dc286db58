#include "magent/behaviors/role_factory.hpp"

#include "magent/core/context.hpp"
#include "magent/core/error.hpp"
#include "magent/platform/adapter.hpp"

namespace magent {

void RoleRegistry::add(std::string role, Constructor ctor)
{
    if (auto it = entries_.find(role); it != entries_.end())
    {
        const auto* existing = std::get_if<Constructor>(&it->second);
        if (existing && *existing == ctor)
            return;
        throw Error(Errc::RoleConflict, "role '" + role + "' already registered with a different constructor");
    }
    entries_.emplace(std::move(role), ctor);
}

void RoleRegistry::add_template(std::string role, nlohmann::json spec)
{
    if (auto it = entries_.find(role); it != entries_.end())
    {
        const auto* existing = std::get_if<nlohmann::json>(&it->second);
        if (existing && *existing == spec)
            return;
        throw Error(Errc::RoleConflict, "role '" + role + "' already registered with a different definition");
    }
    entries_.emplace(std::move(role), std::move(spec));
}

bool RoleRegistry::contains(std::string_view role) const
{
    return entries_.find(role) != entries_.end();
}

std::vector<std::string> RoleRegistry::roles() const
{
    std::vector<std::string> out;
    for (const auto& [k, _] : entries_)
        out.push_back(k);
    return out;
}

BehaviorPtr RoleRegistry::construct(std::string_view role, const Bytes& params, const LoadContext& ctx) const
{
    auto it = entries_.find(role);
    if (it == entries_.end())
    {
        throw Error(Errc::UnknownRole, std::string(role));
    }
    if (const auto* ctor = std::get_if<Constructor>(&it->second))
    {
        return (*ctor)(params);
    }
    return ctx.behavior(std::get<nlohmann::json>(it->second));
}

void role_factory_assign(PlatformAdapter& platform, const RoleRegistry& registry, AgentId target,
                         std::string_view role, const Bytes& params)
{
    auto behavior = registry.construct(role, params, platform.load_context());
    if (!platform.is_live(target))
    {
        throw Error(Errc::UnknownAgent, to_string(target) + " is not live");
    }
    platform.attach_behavior(target, std::move(behavior));
}

void register_role_actions(ActionRegistry& actions, const RoleRegistry& roles)
{
    actions.add("role.assign", [&roles](AgentContext& ctx, const ActionCall& call) -> std::optional<Bytes> {
        const auto j = nlohmann::json::parse(call.params);
        const auto role = j.at("role").get<std::string>();
        const auto params = j.value("params", std::string{});
        const LoadContext load = ctx.load_context();
        for (const auto& t : j.at("targets"))
        {
            ctx.attach(AgentId{t.get<std::uint64_t>()}, roles.construct(role, params, load));
        }
        return std::nullopt;
    });
}

} // namespace magent
