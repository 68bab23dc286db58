#include "magent/core/action.hpp"

#include "magent/core/error.hpp"

namespace magent {

nlohmann::json to_json(const ActionDescriptor& a)
{
    return {{"name", a.name}, {"params", a.params}};
}

ActionDescriptor action_from_json(const nlohmann::json& j)
{
    if (j.is_string())
    {
        return ActionDescriptor{j.get<std::string>(), {}};
    }
    ActionDescriptor a;
    a.name = j.at("name").get<std::string>();
    if (auto it = j.find("params"); it != j.end() && !it->is_null())
    {
        a.params = it->is_string() ? it->get<std::string>() : it->dump();
    }
    return a;
}

void ActionRegistry::add(std::string name, ActionFn fn)
{
    actions_[std::move(name)] = std::move(fn);
}

bool ActionRegistry::contains(std::string_view name) const
{
    return actions_.find(name) != actions_.end();
}

std::vector<std::string> ActionRegistry::names() const
{
    std::vector<std::string> out;
    for (const auto& [k, _] : actions_)
        out.push_back(k);
    return out;
}

std::optional<Bytes> ActionRegistry::invoke(const ActionDescriptor& a, AgentContext& ctx, const Message* trigger) const
{
    auto it = actions_.find(a.name);
    if (it == actions_.end())
    {
        throw Error(Errc::UnknownAction, a.name);
    }
    return it->second(ctx, ActionCall{a.params, trigger});
}

bool truthy(const std::optional<Bytes>& result) noexcept
{
    return result && (*result == "true" || *result == "1");
}

} // namespace magent
