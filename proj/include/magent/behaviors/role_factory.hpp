#pragma once

#include "magent/core/behavior.hpp"

#include <json.hpp>

#include <map>
#include <string>
#include <variant>
#include <vector>

namespace magent {

class PlatformAdapter;
class ActionRegistry;

/// role name -> behavior constructor. Agents receiving a role never name its concrete type.
class RoleRegistry
{
public:
    using Constructor = BehaviorPtr (*)(const Bytes& params);

    /// Re-registering the same constructor is a no-op; a different one throws Errc::RoleConflict.
    void add(std::string role, Constructor ctor);
    /// Role defined by a behavior spec; `params` are ignored on construction.
    void add_template(std::string role, nlohmann::json spec);

    bool contains(std::string_view role) const;
    std::vector<std::string> roles() const;

    /// Throws Errc::UnknownRole.
    BehaviorPtr construct(std::string_view role, const Bytes& params, const LoadContext& ctx) const;

private:
    using Entry = std::variant<Constructor, nlohmann::json>;
    std::map<std::string, Entry, std::less<>> entries_;
};

/// Appends a freshly constructed `role` behavior to `target`. It runs from the next tick.
/// Throws Errc::UnknownRole, Errc::UnknownAgent.
void role_factory_assign(PlatformAdapter& platform, const RoleRegistry& registry, AgentId target,
                         std::string_view role, const Bytes& params = {});

/// `role.assign` action, params {"role": name, "targets": [ids], "params": string}.
/// Lets one agent hand roles to others from inside a behavior.
void register_role_actions(ActionRegistry& actions, const RoleRegistry& roles);

} // namespace magent
