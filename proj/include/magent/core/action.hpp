#pragma once

#include "magent/core/message.hpp"
#include "magent/core/types.hpp"

#include <json.hpp>

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace magent {

class AgentContext;

/// Named, registry-resolved procedure plus its parameter bytes. Behaviors store these
/// instead of closures so they survive serialization.
struct ActionDescriptor
{
    std::string name;
    Bytes params;

    bool operator==(const ActionDescriptor&) const = default;
};

inline ActionDescriptor action(std::string name, Bytes params = {}) { return {std::move(name), std::move(params)}; }

nlohmann::json to_json(const ActionDescriptor& a);
/// Accepts {"name": ..., "params": string | any JSON (dumped)} or a bare name string.
ActionDescriptor action_from_json(const nlohmann::json& j);

struct ActionCall
{
    const Bytes& params;
    const Message* trigger = nullptr;
};

using ActionFn = std::function<std::optional<Bytes>(AgentContext&, const ActionCall&)>;

class ActionRegistry
{
public:
    /// Replaces any earlier registration under the same name.
    void add(std::string name, ActionFn fn);
    bool contains(std::string_view name) const;
    std::vector<std::string> names() const;

    /// Throws Errc::UnknownAction; exceptions from the action itself propagate.
    std::optional<Bytes> invoke(const ActionDescriptor& a, AgentContext& ctx, const Message* trigger = nullptr) const;

private:
    std::map<std::string, ActionFn, std::less<>> actions_;
};

/// Predicate convention for trigger actions.
bool truthy(const std::optional<Bytes>& result) noexcept;

} // namespace magent
