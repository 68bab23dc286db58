#pragma once

#include "magent/core/behavior.hpp"
#include "magent/core/message.hpp"
#include "magent/core/outcome.hpp"
#include "magent/core/types.hpp"

#include <deque>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace magent {

using StateStore = std::map<std::string, std::string>;

struct MigrationRecord
{
    LocationId from;
    LocationId to;
    VirtualTime started = 0;
    VirtualTime ended = 0;

    bool operator==(const MigrationRecord&) const = default;
};

struct BehaviorSlot
{
    BehaviorPtr behavior;
    StepOutcome last = StepOutcome::running();
    // First tick at which the slot may be stepped.
    VirtualTime eligible_from = 0;
};

/// Everything that travels with an agent: identity, location, behaviors, user state and
/// pending messages.
struct AgentShell
{
    AgentId id;
    LocationId home;
    LocationId current;
    std::vector<BehaviorSlot> behaviors;
    StateStore state;
    std::deque<Message> inbox;
    std::optional<MigrationRecord> last_migration;

    AgentShell clone() const;
};

/// Field-by-field comparison; behaviors compare by their saved state.
bool operator==(const AgentShell& a, const AgentShell& b);

nlohmann::json to_json(const AgentShell& shell);
AgentShell shell_from_json(const nlohmann::json& j, const LoadContext& ctx);

Bytes serialize(const AgentShell& shell);
AgentShell deserialize_shell(const Bytes& bytes, const LoadContext& ctx);

} // namespace magent
