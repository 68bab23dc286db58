#pragma once

#include "magent/core/agent_shell.hpp"
#include "magent/core/context.hpp"

#include <functional>
#include <optional>

namespace magent {

/// Whether the slot may run at `now` given the shell's inbox and location.
bool slot_runnable(const BehaviorSlot& slot, const AgentShell& shell, VirtualTime now);

/// Earliest tick after `now` at which some behavior becomes runnable without any new
/// input (message, arrival). nullopt when the agent only waits for external events.
std::optional<VirtualTime> next_wake(const AgentShell& shell, VirtualTime now);

/// Receives the effects of each behavior step. Returning false stops stepping the agent
/// for this tick (it is migrating or terminating).
using ApplyEffects = std::function<bool(std::size_t index, const StepOutcome& outcome, StepEffects& effects)>;

/// Steps every runnable behavior once, in list order, then drops finished slots.
/// Shared by all platform adapters so the behavior contract is identical on each.
void step_agent(AgentShell& shell, VirtualTime now, ContextServices& services, const ApplyEffects& apply);

} // namespace magent
