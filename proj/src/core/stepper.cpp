#include "magent/core/stepper.hpp"

#include <algorithm>

namespace magent {

namespace {

bool wake_holds(const WakeCondition& wake, const AgentShell& shell, VirtualTime now)
{
    return std::visit(
        [&](const auto& w) -> bool {
            using T = std::decay_t<decltype(w)>;
            if constexpr (std::is_same_v<T, AtTime>)
                return now >= w.tick;
            else if constexpr (std::is_same_v<T, OnMessage>)
                return std::any_of(shell.inbox.begin(), shell.inbox.end(),
                                   [&](const Message& m) { return w.matches(m); });
            else
                return shell.current == w.location;
        },
        wake);
}

} // namespace

bool slot_runnable(const BehaviorSlot& slot, const AgentShell& shell, VirtualTime now)
{
    if (now < slot.eligible_from || slot.behavior->done())
    {
        return false;
    }
    switch (slot.last.kind())
    {
    case StepOutcome::Kind::Running: return true;
    case StepOutcome::Kind::Done: return false;
    case StepOutcome::Kind::Blocked:
        return std::any_of(slot.last.wake().begin(), slot.last.wake().end(),
                           [&](const WakeCondition& w) { return wake_holds(w, shell, now); });
    }
    return false;
}

std::optional<VirtualTime> next_wake(const AgentShell& shell, VirtualTime now)
{
    std::optional<VirtualTime> best;
    auto consider = [&](VirtualTime t) {
        if (!best || t < *best)
            best = t;
    };
    const VirtualTime next = now + 1;
    for (const auto& slot : shell.behaviors)
    {
        if (slot.behavior->done() || slot.last.is_done())
            continue;
        const VirtualTime earliest = std::max(next, slot.eligible_from);
        if (slot.last.is_running())
        {
            consider(earliest);
            continue;
        }
        for (const auto& w : slot.last.wake())
        {
            if (const auto* at = std::get_if<AtTime>(&w))
                consider(std::max(earliest, at->tick));
            else if (wake_holds(w, shell, earliest))
                consider(earliest);
        }
    }
    return best;
}

void step_agent(AgentShell& shell, VirtualTime now, ContextServices& services, const ApplyEffects& apply)
{
    for (std::size_t i = 0; i < shell.behaviors.size(); ++i)
    {
        if (!slot_runnable(shell.behaviors[i], shell, now))
            continue;

        StepEffects effects;
        AgentContext ctx(shell, now, services, effects);
        StepOutcome outcome = shell.behaviors[i].behavior->step(ctx);
        shell.behaviors[i].last = outcome;
        if (!apply(i, outcome, effects))
            break;
    }
    std::erase_if(shell.behaviors, [](const BehaviorSlot& s) { return s.behavior->done(); });
}

} // namespace magent
