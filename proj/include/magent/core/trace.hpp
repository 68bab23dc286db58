#pragma once

#include "magent/core/types.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace magent {

enum class TraceKind
{
    Spawn,
    Terminate,
    Send,
    Deliver,
    MigrateStart,
    MigrateEnd,
    BehaviorDone,
    ObjectiveReached,
    ObjectiveMissed,
    Custom,
};

std::string_view trace_kind_name(TraceKind kind) noexcept;
std::optional<TraceKind> trace_kind_from_name(std::string_view name) noexcept;

struct TraceEvent
{
    VirtualTime tick = 0;
    std::uint64_t seq = 0;
    TraceKind kind = TraceKind::Custom;
    AgentId agent;
    nlohmann::json detail = nlohmann::json::object();

    bool operator==(const TraceEvent&) const = default;
};

/// One JSON object with fields in the fixed order tick, seq, kind, agent, detail.
std::string to_json_line(const TraceEvent& event);
TraceEvent trace_event_from_json_line(std::string_view line);

/// Append-only event log. Sequence numbers are issued in append order, which is the
/// deterministic tie-break for events on the same tick.
class TraceLog
{
public:
    const TraceEvent& append(VirtualTime tick, TraceKind kind, AgentId agent,
                             nlohmann::json detail = nlohmann::json::object());

    const std::vector<TraceEvent>& events() const noexcept { return events_; }
    std::size_t size() const noexcept { return events_.size(); }
    bool empty() const noexcept { return events_.empty(); }

    std::vector<TraceEvent> of_kind(TraceKind kind) const;

    /// Events only, one per line, newline terminated.
    std::string to_jsonl() const;

private:
    std::vector<TraceEvent> events_;
};

} // namespace magent
