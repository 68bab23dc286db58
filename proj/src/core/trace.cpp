#include "magent/core/trace.hpp"

#include "magent/core/error.hpp"

#include <array>
#include <utility>

namespace magent {

namespace {

constexpr std::array<std::pair<TraceKind, std::string_view>, 10> kKindNames{{
    {TraceKind::Spawn, "Spawn"},
    {TraceKind::Terminate, "Terminate"},
    {TraceKind::Send, "Send"},
    {TraceKind::Deliver, "Deliver"},
    {TraceKind::MigrateStart, "MigrateStart"},
    {TraceKind::MigrateEnd, "MigrateEnd"},
    {TraceKind::BehaviorDone, "BehaviorDone"},
    {TraceKind::ObjectiveReached, "ObjectiveReached"},
    {TraceKind::ObjectiveMissed, "ObjectiveMissed"},
    {TraceKind::Custom, "Custom"},
}};

} // namespace

std::string_view trace_kind_name(TraceKind kind) noexcept
{
    for (const auto& [k, name] : kKindNames)
    {
        if (k == kind)
            return name;
    }
    return "Custom";
}

std::optional<TraceKind> trace_kind_from_name(std::string_view name) noexcept
{
    for (const auto& [k, n] : kKindNames)
    {
        if (n == name)
            return k;
    }
    return std::nullopt;
}

std::string to_json_line(const TraceEvent& event)
{
    nlohmann::ordered_json line;
    line["tick"] = event.tick;
    line["seq"] = event.seq;
    line["kind"] = trace_kind_name(event.kind);
    line["agent"] = event.agent.value;
    line["detail"] = event.detail;
    return line.dump();
}

TraceEvent trace_event_from_json_line(std::string_view line)
{
    try
    {
        const auto j = nlohmann::json::parse(line);
        const auto kind = trace_kind_from_name(j.at("kind").get<std::string>());
        if (!kind)
            throw Error(Errc::Serialization, "unknown trace kind in: " + std::string(line));
        return TraceEvent{j.at("tick").get<VirtualTime>(), j.at("seq").get<std::uint64_t>(), *kind,
                          AgentId{j.at("agent").get<std::uint64_t>()}, j.at("detail")};
    }
    catch (const nlohmann::json::exception& e)
    {
        throw Error(Errc::Serialization, std::string("trace line: ") + e.what());
    }
}

const TraceEvent& TraceLog::append(VirtualTime tick, TraceKind kind, AgentId agent, nlohmann::json detail)
{
    events_.push_back(TraceEvent{tick, events_.size(), kind, agent, std::move(detail)});
    return events_.back();
}

std::vector<TraceEvent> TraceLog::of_kind(TraceKind kind) const
{
    std::vector<TraceEvent> out;
    for (const auto& e : events_)
    {
        if (e.kind == kind)
            out.push_back(e);
    }
    return out;
}

std::string TraceLog::to_jsonl() const
{
    std::string out;
    for (const auto& e : events_)
    {
        out += to_json_line(e);
        out += '\n';
    }
    return out;
}

} // namespace magent
