#include "adapters.hpp"

#include "inmemory_platform.hpp"
#include "magent/platform/sim_platform.hpp"

namespace magent::testing {

std::string_view adapter_name(AdapterKind kind)
{
    return kind == AdapterKind::Sim ? "sim" : "in-memory";
}

std::unique_ptr<PlatformAdapter> make_adapter(AdapterKind kind, SimConfig config, std::shared_ptr<Registry> registry)
{
    if (kind == AdapterKind::Sim)
        return std::make_unique<SimPlatform>(std::move(config), std::move(registry));
    return std::make_unique<InMemoryPlatform>(std::move(config), std::move(registry));
}

std::vector<TraceEvent> events_of(const PlatformAdapter& p, TraceKind kind)
{
    return p.trace().of_kind(kind);
}

std::vector<TraceEvent> custom_with(const PlatformAdapter& p, std::string_view key)
{
    std::vector<TraceEvent> out;
    for (const auto& e : p.trace().events())
        if (e.kind == TraceKind::Custom && e.detail.contains(key))
            out.push_back(e);
    return out;
}

std::vector<TraceEvent> notes(const PlatformAdapter& p, std::string_view note)
{
    std::vector<TraceEvent> out;
    for (const auto& e : p.trace().events())
        if (e.kind == TraceKind::Custom && e.detail.value("note", std::string{}) == note)
            out.push_back(e);
    return out;
}

} // namespace magent::testing
