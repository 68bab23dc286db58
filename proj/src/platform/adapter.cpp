#include "magent/platform/adapter.hpp"

#include "magent/core/error.hpp"
#include "magent/registry.hpp"

#include <cstdio>

namespace magent {

void validate(const LatencyModel& model)
{
    if (const auto* u = std::get_if<UniformLatency>(&model); u && u->lo > u->hi)
    {
        throw Error(Errc::InvalidLatency,
                    "uniform latency lo " + std::to_string(u->lo) + " > hi " + std::to_string(u->hi));
    }
}

Ticks draw_latency(const LatencyModel& model, std::mt19937_64& rng, LocationId from, LocationId to)
{
    if (const auto* f = std::get_if<FixedLatency>(&model))
        return f->ticks;
    if (const auto* u = std::get_if<UniformLatency>(&model))
    {
        // Plain modulo keeps draws identical across standard libraries.
        const std::uint64_t span = u->hi - u->lo + 1;
        const std::uint64_t r = rng();
        return span == 0 ? u->lo + r : u->lo + r % span;
    }
    const auto& p = std::get<PerLinkLatency>(model);
    auto it = p.links.find({from, to});
    return it == p.links.end() ? p.fallback : it->second;
}

AgentShell PlatformAdapter::inspect(AgentId agent)
{
    auto bytes = snapshot(agent);
    if (!bytes)
        throw Error(Errc::UnknownAgent, to_string(agent) + " is not live");
    return deserialize_shell(*bytes, load_context());
}

LoadContext PlatformAdapter::load_context()
{
    LoadContext ctx{&registry().behaviors, {}, {}};
    ctx.resolve_location = [this](const nlohmann::json& j) {
        if (!j.is_string())
            throw Error(Errc::UnknownLocation, "bad location reference " + j.dump());
        auto id = find_location(j.get<std::string>());
        if (!id)
            throw Error(Errc::UnknownLocation, j.get<std::string>());
        return *id;
    };
    return ctx;
}

std::string make_conversation_id(std::uint64_t seed, std::uint64_t counter)
{
    // splitmix64 over seed and counter; the counter suffix keeps ids unique even on collision.
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (counter + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    z ^= z >> 31;
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(z));
    return std::string("c") + buf + "-" + std::to_string(counter);
}

} // namespace magent
